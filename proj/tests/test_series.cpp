#include <catch2/catch_amalgamated.hpp>

#include "dimer/series.hpp"

using namespace dimer;

namespace {

TruncatedSeries from_coeffs(std::vector<Rat> cs) {
  TruncatedSeries s(static_cast<int>(cs.size()) - 1);
  for (size_t i = 0; i < cs.size(); ++i) s.set(static_cast<int>(i), cs[i]);
  return s;
}

std::map<int, TruncatedSeries> paper_kernels(int order) {
  // Jbar_2 = u/8, Jbar_3 = u^2/12, Jbar_4 = -3u^2/32 + 3u^3/64
  std::map<int, TruncatedSeries> jbar;
  jbar.emplace(2, TruncatedSeries::monomial(make_rat(1, 8), 1, order));
  jbar.emplace(3, TruncatedSeries::monomial(make_rat(1, 12), 2, order));
  TruncatedSeries j4(order);
  if (order >= 2) j4.set(2, make_rat(-3, 32));
  if (order >= 3) j4.set(3, make_rat(3, 64));
  jbar.emplace(4, j4);
  return jbar;
}

std::map<int, std::map<int, Rat>> paper_d_polys() {
  return {{2, {{1, make_rat(1, 8)}}},
          {3, {{2, make_rat(1, 12)}}},
          {4, {{2, make_rat(-3, 32)}, {3, make_rat(3, 64)}}}};
}

}  // namespace

TEST_CASE("series ring operations") {
  TruncatedSeries s = TruncatedSeries::monomial(make_rat(1, 4), 1, 2);  // S = u/4
  TruncatedSeries one = TruncatedSeries::constant(1, 2);
  TruncatedSeries lg = log_series(one - Rat(2) * s);  // log(1 - u/2)
  REQUIRE(lg == from_coeffs({Rat(0), make_rat(-1, 2), make_rat(-1, 8)}));

  REQUIRE(exp_series(TruncatedSeries(3)) == TruncatedSeries::constant(1, 3));

  // log(ab) = log a + log b
  TruncatedSeries a = from_coeffs({Rat(1), make_rat(1, 3), make_rat(-1, 7), Rat(2), Rat(0)});
  TruncatedSeries b = from_coeffs({Rat(1), make_rat(-1, 5), make_rat(1, 2), Rat(0), Rat(5)});
  REQUIRE(log_series(a * b) == log_series(a) + log_series(b));
  // exp(log a) = a
  REQUIRE(exp_series(log_series(a)) == a);
  // (1-x)^{-2} via pow_series
  TruncatedSeries x = TruncatedSeries::monomial(Rat(1), 1, 3);
  TruncatedSeries inv2 = pow_series(TruncatedSeries::constant(1, 3) - x, -2);
  REQUIRE(inv2 == from_coeffs({Rat(1), Rat(2), Rat(3), Rat(4)}));

  REQUIRE_THROWS_AS(exp_series(TruncatedSeries::constant(1, 2)), std::invalid_argument);
  REQUIRE_THROWS_AS(log_series(TruncatedSeries::constant(2, 2)), std::invalid_argument);
}

TEST_CASE("solve_alpha on a single kernel") {
  std::map<int, TruncatedSeries> jbar;
  jbar.emplace(2, TruncatedSeries::monomial(make_rat(1, 8), 1, 1));
  AlphaSolution sol1 = solve_alpha(jbar, 1);
  REQUIRE(sol1.alpha.at(2) == from_coeffs({Rat(0), make_rat(1, 8)}));

  std::map<int, TruncatedSeries> jbar2;
  jbar2.emplace(2, TruncatedSeries::monomial(make_rat(1, 8), 1, 2));
  AlphaSolution sol2 = solve_alpha(jbar2, 2);
  REQUIRE(sol2.alpha.at(2) == from_coeffs({Rat(0), make_rat(1, 8), make_rat(1, 8)}));

  std::map<int, TruncatedSeries> zeros;
  zeros.emplace(2, TruncatedSeries(3));
  zeros.emplace(3, TruncatedSeries(3));
  AlphaSolution sol0 = solve_alpha(zeros, 3);
  REQUIRE(sol0.alpha.at(2).is_zero());
  REQUIRE(sol0.alpha.at(3).is_zero());
  REQUIRE(sol0.S.is_zero());

  std::map<int, TruncatedSeries> bad;
  bad.emplace(2, TruncatedSeries::constant(make_rat(1, 8), 2));
  REQUIRE_THROWS_AS(solve_alpha(bad, 2), std::invalid_argument);
}

TEST_CASE("fixed point satisfies the defining equation and the closed form") {
  for (int order : {2, 3, 4}) {
    auto jbar = paper_kernels(order);
    AlphaSolution sol = solve_alpha(jbar, order);
    TruncatedSeries one = TruncatedSeries::constant(1, order);
    for (const auto& [k, jk] : jbar) {
      // residual of alpha_k = Jbar_k e^{F_k}
      REQUIRE((sol.alpha.at(k) - jk * exp_series(sol.F.at(k))).is_zero());
      // S consistency
    }
    TruncatedSeries weighted(order);
    for (const auto& [k, ak] : sol.alpha) weighted = weighted + Rat(k) * ak;
    REQUIRE(weighted == sol.S);

    auto closed = alpha_closed_form(jbar, order);
    for (const auto& [k, ak] : sol.alpha) REQUIRE(closed.at(k) == ak);
  }
}

TEST_CASE("exponent series reproduces the published coefficients") {
  {
    std::map<int, TruncatedSeries> jbar;
    jbar.emplace(2, TruncatedSeries::monomial(make_rat(1, 8), 1, 1));
    AlphaSolution sol = solve_alpha(jbar, 1);
    TruncatedSeries e = exponent_series(sol, jbar);
    REQUIRE(e == from_coeffs({Rat(0), make_rat(1, 8)}));
  }
  {
    std::map<int, TruncatedSeries> empty;
    AlphaSolution sol = solve_alpha(empty, 2);
    REQUIRE(exponent_series(sol, empty).is_zero());
  }
  {
    auto jbar = paper_kernels(2);
    AlphaSolution sol = solve_alpha(jbar, 2);
    TruncatedSeries e = exponent_series(sol, jbar);
    REQUIRE(e == from_coeffs({Rat(0), make_rat(1, 8), make_rat(5, 96)}));
  }
}

TEST_CASE("truncation consistency") {
  auto fine = paper_kernels(5);
  AlphaSolution sol5 = solve_alpha(fine, 5);
  TruncatedSeries e5 = exponent_series(sol5, fine);
  auto coarse = paper_kernels(3);
  AlphaSolution sol3 = solve_alpha(coarse, 3);
  TruncatedSeries e3 = exponent_series(sol3, coarse);
  REQUIRE(e5.truncated(3) == e3);
}

TEST_CASE("lambda expansion end to end") {
  LambdaExpansion lam = lambda_expansion(paper_d_polys(), 2, 2);
  REQUIRE(lam.order == 2);
  REQUIRE(lam.c == std::vector<Rat>{make_rat(1, 8), make_rat(5, 96)});
  REQUIRE(lam.leading == "0.5*ln(2d)-0.5");
  REQUIRE(lam.kernel_signs.at(2) == "positive");
  REQUIRE(lam.kernel_signs.at(3) == "positive");
  REQUIRE(lam.kernel_signs.at(4) == "mixed");  // coefficient signs of the 1/d form
  REQUIRE(lam.eval_value.substr(0, 6) == "0.2686");

  // K = 1 only needs J_2 and must flag what c_2 would require
  std::map<int, std::map<int, Rat>> only_j2{{2, {{1, make_rat(1, 8)}}}};
  LambdaExpansion l1 = lambda_expansion(only_j2, 1);
  REQUIRE(l1.c == std::vector<Rat>{make_rat(1, 8)});
  REQUIRE(l1.note.find("J_3") != std::string::npos);
  REQUIRE(l1.note.find("J_4") != std::string::npos);

  // missing orders are refused with an explanation
  try {
    lambda_expansion(only_j2, 2);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    REQUIRE(std::string(e.what()).find("J_3") != std::string::npos);
    REQUIRE(std::string(e.what()).find("J_4") != std::string::npos);
  }

  // no kernels at all: the zeroth-order result stands alone
  LambdaExpansion l0 = lambda_expansion({}, 0, 2);
  REQUIRE(l0.c.empty());
  REQUIRE(l0.leading == "0.5*ln(2d)-0.5");
  // (1/2) ln 4 - 1/2 = ln 2 - 1/2 ~ 0.19314718...
  REQUIRE(l0.eval_value.substr(0, 7) == "0.19314");
}

TEST_CASE("order bookkeeping: higher kernels cannot reach low orders") {
  auto base = paper_d_polys();
  LambdaExpansion reference = lambda_expansion(base, 2);

  auto perturbed = base;
  perturbed[5] = {{3, make_rat(7, 3)}};  // any admissible Jbar_5
  perturbed[6] = {{4, make_rat(-2, 9)}};
  LambdaExpansion shifted = lambda_expansion(perturbed, 2);
  REQUIRE(shifted.c == reference.c);

  // an inadmissible coefficient (violating r >= s/2) is rejected
  auto bad = base;
  bad[4] = {{1, make_rat(1, 10)}};
  REQUIRE_THROWS_AS(lambda_expansion(bad, 2), std::invalid_argument);
}

TEST_CASE("numeric evaluation is exact-rational plus a symbolic leading term") {
  LambdaExpansion lam = lambda_expansion(paper_d_polys(), 2);
  Real at3 = lam.evaluate(3);
  // (1/2) ln 6 - 1/2 + 1/24 + 5/864
  Real want = log(Real(6)) / 2 - Real(1) / 2 + Real(1) / 24 + Real(5) / 864;
  REQUIRE(abs(at3 - want) < Real("1e-45"));
}
