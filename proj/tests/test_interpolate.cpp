#include <catch2/catch_amalgamated.hpp>

#include "dimer/interpolate.hpp"

using namespace dimer;

namespace {

std::vector<SamplePoint> sample_fn(const std::function<Rat(long)>& f,
                                   const std::vector<long>& xs) {
  std::vector<SamplePoint> out;
  for (long x : xs) out.push_back({Rat(x), f(x)});
  return out;
}

}  // namespace

TEST_CASE("polynomial utilities") {
  Poly p{Rat(1), Rat(-2), Rat(1)};  // (x-1)^2
  Poly q{Rat(-1), Rat(1)};          // x-1
  REQUIRE(poly_eval(p, Rat(3)) == Rat(4));
  Poly g = poly_gcd(p, q);
  REQUIRE(g == Poly{Rat(-1), Rat(1)});
  auto [quo, rem] = poly_divmod(p, q);
  REQUIRE(rem.empty());
  REQUIRE(quo == Poly{Rat(-1), Rat(1)});
  REQUIRE(poly_gcd(Poly{}, q) == q);
}

TEST_CASE("rational fit recovers the s=2 kernel trajectory") {
  auto f = [](long n) { return make_rat(n - 3, 8 * (n - 1)); };
  auto fit_pts = sample_fn(f, {6, 8, 10, 12, 14, 16});
  auto holdout = sample_fn(f, {18, 20});
  RationalFitResult fit = fit_rational(fit_pts, holdout, 2, 2);
  // reduced form: (x-3) / (8x-8)
  REQUIRE(poly_deg(fit.num) == 1);
  REQUIRE(poly_deg(fit.den) == 1);
  REQUIRE(fit.eval(Rat(100)) == f(100));
  REQUIRE(limit_at_infinity(fit) == make_rat(1, 8));
}

TEST_CASE("rational fit limits for vanishing and constant sequences") {
  auto b_term = [](long n) { return make_rat(-1, 4 * (n - 1)); };
  auto fit = fit_rational(sample_fn(b_term, {6, 8, 10, 12}), sample_fn(b_term, {14, 16}), 2, 2);
  REQUIRE(limit_at_infinity(fit) == Rat(0));

  auto zero = [](long) { return Rat(0); };
  auto zfit = fit_rational(sample_fn(zero, {6, 8, 10, 12}), sample_fn(zero, {14}), 2, 2);
  REQUIRE(limit_at_infinity(zfit) == Rat(0));

  auto diverging = [](long n) { return Rat(n); };
  auto dfit = fit_rational(sample_fn(diverging, {6, 8, 10, 12}), sample_fn(diverging, {14}), 2, 2);
  REQUIRE_THROWS_AS(limit_at_infinity(dfit), ConsistencyError);
}

TEST_CASE("rational fit failures carry the offending sample") {
  // data that is not a (2,2) rational function: x -> x^3 with a twist
  auto weird = [](long n) { return Rat(n * n * n + 1); };
  auto fit_pts = sample_fn(weird, {1, 2, 3, 4, 5, 6, 7});
  auto holdout = sample_fn(weird, {8, 9});
  try {
    fit_rational(fit_pts, holdout, 2, 2);
    FAIL("expected ConsistencyError");
  } catch (const ConsistencyError& e) {
    REQUIRE(std::string(e.what()).find("no rational function") != std::string::npos);
  }
}

TEST_CASE("rational fit round-trips a generic function") {
  // (3x^2 - 5) / (x^2 + 7x + 2)
  Poly num{Rat(-5), Rat(0), Rat(3)};
  Poly den{Rat(2), Rat(7), Rat(1)};
  auto f = [&](long x) -> Rat { return poly_eval(num, Rat(x)) / poly_eval(den, Rat(x)); };
  auto fit = fit_rational(sample_fn(f, {1, 2, 3, 4, 5, 6, 7}), sample_fn(f, {9, 11}), 3, 3);
  // reduced and monic-denominator: den scaled by 1, num intact
  REQUIRE(fit.den == den);
  REQUIRE(fit.num == num);
  REQUIRE(limit_at_infinity(fit) == Rat(3));
}

TEST_CASE("polynomial fit with hold-out verification") {
  // g(d) = -(3/64)(2d - 1), the s = 4 target shape
  auto g = [](long d) -> Rat { return make_rat(-3, 64) * Rat(2 * d - 1); };
  Poly p = fit_polynomial(sample_fn(g, {1, 2, 3}), sample_fn(g, {4}), 3);
  REQUIRE(p == Poly{make_rat(3, 64), make_rat(-3, 32)});

  // degree cap violation
  auto cubic = [](long d) { return Rat(d * d * d); };
  REQUIRE_THROWS_AS(fit_polynomial(sample_fn(cubic, {1, 2, 3, 4}), {}, 2), ConsistencyError);

  // hold-out mismatch mentions the sample
  auto quad = [](long d) { return Rat(d * d); };
  auto bad_holdout = std::vector<SamplePoint>{{Rat(5), Rat(26)}};
  try {
    fit_polynomial(sample_fn(quad, {1, 2, 3}), bad_holdout, 3);
    FAIL("expected ConsistencyError");
  } catch (const ConsistencyError& e) {
    REQUIRE(std::string(e.what()).find("x=5") != std::string::npos);
  }
}
