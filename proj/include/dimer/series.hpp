#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/rational.hpp"

namespace dimer {

/// Formal power series in u = 1/d with exact rational coefficients,
/// truncated at a fixed order K: a_0 + a_1 u + ... + a_K u^K.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order) : coeffs_(order + 1, Rat(0)) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
  }

  static TruncatedSeries constant(const Rat& value, int order) {
    TruncatedSeries s(order);
    s.coeffs_[0] = value;
    return s;
  }

  static TruncatedSeries monomial(const Rat& value, int power, int order) {
    TruncatedSeries s(order);
    if (power < 0) throw std::invalid_argument("monomial power must be >= 0");
    if (power <= order) s.coeffs_[power] = value;
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Rat& operator[](int i) const { return coeffs_.at(i); }
  void set(int i, const Rat& v) { coeffs_.at(i) = v; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }

  TruncatedSeries truncated(int new_order) const {
    TruncatedSeries out(new_order);
    for (int i = 0; i <= std::min(new_order, order()); ++i) out.coeffs_[i] = coeffs_[i];
    return out;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.coeffs_ == b.coeffs_;
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_orders(a, b);
    TruncatedSeries out(a.order());
    for (int i = 0; i <= a.order(); ++i) out.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
    return out;
  }

  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_orders(a, b);
    TruncatedSeries out(a.order());
    for (int i = 0; i <= a.order(); ++i) out.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
    return out;
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_orders(a, b);
    TruncatedSeries out(a.order());
    for (int i = 0; i <= a.order(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (int j = 0; i + j <= a.order(); ++j) {
        if (b.coeffs_[j] == 0) continue;
        out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return out;
  }

  friend TruncatedSeries operator*(const Rat& c, const TruncatedSeries& a) {
    TruncatedSeries out(a.order());
    for (int i = 0; i <= a.order(); ++i) out.coeffs_[i] = c * a.coeffs_[i];
    return out;
  }

  /// Exact evaluation at u = 1/d.
  Rat eval_at_inverse(int d) const {
    Rat u = make_rat(1, d);
    Rat acc = 0;
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * u + coeffs_[i];
    return acc;
  }

 private:
  static void check_orders(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.order() != b.order())
      throw std::invalid_argument("series orders do not match");
  }

  std::vector<Rat> coeffs_;
};

/// exp of a series with zero constant term: sum a^m / m! truncated.
inline TruncatedSeries exp_series(const TruncatedSeries& a) {
  if (a[0] != 0)
    throw std::invalid_argument("exp needs a zero constant term");
  TruncatedSeries out = TruncatedSeries::constant(1, a.order());
  TruncatedSeries power = TruncatedSeries::constant(1, a.order());
  Rat inv_fact = 1;
  for (int m = 1; m <= a.order(); ++m) {
    power = power * a;
    inv_fact /= m;
    out = out + inv_fact * power;
  }
  return out;
}

/// log of a series with constant term 1: -sum (1-a)^m / m truncated.
inline TruncatedSeries log_series(const TruncatedSeries& a) {
  if (a[0] != 1)
    throw std::invalid_argument("log needs constant term 1");
  TruncatedSeries x = TruncatedSeries::constant(1, a.order()) - a;  // O(u)
  TruncatedSeries out(a.order());
  TruncatedSeries power = TruncatedSeries::constant(1, a.order());
  for (int m = 1; m <= a.order(); ++m) {
    power = power * x;
    out = out - make_rat(1, m) * power;
  }
  return out;
}

/// Integer power; negative exponents via exp(e log a), requiring a_0 = 1.
inline TruncatedSeries pow_series(const TruncatedSeries& a, int e) {
  if (e >= 0) {
    TruncatedSeries out = TruncatedSeries::constant(1, a.order());
    for (int i = 0; i < e; ++i) out = out * a;
    return out;
  }
  return exp_series(Rat(e) * log_series(a));
}

/// The stationarity solution: alpha_k through order K, the weighted sum
/// S = sum k alpha_k, and the exponents F_k with alpha_k = Jbar_k e^{F_k}.
struct AlphaSolution {
  std::map<int, TruncatedSeries> alpha;
  TruncatedSeries S;
  std::map<int, TruncatedSeries> F;

  explicit AlphaSolution(int order) : S(order) {}
};

namespace detail {

inline TruncatedSeries weighted_sum(const std::map<int, TruncatedSeries>& alpha, int order) {
  TruncatedSeries s(order);
  for (const auto& [k, a] : alpha) s = s + Rat(k) * a;
  return s;
}

/// F_k(alpha) = -k log(1 - 2 S): the alpha_k derivative of the bracket
/// ((1-2S)/2) log(1-2S) + S, S = sum i alpha_i. Derived once by hand and
/// pinned by the closed-form agreement test.
inline TruncatedSeries bracket_derivative(int k, const TruncatedSeries& S) {
  TruncatedSeries one = TruncatedSeries::constant(1, S.order());
  return Rat(-k) * log_series(one - Rat(2) * S);
}

}  // namespace detail

/// Solves alpha_k = Jbar_k e^{F_k(alpha)} by iterating from alpha = 0. Each
/// round freezes at least one more order, so the fixed point is reached in
/// at most K+1 rounds; K+2 rounds without convergence is an error.
inline AlphaSolution solve_alpha(const std::map<int, TruncatedSeries>& jbar, int order) {
  for (const auto& [k, series] : jbar) {
    if (k < 1) throw std::invalid_argument("kernel index must be >= 1");
    if (series.order() != order)
      throw std::invalid_argument("kernel series order mismatch");
    if (series[0] != 0)
      throw std::invalid_argument("kernel series must have zero constant term");
  }
  AlphaSolution sol(order);
  for (const auto& [k, series] : jbar) sol.alpha.emplace(k, TruncatedSeries(order));

  for (int round = 0; round <= order + 2; ++round) {
    TruncatedSeries S = detail::weighted_sum(sol.alpha, order);
    std::map<int, TruncatedSeries> next;
    bool converged = true;
    for (const auto& [k, jk] : jbar) {
      TruncatedSeries f = detail::bracket_derivative(k, S);
      TruncatedSeries a = jk * exp_series(f);
      if (!(a == sol.alpha.at(k))) converged = false;
      next.emplace(k, std::move(a));
    }
    if (converged) {
      sol.S = S;
      for (const auto& [k, jk] : jbar) sol.F.emplace(k, detail::bracket_derivative(k, S));
      // defining-equation residual must vanish identically
      for (const auto& [k, jk] : jbar) {
        TruncatedSeries residual = sol.alpha.at(k) - jk * exp_series(sol.F.at(k));
        if (!residual.is_zero())
          throw ConsistencyError("alpha fixed point residual is nonzero");
      }
      return sol;
    }
    sol.alpha = std::move(next);
  }
  throw ConsistencyError(
      "alpha iteration did not converge; a kernel series likely has a nonzero constant term");
}

/// Independent route to the same solution: S solves the scalar equation
/// S = sum_k k Jbar_k (1-2S)^{-k}, then alpha_k = Jbar_k (1-2S)^{-k}.
inline std::map<int, TruncatedSeries> alpha_closed_form(
    const std::map<int, TruncatedSeries>& jbar, int order) {
  TruncatedSeries S(order);
  TruncatedSeries one = TruncatedSeries::constant(1, order);
  for (int round = 0; round <= order + 2; ++round) {
    TruncatedSeries next(order);
    for (const auto& [k, jk] : jbar)
      next = next + Rat(k) * (jk * pow_series(one - Rat(2) * S, -k));
    if (next == S) break;
    S = next;
  }
  std::map<int, TruncatedSeries> alpha;
  for (const auto& [k, jk] : jbar)
    alpha.emplace(k, jk * pow_series(one - Rat(2) * S, -k));
  return alpha;
}

/// The exponent of Eq-style asymptotics: -sum alpha_i F_i + sum Jbar_i
/// e^{F_i} + ((1-2S)/2) log(1-2S) + S, whose u-coefficients are the
/// correction coefficients c_i.
inline TruncatedSeries exponent_series(const AlphaSolution& sol,
                                       const std::map<int, TruncatedSeries>& jbar) {
  int order = sol.S.order();
  TruncatedSeries out(order);
  for (const auto& [k, jk] : jbar) {
    const TruncatedSeries& f = sol.F.at(k);
    out = out - sol.alpha.at(k) * f;
    out = out + jk * exp_series(f);
  }
  TruncatedSeries one = TruncatedSeries::constant(1, order);
  TruncatedSeries one_minus = one - Rat(2) * sol.S;
  out = out + make_rat(1, 2) * (one_minus * log_series(one_minus));
  out = out + sol.S;
  if (out[0] != 0)
    throw ConsistencyError("exponent series has a nonzero constant term");
  return out;
}

/// The lambda_d expansion: exact c_1..c_K plus the symbolic leading part
/// (1/2) ln(2d) - 1/2, with optional high-precision evaluation at a given d.
struct LambdaExpansion {
  int order = 0;
  std::vector<Rat> c;  // c[i] is the coefficient of 1/d^{i+1}
  std::string leading = "0.5*ln(2d)-0.5";
  std::map<int, std::string> kernel_signs;  // s -> zero|positive|negative|mixed
  std::optional<int> eval_d;
  std::string eval_value;
  std::string note;

  /// (1/2) ln(2d) - 1/2 + sum c_i / d^i at `digits` significant digits.
  Real evaluate(int d, unsigned digits = 50) const {
    ensure_real_precision(digits);
    Real value = log(Real(2) * d) / 2 - Real(make_rat(1, 2).get_mpq_t());
    Rat tail = 0;
    for (int i = 0; i < order; ++i)
      tail += c[i] / rat_pow(Rat(Int(d)), static_cast<unsigned long>(i + 1));
    return value + to_real(tail);
  }
};

/// Assembles the expansion from kernel 1/d polynomials. Requires every
/// order s in [2, 2K]; kernels above that range cannot influence c_1..c_K
/// because Jbar_s = O(u^{ceil(s/2)}).
inline LambdaExpansion lambda_expansion(const std::map<int, std::map<int, Rat>>& kernel_d_polys,
                                        int order, std::optional<int> eval_d = std::nullopt,
                                        unsigned digits = 50) {
  if (order < 0) throw std::invalid_argument("expansion order must be >= 0");
  std::vector<int> missing;
  for (int s = 2; s <= 2 * order; ++s)
    if (!kernel_d_polys.count(s)) missing.push_back(s);
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "order " << order << " needs kernels";
    for (int s : missing) msg << " J_" << s;
    msg << "; rerun with the missing orders or lower K";
    throw std::invalid_argument(msg.str());
  }

  std::map<int, TruncatedSeries> jbar;
  LambdaExpansion out;
  out.order = order;
  for (const auto& [s, d_poly] : kernel_d_polys) {
    TruncatedSeries series(order);
    bool pos = false, neg = false;
    for (const auto& [k, ck] : d_poly) {
      if (ck == 0) continue;
      if (k < (s + 1) / 2 || k > s - 1) {
        std::ostringstream msg;
        msg << "kernel J_" << s << " has coefficient at 1/d^" << k
            << ", outside its admissible range";
        throw std::invalid_argument(msg.str());
      }
      if (k <= order) series.set(k, series[k] + ck);
      (ck > 0 ? pos : neg) = true;
    }
    out.kernel_signs[s] = !pos && !neg ? "zero" : (pos && neg ? "mixed" : (pos ? "positive" : "negative"));
    jbar.emplace(s, std::move(series));
  }

  if (order > 0) {
    AlphaSolution sol = solve_alpha(jbar, order);
    TruncatedSeries exponent = exponent_series(sol, jbar);
    for (int i = 1; i <= order; ++i) out.c.push_back(exponent[i]);
  }
  {
    std::ostringstream note;
    note << "c_" << (order + 1) << " additionally requires";
    for (int s = std::max(2, 2 * order + 1); s <= 2 * (order + 1); ++s) note << " J_" << s;
    out.note = note.str();
  }
  if (eval_d) {
    if (*eval_d < 1) throw std::invalid_argument("evaluation dimension must be >= 1");
    out.eval_d = eval_d;
    out.eval_value = real_str(out.evaluate(*eval_d, digits), digits);
  }
  return out;
}

}  // namespace dimer
