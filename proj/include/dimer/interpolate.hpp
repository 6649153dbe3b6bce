#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/rational.hpp"

namespace dimer {

/// Dense polynomial with exact rational coefficients, ascending powers.
/// The zero polynomial is the empty vector.
using Poly = std::vector<Rat>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Rat poly_eval(const Poly& p, const Rat& x) {
  Rat acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  poly_trim(out);
  return out;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  poly_trim(out);
  return out;
}

inline Poly poly_scale(Poly p, const Rat& c) {
  for (auto& x : p) x *= c;
  poly_trim(p);
  return p;
}

/// Euclidean division; requires a nonzero divisor.
inline std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
  if (b.empty()) throw std::invalid_argument("polynomial division by zero");
  Poly q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, Rat(0));
  while (poly_deg(a) >= poly_deg(b)) {
    int shift = poly_deg(a) - poly_deg(b);
    Rat coef = a.back() / b.back();
    q[shift] = coef;
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= coef * b[i];
    poly_trim(a);
    if (a.empty()) break;
  }
  poly_trim(q);
  return {q, a};
}

/// Monic gcd; gcd(0, b) is monic b.
inline Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

struct SamplePoint {
  Rat x;
  Rat y;
};

/// A reduced rational function p/q: gcd(p, q) = 1, q monic and nonzero.
struct RationalFitResult {
  Poly num;
  Poly den;

  Rat eval(const Rat& x) const {
    Rat d = poly_eval(den, x);
    if (d == 0) throw ConsistencyError("rational fit evaluated at a pole");
    return poly_eval(num, x) / d;
  }
};

namespace detail {

/// One nonzero nullspace vector of the homogeneous system rows * v = 0,
/// or empty when the nullspace is trivial. Exact Gaussian elimination.
inline std::vector<Rat> nullspace_vector(std::vector<std::vector<Rat>> rows, size_t cols) {
  size_t rank = 0;
  std::vector<size_t> pivot_col;
  for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
    size_t sel = rank;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    Rat inv = rows[rank][col];
    for (size_t j = col; j < cols; ++j) rows[rank][j] /= inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      Rat f = rows[i][col];
      for (size_t j = col; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank == cols) return {};
  // choose the last free column as the generator
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  size_t free_col = cols;
  for (size_t c = cols; c-- > 0;)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  std::vector<Rat> v(cols, Rat(0));
  v[free_col] = 1;
  for (size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -rows[r][free_col];
  return v;
}

inline std::string sample_str(const SamplePoint& p) {
  return "(x=" + rat_str(p.x) + ", y=" + rat_str(p.y) + ")";
}

}  // namespace detail

/// Fits a reduced rational function of numerator degree <= max_num_deg and
/// denominator degree <= max_den_deg through `fit`, trying total degree
/// bottom-up, and verifies the result exactly on every fit and hold-out
/// point. Throws ConsistencyError when no admissible function matches.
inline RationalFitResult fit_rational(const std::vector<SamplePoint>& fit,
                                      const std::vector<SamplePoint>& holdout,
                                      int max_num_deg, int max_den_deg) {
  if (fit.size() < 2) throw std::invalid_argument("rational fit needs at least two samples");
  auto verify = [&](const RationalFitResult& r, std::string* offending) {
    for (const auto* set : {&fit, &holdout}) {
      for (const auto& p : *set) {
        Rat den = poly_eval(r.den, p.x);
        if (den == 0 || poly_eval(r.num, p.x) != p.y * den) {
          if (offending) *offending = detail::sample_str(p);
          return false;
        }
      }
    }
    return true;
  };

  std::string last_offender;
  for (int total = 0; total <= max_num_deg + max_den_deg; ++total) {
    for (int dp = 0; dp <= std::min(total, max_num_deg); ++dp) {
      int dq = total - dp;
      if (dq > max_den_deg) continue;
      if (fit.size() < static_cast<size_t>(dp + dq + 2)) continue;  // need redundancy
      size_t cols = static_cast<size_t>(dp + dq + 2);
      std::vector<std::vector<Rat>> rows;
      rows.reserve(fit.size());
      for (const auto& p : fit) {
        std::vector<Rat> row(cols, Rat(0));
        Rat xp = 1;
        for (int j = 0; j <= dp; ++j) {
          row[j] = xp;
          xp *= p.x;
        }
        xp = 1;
        for (int j = 0; j <= dq; ++j) {
          row[dp + 1 + j] = -p.y * xp;
          xp *= p.x;
        }
        rows.push_back(std::move(row));
      }
      std::vector<Rat> v = detail::nullspace_vector(std::move(rows), cols);
      if (v.empty()) continue;
      Poly num(v.begin(), v.begin() + dp + 1);
      Poly den(v.begin() + dp + 1, v.end());
      poly_trim(num);
      poly_trim(den);
      if (den.empty()) continue;
      Poly g = poly_gcd(num, den);
      if (poly_deg(g) > 0) {
        num = poly_divmod(num, g).first;
        den = poly_divmod(den, g).first;
      }
      Rat lead = den.back();
      for (auto& c : num) c /= lead;
      for (auto& c : den) c /= lead;
      RationalFitResult result{std::move(num), std::move(den)};
      if (verify(result, &last_offender)) return result;
    }
  }
  std::ostringstream msg;
  msg << "no rational function with degrees <= (" << max_num_deg << ", " << max_den_deg
      << ") matches the samples";
  if (!last_offender.empty()) msg << "; first mismatch at " << last_offender;
  throw ConsistencyError(msg.str());
}

/// Value at x -> infinity: 0 when the numerator has lower degree, the ratio
/// of leading coefficients at equal degree. Diverging fits are an error.
inline Rat limit_at_infinity(const RationalFitResult& fit) {
  if (fit.num.empty()) return Rat(0);
  if (poly_deg(fit.num) < poly_deg(fit.den)) return Rat(0);
  if (poly_deg(fit.num) == poly_deg(fit.den)) return fit.num.back() / fit.den.back();
  throw ConsistencyError("sequence diverges: numerator degree exceeds denominator degree");
}

/// Exact Newton interpolation through `fit` (degree <= fit.size()-1), with a
/// degree cap and exact verification on hold-out points.
inline Poly fit_polynomial(const std::vector<SamplePoint>& fit,
                           const std::vector<SamplePoint>& holdout, int max_deg) {
  if (fit.empty()) throw std::invalid_argument("polynomial fit needs samples");
  size_t n = fit.size();
  std::vector<Rat> coef(n);
  for (size_t i = 0; i < n; ++i) coef[i] = fit[i].y;
  for (size_t level = 1; level < n; ++level)
    for (size_t i = n - 1; i >= level; --i)
      coef[i] = (coef[i] - coef[i - 1]) / (fit[i].x - fit[i - level].x);

  Poly result;  // expand Newton form to monomials
  Poly basis{Rat(1)};
  for (size_t i = 0; i < n; ++i) {
    result = poly_add(result, poly_scale(basis, coef[i]));
    basis = poly_mul(basis, Poly{-fit[i].x, Rat(1)});
  }
  poly_trim(result);
  if (poly_deg(result) > max_deg)
    throw ConsistencyError("polynomial fit exceeds the allowed degree " +
                           std::to_string(max_deg));
  for (const auto& p : holdout) {
    if (poly_eval(result, p.x) != p.y)
      throw ConsistencyError("polynomial fit fails the held-out sample " +
                             detail::sample_str(p));
  }
  return result;
}

}  // namespace dimer
