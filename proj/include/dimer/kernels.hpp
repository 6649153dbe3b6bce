#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/interpolate.hpp"
#include "dimer/kernel_enumerate.hpp"
#include "dimer/kernel_patterns.hpp"
#include "dimer/lattice.hpp"
#include "dimer/rational.hpp"

namespace dimer {

struct KernelOptions {
  enum class Engine { kAuto, kBruteForce, kPattern };
  Engine engine = Engine::kAuto;
  long long budget = 100'000'000;
  bool allow_order5 = false;  // s = 5 is gated: slow and outside the defaults
};

/// Exact finite-volume kernel J-bar_s on a concrete torus. The pattern
/// engine is used whenever every side is at least 2s+1; smaller lattices
/// (and explicit requests) fall back to brute-force tuple enumeration.
inline Rat kernel_finite(const TorusLattice& lat, int s, const KernelOptions& opts = {}) {
  if (s < 1) throw std::invalid_argument("cluster order must be >= 1");
  if (s == 5 && !opts.allow_order5)
    throw std::invalid_argument("cluster order 5 is feature-gated; enable it explicitly");
  if (s > 5) throw std::invalid_argument("cluster orders above 5 are not supported");
  bool pattern_ok = lat.min_side() >= 2 * s + 1;
  bool use_pattern = opts.engine == KernelOptions::Engine::kPattern ||
                     (opts.engine == KernelOptions::Engine::kAuto && pattern_ok);
  if (use_pattern) {
    if (!pattern_ok)
      throw std::invalid_argument("pattern engine needs all torus sides >= 2s+1");
    return pattern_kernel(s, lat.dim()).eval(lat.vertex_count());
  }
  if (s > 4) throw BudgetError("brute-force kernels are limited to s <= 4");
  return BruteForceKernel(lat, opts.budget).anchored_sum(s);
}

/// One exact finite-volume sample of the kernel pipeline.
struct KernelSample {
  std::vector<int> dims;
  std::int64_t N = 0;
  Rat value;
};

/// Default size schedule for (s, d): the `count` smallest tori with every
/// side >= 2s+1, an even vertex count, and pairwise distinct vertex counts.
/// Sides are reported in non-decreasing order.
inline std::vector<std::vector<int>> default_size_schedule(int s, int d, int count) {
  int lmin = 2 * s + 1;
  int lmax = lmin + 2 * count + 2;
  std::vector<std::vector<int>> all;
  std::vector<int> cur(d);
  std::function<void(int, int)> rec = [&](int axis, int low) {
    if (axis == d) {
      all.push_back(cur);
      return;
    }
    for (int side = low; side <= lmax; ++side) {
      cur[axis] = side;
      rec(axis + 1, side);
    }
  };
  rec(0, lmin);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    std::int64_t na = 1, nb = 1;
    for (int x : a) na *= x;
    for (int x : b) nb *= x;
    return na != nb ? na < nb : a < b;
  });
  std::vector<std::vector<int>> out;
  std::int64_t last_n = -1;
  for (const auto& dims : all) {
    std::int64_t n = 1;
    for (int x : dims) n *= x;
    if (n % 2 != 0 || n == last_n) continue;
    out.push_back(dims);
    last_n = n;
    if (static_cast<int>(out.size()) == count) break;
  }
  if (static_cast<int>(out.size()) < count)
    throw std::invalid_argument("size schedule window too small");
  return out;
}

/// Kernel of order s in dimension d: exact per-N values, the interpolated
/// N -> infinity limit, and (once combined across dimensions) the
/// coefficients C_k of sum_k C_k / d^k.
struct KernelResult {
  int s = 0;
  int d = 0;
  std::vector<KernelSample> per_N;
  Rat limit;
  RationalFitResult fit;           // reduced rational function of N
  std::map<int, Rat> d_poly;       // k -> C_k (all-d pipeline only)
  int verified_r = 0;              // smallest k with C_k != 0; 0 for the zero kernel
};

/// Interpolates exact samples to their N -> infinity limit. The last two
/// samples are held out of the fit and verified exactly.
inline std::pair<Rat, RationalFitResult> kernel_limit(
    int s, const std::vector<KernelSample>& samples) {
  if (samples.size() < 4)
    throw std::invalid_argument("kernel limit needs at least four samples");
  std::vector<SamplePoint> fit_pts, holdout_pts;
  for (size_t i = 0; i + 2 < samples.size(); ++i)
    fit_pts.push_back({Rat(Int(samples[i].N)), samples[i].value});
  for (size_t i = samples.size() - 2; i < samples.size(); ++i)
    holdout_pts.push_back({Rat(Int(samples[i].N)), samples[i].value});
  RationalFitResult fit = fit_rational(fit_pts, holdout_pts, s, s);
  Rat limit = limit_at_infinity(fit);
  return {limit, fit};
}

/// Computes the (s, d) kernel over the default or a caller-provided size
/// schedule and extracts the N -> infinity limit.
inline KernelResult compute_kernel(int s, int d, const KernelOptions& opts = {},
                                   std::vector<std::vector<int>> schedule = {}) {
  KernelResult out;
  out.s = s;
  out.d = d;
  if (schedule.empty()) schedule = default_size_schedule(s, d, 2 * s + 4);
  for (const auto& dims : schedule) {
    TorusLattice lat = build_torus(dims);
    if (static_cast<int>(dims.size()) != d)
      throw std::invalid_argument("schedule dimension mismatch");
    KernelSample sample;
    sample.dims = dims;
    sample.N = lat.vertex_count();
    sample.value = kernel_finite(lat, s, opts);
    out.per_N.push_back(std::move(sample));
  }
  auto [limit, fit] = kernel_limit(s, out.per_N);
  out.limit = limit;
  out.fit = std::move(fit);
  return out;
}

/// Sampled dimensions for the 1/d fit: {1,2,3} for s <= 3 and {1,..,s}
/// for larger s, the last dimension always held out of the fit.
inline std::vector<int> default_dimension_schedule(int s) {
  int top = std::max(s, 3);
  std::vector<int> ds;
  for (int d = 1; d <= top; ++d) ds.push_back(d);
  return ds;
}

/// Fits d^{s-1} J-bar_s(d) as a polynomial in d (degree <= s-1) through the
/// limits at all sampled dimensions but the last, verifies the last
/// dimension exactly, and converts the polynomial to C_k coefficients of
/// sum C_k/d^k. Checks the expected support k in [ceil(s/2), s-1].
struct KernelFamily {
  int s = 0;
  std::vector<int> dimensions;      // fit dimensions followed by the hold-out
  std::map<int, KernelResult> by_d; // per-dimension pipelines
  std::map<int, Rat> d_poly;        // k -> C_k, zero coefficients omitted
  int verified_r = 0;
};

inline KernelFamily compute_kernel_family(int s, const KernelOptions& opts = {},
                                          std::vector<int> dimensions = {}) {
  if (dimensions.empty()) dimensions = default_dimension_schedule(s);
  if (static_cast<int>(dimensions.size()) < 2)
    throw std::invalid_argument("the 1/d fit needs at least two dimensions");
  KernelFamily fam;
  fam.s = s;
  fam.dimensions = dimensions;
  for (int d : dimensions) fam.by_d.emplace(d, compute_kernel(s, d, opts));

  std::vector<SamplePoint> fit_pts, holdout_pts;
  for (size_t i = 0; i < dimensions.size(); ++i) {
    int d = dimensions[i];
    Rat scaled = fam.by_d.at(d).limit *
                 rat_pow(Rat(Int(d)), static_cast<unsigned long>(s - 1));
    SamplePoint p{Rat(Int(d)), scaled};
    if (i + 1 < dimensions.size())
      fit_pts.push_back(p);
    else
      holdout_pts.push_back(p);
  }
  Poly g = fit_polynomial(fit_pts, holdout_pts, s - 1);
  std::map<int, Rat> coeffs;
  for (int j = 0; j <= poly_deg(g); ++j) {
    if (g[j] == 0) continue;
    coeffs[s - 1 - j] = g[j];
  }
  int r = 0;
  if (!coeffs.empty()) {
    r = coeffs.begin()->first;
    int lo = (s + 1) / 2;  // ceil(s/2)
    if (r < lo) {
      std::ostringstream msg;
      msg << "kernel J_" << s << " has a 1/d^" << r
          << " term, outside the expected support r >= s/2";
      throw ConsistencyError(msg.str());
    }
  }
  fam.d_poly = std::move(coeffs);
  fam.verified_r = r;
  for (auto& [d, res] : fam.by_d) {
    res.d_poly = fam.d_poly;
    res.verified_r = fam.verified_r;
  }
  return fam;
}

/// Evaluates the fitted 1/d polynomial at a concrete dimension.
inline Rat d_poly_eval(const std::map<int, Rat>& d_poly, int d) {
  Rat acc = 0;
  for (const auto& [k, c] : d_poly)
    acc += c / rat_pow(Rat(Int(d)), static_cast<unsigned long>(k));
  return acc;
}

/// The d = 1, s = 2 Appendix decomposition: per-N values of the six terms,
/// their interpolated limits, and the exact consistency of their sum with
/// the kernel itself.
struct AppendixReport {
  std::vector<KernelSample> kernel_per_N;
  std::array<std::vector<Rat>, 6> term_per_N;
  std::array<Rat, 6> term_limits;
  Rat kernel_limit_value;
  static constexpr std::array<const char*, 6> kNames{"A", "B", "C", "D", "E", "F"};
};

inline AppendixReport appendix_breakdown(const KernelOptions& opts = {},
                                         std::vector<std::vector<int>> schedule = {}) {
  constexpr int s = 2;
  if (schedule.empty()) schedule = default_size_schedule(s, 1, 2 * s + 4);
  PatternKernel pk = pattern_kernel(s, 1);
  AppendixReport rep;
  for (const auto& dims : schedule) {
    TorusLattice lat = build_torus(dims);
    std::int64_t N = lat.vertex_count();
    KernelSample sample;
    sample.dims = dims;
    sample.N = N;
    sample.value = pk.eval(N);
    Rat sum = 0;
    for (int t = 0; t < 6; ++t) {
      Rat term = pk.eval_appendix(static_cast<AppendixClass>(t), N);
      rep.term_per_N[t].push_back(term);
      sum += term;
    }
    if (sum != sample.value)
      throw ConsistencyError("appendix terms do not sum to the kernel at N = " +
                             std::to_string(N));
    rep.kernel_per_N.push_back(std::move(sample));
  }
  for (int t = 0; t < 6; ++t) {
    std::vector<KernelSample> term_samples;
    for (size_t i = 0; i < schedule.size(); ++i) {
      KernelSample ks;
      ks.dims = schedule[i];
      ks.N = rep.kernel_per_N[i].N;
      ks.value = rep.term_per_N[t][i];
      term_samples.push_back(std::move(ks));
    }
    rep.term_limits[t] = kernel_limit(s, term_samples).first;
  }
  rep.kernel_limit_value = kernel_limit(s, rep.kernel_per_N).first;
  (void)opts;
  return rep;
}

}  // namespace dimer
