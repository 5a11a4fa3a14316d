#pragma once

// Integration over the unit circle against normalized Lebesgue measure m.
//
// The deterministic route is the uniform-grid (periodic trapezoid) average.
// For integrands analytic in an annulus around the circle, which covers every
// expression built from finite Blaschke products, it converges geometrically.
// Grids double until two consecutive levels agree to `tol`; the new level
// reuses the previous points and only evaluates the interleaved ones.
//
// Sums are accumulated in fixed blocks of kBlock points followed by a pairwise
// reduction over blocks, so the value does not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/parallel.hpp"
#include "innerclt/rng.hpp"

namespace innerclt {

struct QuadratureResult {
  cplx value;
  long grid_size = 0;
  double est_error = 0.0;
};

struct QuadratureVectorResult {
  std::vector<cplx> values;
  long grid_size = 0;
  double est_error = 0.0;
};

struct MonteCarloResult {
  cplx value;
  long samples = 0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

struct QuadratureOptions {
  double tol = 1e-12;
  long start_grid = 256;
  long max_grid = 1L << 22;
  unsigned workers = 0;
};

inline constexpr long kDefaultGridCap = 1L << 18;
inline constexpr long kMinGrid = 256;

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

inline long next_power_of_two(long n) {
  long p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Degree-aware starting grid: next power of two ≥ 8·D, within [2^8, 2^18].
inline long grid_for_degree(long total_degree) {
  if (total_degree > kDefaultGridCap / 8) return kDefaultGridCap;
  return std::clamp(next_power_of_two(8 * std::max(1L, total_degree)), kMinGrid,
                    kDefaultGridCap);
}

namespace detail {

inline constexpr long kBlock = 4096;

// Sum of g over θ_j = 2π(j + shift)/K, j < K, for an m-valued integrand
// g(z, out). Returns m sums.
template <class G>
std::vector<cplx> grid_sums(G& g, std::size_t m, long K, double shift,
                            unsigned workers) {
  const long blocks = (K + kBlock - 1) / kBlock;
  std::vector<cplx> partial(static_cast<std::size_t>(blocks) * m);
  parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t b) {
    const long lo = static_cast<long>(b) * kBlock;
    const long hi = std::min(K, lo + kBlock);
    std::vector<cplx> vals(static_cast<std::size_t>(hi - lo) * m);
    std::vector<cplx> out(m);
    for (long j = lo; j < hi; ++j) {
      const double theta = kTwoPi * (static_cast<double>(j) + shift) / static_cast<double>(K);
      g(std::polar(1.0, theta), std::span<cplx>(out));
      for (std::size_t c = 0; c < m; ++c)
        vals[c * static_cast<std::size_t>(hi - lo) + static_cast<std::size_t>(j - lo)] = out[c];
    }
    const std::size_t len = static_cast<std::size_t>(hi - lo);
    for (std::size_t c = 0; c < m; ++c)
      partial[c * static_cast<std::size_t>(blocks) + b] =
          pairwise_sum(std::span<const cplx>(vals.data() + c * len, len));
  });
  std::vector<cplx> sums(m);
  for (std::size_t c = 0; c < m; ++c)
    sums[c] = pairwise_sum(std::span<const cplx>(
        partial.data() + c * static_cast<std::size_t>(blocks),
        static_cast<std::size_t>(blocks)));
  return sums;
}

template <class G>
auto as_vector_integrand(G& g) {
  return [&g](cplx z, std::span<cplx> out) { out[0] = g(z); };
}

}  // namespace detail

/// Uniform-grid average of an m-valued integrand on exactly K points.
template <class G>
std::vector<cplx> integrate_fixed_multi(G&& g, std::size_t m, long K,
                                        unsigned workers = 0) {
  if (K < 1) throw InvalidArgument("integrate_fixed: grid must be positive");
  auto sums = detail::grid_sums(g, m, K, 0.0, workers);
  for (auto& s : sums) s /= static_cast<double>(K);
  return sums;
}

template <class G>
cplx integrate_fixed(G&& g, long K, unsigned workers = 0) {
  auto vg = detail::as_vector_integrand(g);
  return integrate_fixed_multi(vg, 1, K, workers)[0];
}

/// Adaptive grid doubling for an m-valued integrand g(z, out). Convergence is
/// judged on the largest component change.
template <class G>
QuadratureVectorResult integrate_multi(G&& g, std::size_t m,
                                       const QuadratureOptions& opt = {}) {
  if (!(opt.tol >= 1e-14)) throw InvalidArgument("integrate: tol must be >= 1e-14");
  if (!is_power_of_two(opt.start_grid) || !is_power_of_two(opt.max_grid))
    throw InvalidArgument("integrate: grid sizes must be powers of two");
  if (opt.start_grid > opt.max_grid)
    throw InvalidArgument("integrate: start_grid exceeds max_grid");

  long K = opt.start_grid;
  std::vector<cplx> sums = detail::grid_sums(g, m, K, 0.0, opt.workers);
  std::vector<cplx> prev(m);
  for (std::size_t c = 0; c < m; ++c) prev[c] = sums[c] / static_cast<double>(K);

  double delta = 0.0;
  while (K < opt.max_grid) {
    const auto odd = detail::grid_sums(g, m, K, 0.5, opt.workers);
    K *= 2;
    delta = 0.0;
    std::vector<cplx> cur(m);
    for (std::size_t c = 0; c < m; ++c) {
      sums[c] += odd[c];
      cur[c] = sums[c] / static_cast<double>(K);
      delta = std::max(delta, std::abs(cur[c] - prev[c]));
    }
    prev = std::move(cur);
    if (delta <= opt.tol) return {std::move(prev), K, delta};
  }
  throw NonConvergence("integrate: no convergence at grid " + std::to_string(K) +
                           " (|delta| = " + std::to_string(delta) + ")",
                       delta, K);
}

template <class G>
QuadratureResult integrate(G&& g, const QuadratureOptions& opt) {
  auto vg = detail::as_vector_integrand(g);
  auto r = integrate_multi(vg, 1, opt);
  return {r.values[0], r.grid_size, r.est_error};
}

/// integrate(g, tol, max_grid): doubling from 2^8.
template <class G>
QuadratureResult integrate(G&& g, double tol = 1e-12, long max_grid = 1L << 22) {
  QuadratureOptions opt;
  opt.tol = tol;
  opt.max_grid = max_grid;
  return integrate(g, opt);
}

/// Seeded Monte Carlo average over uniformly random angles. Angle i is a pure
/// function of (seed, i).
template <class G>
MonteCarloResult mc_integrate(G&& g, long samples, std::uint64_t seed,
                              unsigned workers = 0) {
  if (samples < 100) throw InvalidArgument("mc_integrate: at least 100 samples");
  std::vector<cplx> vals(static_cast<std::size_t>(samples));
  parallel_for(vals.size(), workers, [&](std::size_t i) {
    vals[i] = g(std::polar(1.0, rng::uniform_angle(seed, i)));
  });
  const cplx mean = pairwise_sum(vals) / static_cast<double>(samples);
  std::vector<double> dev(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) dev[i] = std::norm(vals[i] - mean);
  const double var = pairwise_sum(dev) / static_cast<double>(samples - 1);
  return {mean, samples, std::sqrt(var / static_cast<double>(samples)), seed};
}

struct InvarianceCheck {
  bool pass = false;
  double residual = 0.0;
  QuadratureResult pulled_back;  // ∫ G∘f dm
  QuadratureResult direct;       // ∫ G dm
};

/// Compares ∫ G∘f dm with ∫ G dm (invariance of m under the boundary map).
template <class G>
InvarianceCheck check_invariance(const BlaschkeProduct& f, G&& observable,
                                 double tol, const QuadratureOptions& opt = {}) {
  InvarianceCheck out;
  out.direct = integrate(observable, opt);
  out.pulled_back = integrate([&](cplx z) { return observable(f.step_boundary(z)); }, opt);
  out.residual = std::abs(out.pulled_back.value - out.direct.value);
  out.pass = out.residual <= tol;
  return out;
}

}  // namespace innerclt
