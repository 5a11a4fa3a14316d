#pragma once

// Monte Carlo sampling of normalized sums T = (√2 σ)^{-1} Σ a_n f^n over
// uniform boundary points, and Gaussianity diagnostics against the circularly
// symmetric complex normal with E|T|² = 1/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/coefficients.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/parallel.hpp"
#include "innerclt/rng.hpp"
#include "innerclt/variance.hpp"

namespace innerclt {

enum class Normalization { Main, Tail, Corollary };

inline std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::Main: return "main";
    case Normalization::Tail: return "tail";
    case Normalization::Corollary: return "corollary";
  }
  return "main";
}

inline Normalization parse_normalization(const std::string& s) {
  if (s == "main") return Normalization::Main;
  if (s == "tail") return Normalization::Tail;
  if (s == "corollary") return Normalization::Corollary;
  throw InvalidArgument("unknown normalization mode '" + s + "'");
}

struct EmpiricalDistribution {
  std::vector<cplx> samples;
  long N = 0;
  long M = 0;
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::Main;
  double scale = 0.0;  // the divisor √2·σ that was applied
};

struct SimulationOptions {
  Normalization mode = Normalization::Main;
  int max_iterate = kDefaultMaxIterate;
  unsigned workers = 0;
};

namespace detail {

// Summation range [first, last] and divisor for a mode.
struct SumPlan {
  long first = 1;
  long last = 1;
  double scale = 0.0;
};

inline constexpr double kTruncationFraction = 1e-6;

inline SumPlan sum_plan(const BlaschkeProduct& f, const CoefficientSequence& a, long N,
                        const SimulationOptions& opt) {
  const cplx lambda = f.taylor_at_zero().c1;
  SumPlan p;
  switch (opt.mode) {
    case Normalization::Main:
      p.first = 1;
      p.last = N;
      p.scale = std::sqrt(2.0 * sigma_N_squared(a, lambda, N));
      break;
    case Normalization::Corollary:
      p.first = 1;
      p.last = N;
      p.scale = std::sqrt(2.0 * static_cast<double>(N) * asymptotic_sigma_squared(lambda));
      break;
    case Normalization::Tail: {
      const double tail = a.tail_mass(N);
      if (!(a.mass_beyond_storage() < kTruncationFraction * tail))
        throw TruncationError("tail run: coefficient mass beyond storage is not below 1e-6 of the tail mass");
      p.first = N;
      p.last = static_cast<long>(a.size());
      p.scale = std::sqrt(2.0 * tail_sigma_squared(a, lambda, N));
      break;
    }
  }
  if (N < 1) throw InvalidArgument("simulate: N must be >= 1");
  if (opt.mode != Normalization::Tail && N > static_cast<long>(a.size()))
    throw InvalidArgument("simulate: N exceeds the stored coefficients");
  if (p.last > opt.max_iterate)
    throw InvalidArgument("simulate: iterate " + std::to_string(p.last) + " beyond the orbit cap " +
                          std::to_string(opt.max_iterate));
  return p;
}

inline cplx sample_with(const BlaschkeProduct& f, const CoefficientSequence& a, const SumPlan& p,
                        double theta) {
  if (p.scale == 0.0) return 0.0;
  return detail::partial_sum(f, a, p.first, p.last, std::polar(1.0, theta)) / p.scale;
}

}  // namespace detail

/// T_N at one boundary point, normalized by √2·σ_N.
inline cplx sample_T(const BlaschkeProduct& f, const CoefficientSequence& a, long N,
                     CirclePoint theta, int max_iterate = kDefaultMaxIterate) {
  SimulationOptions opt;
  opt.max_iterate = max_iterate;
  return detail::sample_with(f, a, detail::sum_plan(f, a, N, opt), theta.theta());
}

inline constexpr long kMinSimulationSamples = 1000;

/// M samples at angles drawn from the counter stream (seed, i); the result does
/// not depend on the worker count.
inline EmpiricalDistribution simulate(const BlaschkeProduct& f, const CoefficientSequence& a,
                                      long N, long M, std::uint64_t seed,
                                      const SimulationOptions& opt = {}) {
  if (M < kMinSimulationSamples) throw InvalidArgument("simulate: M must be >= 1000");
  const detail::SumPlan plan = detail::sum_plan(f, a, N, opt);
  EmpiricalDistribution d;
  d.N = N;
  d.M = M;
  d.seed = seed;
  d.normalization = opt.mode;
  d.scale = plan.scale;
  d.samples.resize(static_cast<std::size_t>(M));
  parallel_for(d.samples.size(), opt.workers, [&](std::size_t i) {
    d.samples[i] = detail::sample_with(f, a, plan, rng::uniform_angle(seed, i));
  });
  return d;
}

struct GaussTolerances {
  double mean = 0.01;
  double abs2 = 0.01;
  double sq = 0.02;
  double abs4 = 0.05;
  double ks = 0.02;
};

struct GaussFitReport {
  long M = 0;
  cplx mean;
  double e_abs2 = 0.0;
  cplx e_sq;
  double e_abs4 = 0.0;
  double ks_re = 0.0;
  double ks_im = 0.0;
  bool pass = false;
};

inline constexpr long kMinKsSamples = 10000;
inline constexpr double kTargetSd = 0.5;

/// CDF of N(0, 1/4).
inline double target_cdf(double x) { return 0.5 * std::erfc(-x / (kTargetSd * std::sqrt(2.0))); }

/// Kolmogorov–Smirnov distance of the sample to N(0, 1/4).
inline double ks_distance(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = target_cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - F, F - static_cast<double>(i) / m});
  }
  return d;
}

inline GaussFitReport gauss_report(const EmpiricalDistribution& dist,
                                   const GaussTolerances& tol = {}) {
  const auto& s = dist.samples;
  if (static_cast<long>(s.size()) < kMinKsSamples)
    throw InsufficientSamples("gauss_report: need at least 10^4 samples");
  const std::size_t M = s.size();
  std::vector<cplx> sq(M);
  std::vector<double> a2(M), a4(M), re(M), im(M);
  for (std::size_t i = 0; i < M; ++i) {
    sq[i] = s[i] * s[i];
    a2[i] = std::norm(s[i]);
    a4[i] = a2[i] * a2[i];
    re[i] = s[i].real();
    im[i] = s[i].imag();
  }
  const double m = static_cast<double>(M);
  GaussFitReport r;
  r.M = static_cast<long>(M);
  r.mean = pairwise_sum(s) / m;
  r.e_abs2 = pairwise_sum(a2) / m;
  r.e_sq = pairwise_sum(sq) / m;
  r.e_abs4 = pairwise_sum(a4) / m;
  r.ks_re = ks_distance(std::move(re));
  r.ks_im = ks_distance(std::move(im));
  r.pass = std::abs(r.mean) <= tol.mean && std::abs(r.e_abs2 - 0.5) <= tol.abs2 &&
           std::abs(r.e_sq) <= tol.sq && std::abs(r.e_abs4 - 0.5) <= tol.abs4 &&
           r.ks_re <= tol.ks && r.ks_im <= tol.ks;
  return r;
}

/// Tail sums Σ_{n≥N} a_n f^n normalized by √2·σ(N).
inline GaussFitReport tails_run(const BlaschkeProduct& f, const CoefficientSequence& a, long N,
                                long M, std::uint64_t seed, const GaussTolerances& tol = {},
                                SimulationOptions opt = {}) {
  opt.mode = Normalization::Tail;
  return gauss_report(simulate(f, a, N, M, seed, opt), tol);
}

}  // namespace innerclt
