#pragma once

// Coefficient-side variance formulas. Everything here is an exact double sum
// over the stored coefficients; no FFT shortcuts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/coefficients.hpp"
#include "innerclt/correlations.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/quadrature.hpp"

namespace innerclt {

namespace detail {

inline void check_lambda(cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw InvalidArgument("variance: |lambda| must be < 1");
}

// Σ_{n∈[lo,hi]} |a_n|² + 2 Re Σ_k λ^k Σ_{n, n+k ∈ [lo,hi]} conj(a_n) a_{n+k}.
inline double range_sigma_squared(const CoefficientSequence& a, cplx lambda, long lo, long hi) {
  if (hi < lo) return 0.0;
  double diag = 0.0;
  for (long n = lo; n <= hi; ++n) diag += std::norm(a[n]);
  cplx cross = 0.0;
  cplx pw = 1.0;
  for (long k = 1; k <= hi - lo; ++k) {
    pw *= lambda;
    if (pw == cplx{}) break;  // every later term is exactly zero
    cplx inner = 0.0;
    for (long n = lo; n + k <= hi; ++n) inner += std::conj(a[n]) * a[n + k];
    cross += pw * inner;
  }
  return diag + 2.0 * cross.real();
}

}  // namespace detail

/// σ_N² = Σ_{n≤N} |a_n|² + 2 Re Σ_{k≥1} λ^k Σ_{n≤N−k} conj(a_n) a_{n+k}.
inline double sigma_N_squared(const CoefficientSequence& a, cplx lambda, long N) {
  detail::check_lambda(lambda);
  if (N < 1 || N > static_cast<long>(a.size()))
    throw InvalidArgument("sigma_N_squared: need 1 <= N <= length(a)");
  return detail::range_sigma_squared(a, lambda, 1, N);
}

/// σ²(N): the same sum over n ≥ N, truncated at the stored length.
inline double tail_sigma_squared(const CoefficientSequence& a, cplx lambda, long N) {
  detail::check_lambda(lambda);
  if (N < 1) throw InvalidArgument("tail_sigma_squared: N must be >= 1");
  return detail::range_sigma_squared(a, lambda, N, static_cast<long>(a.size()));
}

/// Variance of the block sum over an arbitrary index set A.
inline double block_sigma_squared(const CoefficientSequence& a, cplx lambda,
                                  std::span<const int> A) {
  detail::check_lambda(lambda);
  std::vector<int> idx(A.begin(), A.end());
  std::sort(idx.begin(), idx.end());
  double diag = 0.0;
  cplx cross = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    diag += std::norm(a[idx[i]]);
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      cross += std::conj(a[idx[i]]) * a[idx[j]] * std::pow(lambda, idx[j] - idx[i]);
  }
  return diag + 2.0 * cross.real();
}

/// σ² = Re (1+λ)/(1−λ).
inline double asymptotic_sigma_squared(cplx lambda) {
  detail::check_lambda(lambda);
  return ((1.0 + lambda) / (1.0 - lambda)).real();
}

struct VarianceReport {
  long N = 0;
  double s2 = 0.0;
  double sigma2 = 0.0;
  cplx lambda;
  double sandwich_C = 1.0;
  double symbol_min = 1.0;  // min of the symbol over the check grid
  double symbol_max = 1.0;
};

inline constexpr long kSymbolGrid = 1L << 12;

/// s(z) = (1−|λ|²)/|1 − conj(λ) z|².
inline double toeplitz_symbol(cplx lambda, cplx z) {
  return (1.0 - std::norm(lambda)) / std::norm(1.0 - std::conj(lambda) * z);
}

/// σ_N² with the bounds C^{-1} S_N² ≤ σ_N² ≤ C S_N² asserted. The symbol grid
/// is rotated to start at arg λ so both extremes are grid points.
inline VarianceReport toeplitz_sandwich(const CoefficientSequence& a, cplx lambda, long N) {
  VarianceReport r;
  r.N = N;
  r.lambda = lambda;
  r.sigma2 = sigma_N_squared(a, lambda, N);
  r.s2 = a.mass(N);
  const double m = std::abs(lambda);
  r.sandwich_C = (1.0 + m) / (1.0 - m);

  const double phase = m > 0.0 ? std::arg(lambda) : 0.0;
  r.symbol_min = INFINITY;
  r.symbol_max = -INFINITY;
  for (long j = 0; j < kSymbolGrid; ++j) {
    const double s = toeplitz_symbol(
        lambda, std::polar(1.0, phase + kTwoPi * static_cast<double>(j) / kSymbolGrid));
    r.symbol_min = std::min(r.symbol_min, s);
    r.symbol_max = std::max(r.symbol_max, s);
  }
  const double slack = 1e-12 * std::max(1.0, r.s2 * r.sandwich_C);
  if (std::abs(r.symbol_min - 1.0 / r.sandwich_C) > 1e-9 ||
      std::abs(r.symbol_max - r.sandwich_C) > 1e-9)
    throw SandwichViolation("toeplitz_sandwich: symbol range differs from [1/C, C]");
  if (r.sigma2 < r.s2 / r.sandwich_C - slack || r.sigma2 > r.s2 * r.sandwich_C + slack)
    throw SandwichViolation("toeplitz_sandwich: sigma_N^2 outside [S^2/C, C S^2]");
  return r;
}

struct AuxiliaryBound {
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs − lhs
};

/// |Σ_{n<k in A} conj(a_n) a_k λ^{k−n}| ≤ |λ|/(1−|λ|) Σ_{n∈A} |a_n|².
inline AuxiliaryBound auxiliary_bound_check(const CoefficientSequence& a, cplx lambda,
                                            std::span<const int> A) {
  detail::check_lambda(lambda);
  std::vector<int> idx(A.begin(), A.end());
  std::sort(idx.begin(), idx.end());
  cplx s = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    mass += std::norm(a[idx[i]]);
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (idx[j] > idx[i]) s += std::conj(a[idx[i]]) * a[idx[j]] * std::pow(lambda, idx[j] - idx[i]);
  }
  AuxiliaryBound out;
  out.lhs = std::abs(s);
  out.rhs = std::abs(lambda) / (1.0 - std::abs(lambda)) * mass;
  out.slack = out.rhs - out.lhs;
  out.pass = out.lhs <= out.rhs + 1e-12;
  return out;
}

namespace detail {

inline void check_orbit_length(long N) {
  if (N < 1 || N > kDefaultMaxIterate) throw InvalidArgument("partial sum: N outside [1, orbit cap]");
}

// Σ_{n≤N} a_n f^n(z) along one boundary orbit.
inline cplx partial_sum(const BlaschkeProduct& f, const CoefficientSequence& a, long first,
                        long last, cplx z) {
  cplx s = 0.0;
  for (long n = 1; n <= last; ++n) {
    z = f.step_boundary(z);
    if (n >= first) s += a[n] * z;
  }
  return s;
}

}  // namespace detail

struct L2Identity {
  double quadrature = 0.0;  // ∫ |Σ a_n f^n|² dm
  double sigma2 = 0.0;
  double residual = 0.0;
};

inline L2Identity l2_identity_check(const BlaschkeProduct& f, const CoefficientSequence& a, long N,
                                    const QuadratureOptions& opt = {}) {
  detail::check_orbit_length(N);
  const QuadratureOptions o = budgeted_options(2 * iterate_degree(f, static_cast<int>(N)), opt);
  L2Identity out;
  out.quadrature =
      integrate([&](cplx z) { return cplx(std::norm(detail::partial_sum(f, a, 1, N, z))); }, o)
          .value.real();
  out.sigma2 = sigma_N_squared(a, f.taylor_at_zero().c1, N);
  out.residual = std::abs(out.quadrature - out.sigma2);
  return out;
}

struct L4Ratio {
  double l2 = 0.0;
  double l4 = 0.0;
  double ratio = 0.0;  // ‖ξ‖₄ / ‖ξ‖₂
};

inline L4Ratio l4_ratio(const BlaschkeProduct& f, const CoefficientSequence& a, long N,
                        const QuadratureOptions& opt = {}) {
  detail::check_orbit_length(N);
  const QuadratureOptions o = budgeted_options(4 * iterate_degree(f, static_cast<int>(N)), opt);
  const auto r = integrate_multi(
      [&](cplx z, std::span<cplx> out) {
        const double s = std::norm(detail::partial_sum(f, a, 1, N, z));
        out[0] = s;
        out[1] = s * s;
      },
      2, o);
  L4Ratio out;
  out.l2 = std::sqrt(r.values[0].real());
  out.l4 = std::pow(r.values[1].real(), 0.25);
  if (out.l2 == 0.0) throw InvalidArgument("l4_ratio: the partial sum vanishes identically");
  out.ratio = out.l4 / out.l2;
  return out;
}

/// Ratio values over a list of N and the verdict whether they tend to 0.
struct Trajectory {
  std::vector<long> Ns;
  std::vector<double> ratios;
  double slope = 0.0;  // least-squares slope of log ratio against log N
  bool holds = false;
};

inline constexpr double kDecaySlope = -0.05;

namespace detail {

// Decreasing toward 0: the last value is below the first and the log-log
// slope is clearly negative.
inline void judge(Trajectory& t) {
  const std::size_t m = t.Ns.size();
  if (m < 2) throw InvalidArgument("trajectory: need at least two values of N");
  for (double r : t.ratios)
    if (!(r > 0.0) || !std::isfinite(r)) {
      t.slope = NAN;
      t.holds = false;
      return;
    }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(t.Ns[i])), y = std::log(t.ratios[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  t.slope = den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
  t.holds = t.ratios.back() < t.ratios.front() && t.slope <= kDecaySlope;
}

inline void check_N_list(const CoefficientSequence& a, std::span<const long> Ns) {
  for (long N : Ns)
    if (N < 1 || N > static_cast<long>(a.size()))
      throw InvalidArgument("trajectory: N outside [1, length(a)]");
}

}  // namespace detail

/// sup_{n≤N} |a_n|² / (S_N²)^{(1−η)/2}.
inline double growth_ratio(const CoefficientSequence& a, double eta, long N) {
  double sup = 0.0;
  for (long n = 1; n <= N; ++n) sup = std::max(sup, std::norm(a[n]));
  const double s2 = a.mass(N);
  return s2 > 0.0 ? sup / std::pow(s2, (1.0 - eta) / 2.0) : 0.0;
}

inline Trajectory growth_condition(const CoefficientSequence& a, double eta,
                                   std::span<const long> Ns) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("growth_condition: need 0 < eta < 1");
  detail::check_N_list(a, Ns);
  Trajectory t;
  t.Ns.assign(Ns.begin(), Ns.end());
  for (long N : Ns) t.ratios.push_back(growth_ratio(a, eta, N));
  detail::judge(t);
  return t;
}

/// sup_{1≤k<N} |Σ_{n≤N−k} conj(a_n) a_{n+k}| / S_N².
inline double quasi_ratio(const CoefficientSequence& a, long N) {
  const double s2 = a.mass(N);
  if (s2 == 0.0) return 0.0;
  double sup = 0.0;
  for (long k = 1; k < N; ++k) {
    cplx s = 0.0;
    for (long n = 1; n + k <= N; ++n) s += std::conj(a[n]) * a[n + k];
    sup = std::max(sup, std::abs(s));
  }
  return sup / s2;
}

inline Trajectory quasiorthogonality(const CoefficientSequence& a, std::span<const long> Ns) {
  detail::check_N_list(a, Ns);
  Trajectory t;
  t.Ns.assign(Ns.begin(), Ns.end());
  for (long N : Ns) t.ratios.push_back(quasi_ratio(a, N));
  detail::judge(t);
  return t;
}

/// Half-open index range (lo, hi].
struct IndexRange {
  long lo = 0;
  long hi = 0;

  long length() const { return hi - lo; }
  std::vector<int> indices() const {
    std::vector<int> v(static_cast<std::size_t>(length()));
    std::iota(v.begin(), v.end(), static_cast<int>(lo + 1));
    return v;
  }
};

struct SplitPlan {
  long N = 0;
  double epsilon = 0.0;
  double eta = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double s2 = 0.0;
  double p = 0.0;  // S_N^{1+ε}
  double q = 0.0;  // S_N^{1−ε}
  std::vector<IndexRange> xi_blocks;
  std::vector<IndexRange> eta_gaps;
  std::vector<double> block_masses;
  std::vector<double> gap_masses;
  int Q = 0;

  bool block_mass_bounds = false;   // p ≤ mass ≤ 2p for every block
  bool gap_mass_bounds = false;     // q ≤ mass ≤ 2q for every gap
  bool block_length_bounds = false; // length ≥ p^γ
  bool gap_length_bounds = false;   // length ≥ q^β
  double partial_variance_ratio = 0.0;  // Σ σ²(A_k) / σ_N²

  bool regime_holds() const {
    return block_mass_bounds && gap_mass_bounds && block_length_bounds && gap_length_bounds;
  }
};

inline constexpr double kDefaultEta = 0.5;
inline constexpr double kDefaultEpsilon = 0.2;

/// Greedy splitting of 1..N: starting at M_1 = 0, each block (M_k, N_k] is the
/// shortest run with mass ≥ p, each gap (N_k, M_{k+1}] the shortest with mass
/// ≥ q. Only complete block/gap pairs are kept; Q is their number.
inline SplitPlan split_plan(const CoefficientSequence& a, long N, double epsilon = kDefaultEpsilon,
                            double eta = kDefaultEta, cplx lambda = 0.0) {
  if (!(0.0 < epsilon && epsilon < eta && eta < 1.0))
    throw InvalidArgument("split_plan: need 0 < epsilon < eta < 1");
  if (N < 2 || N > static_cast<long>(a.size()))
    throw InvalidArgument("split_plan: need 2 <= N <= length(a)");
  if (growth_ratio(a, eta, N) >= growth_ratio(a, eta, std::max(1L, N / 2)))
    throw InvalidArgument("split_plan: growth ratio is not decreasing at N");

  SplitPlan plan;
  plan.N = N;
  plan.epsilon = epsilon;
  plan.eta = eta;
  plan.beta = (eta - epsilon) / (1.0 - epsilon);
  plan.gamma = (eta + epsilon) / (1.0 + epsilon);
  plan.s2 = a.mass(N);
  const double S = std::sqrt(plan.s2);
  plan.p = std::pow(S, 1.0 + epsilon);
  plan.q = std::pow(S, 1.0 - epsilon);

  // Shortest run from `start` reaching `target`; hi = −1 when 1..N runs out.
  auto run = [&](long start, double target, double& mass) {
    mass = 0.0;
    for (long n = start + 1; n <= N; ++n) {
      mass += std::norm(a[n]);
      if (mass >= target) return n;
    }
    return -1L;
  };

  long M = 0;
  while (true) {
    double bm = 0.0, gm = 0.0;
    const long Nk = run(M, plan.p, bm);
    if (Nk < 0) break;
    const long Mk = run(Nk, plan.q, gm);
    if (Mk < 0) break;
    plan.xi_blocks.push_back({M, Nk});
    plan.eta_gaps.push_back({Nk, Mk});
    plan.block_masses.push_back(bm);
    plan.gap_masses.push_back(gm);
    M = Mk;
  }
  plan.Q = static_cast<int>(plan.xi_blocks.size());
  if (plan.Q == 0)
    throw RegimeTooSmall("split_plan: N = " + std::to_string(N) +
                         " is too small to close one block and gap");

  plan.block_mass_bounds = plan.gap_mass_bounds = true;
  plan.block_length_bounds = plan.gap_length_bounds = true;
  const double min_block = std::pow(plan.p, plan.gamma);
  const double min_gap = std::pow(plan.q, plan.beta);
  for (int k = 0; k < plan.Q; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    plan.block_mass_bounds = plan.block_mass_bounds && plan.block_masses[kk] >= plan.p &&
                             plan.block_masses[kk] <= 2.0 * plan.p;
    plan.gap_mass_bounds = plan.gap_mass_bounds && plan.gap_masses[kk] >= plan.q &&
                           plan.gap_masses[kk] <= 2.0 * plan.q;
    plan.block_length_bounds =
        plan.block_length_bounds && static_cast<double>(plan.xi_blocks[kk].length()) >= min_block;
    plan.gap_length_bounds =
        plan.gap_length_bounds && static_cast<double>(plan.eta_gaps[kk].length()) >= min_gap;
  }

  double partial = 0.0;
  for (const auto& b : plan.xi_blocks)
    partial += detail::range_sigma_squared(a, lambda, b.lo + 1, b.hi);
  plan.partial_variance_ratio = partial / sigma_N_squared(a, lambda, N);
  return plan;
}

/// First N in the list from which every later split plan satisfies all the
/// mass and length bounds; −1 if none does.
inline long split_regime_onset(const CoefficientSequence& a, std::span<const long> Ns,
                               double epsilon = kDefaultEpsilon, double eta = kDefaultEta) {
  long onset = -1;
  for (long N : Ns) {
    bool ok = false;
    try {
      ok = split_plan(a, N, epsilon, eta).regime_holds();
    } catch (const RegimeTooSmall&) {
    } catch (const InvalidArgument&) {
    }
    if (ok && onset < 0) onset = N;
    if (!ok) onset = -1;
  }
  return onset;
}

struct VarianceRow {
  long N = 0;
  double S2 = 0.0;
  double sigma2 = 0.0;
  double ratio = 0.0;  // σ_N² / S_N²
  double growth_ratio = 0.0;
  double quasi_ratio = 0.0;
  int Q_N = 0;  // 0 when no block closes
};

inline std::vector<VarianceRow> variance_table(const CoefficientSequence& a, cplx lambda,
                                               std::span<const long> Ns,
                                               double epsilon = kDefaultEpsilon,
                                               double eta = kDefaultEta) {
  detail::check_N_list(a, Ns);
  std::vector<VarianceRow> rows;
  for (long N : Ns) {
    VarianceRow r;
    r.N = N;
    r.S2 = a.mass(N);
    r.sigma2 = toeplitz_sandwich(a, lambda, N).sigma2;
    r.ratio = r.S2 > 0.0 ? r.sigma2 / r.S2 : 0.0;
    r.growth_ratio = growth_ratio(a, eta, N);
    r.quasi_ratio = quasi_ratio(a, N);
    try {
      r.Q_N = split_plan(a, N, epsilon, eta, lambda).Q;
    } catch (const Error&) {
      r.Q_N = 0;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace innerclt
