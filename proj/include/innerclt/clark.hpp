#pragma once

// Aleksandrov–Clark measures of finite Blaschke products.
//
// For an inner map g of degree d with g(0) = 0 and a point α of the circle,
// μ_α is the probability measure with one atom at each of the d solutions of
// g(ζ) = α, carrying weight 1/|g'(ζ)|. The boundary phase of g is strictly
// increasing with total increase 2πd, so the solutions are bracketed by
// unwrapping the phase on a grid and refined by bisection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/parallel.hpp"
#include "innerclt/quadrature.hpp"

namespace innerclt {

inline constexpr long kMaxClarkAtoms = 4096;

struct ClarkAtom {
  CirclePoint point;
  double weight = 0.0;
};

struct ClarkMeasure {
  CirclePoint alpha;
  std::vector<ClarkAtom> atoms;
  long source_degree = 0;

  double total_mass() const {
    std::vector<double> w;
    w.reserve(atoms.size());
    for (const auto& a : atoms) w.push_back(a.weight);
    return pairwise_sum(w);
  }

  /// ∫ z^l dμ_α for any integer l (negative powers are conjugates).
  cplx moment(int l) const {
    std::vector<cplx> terms;
    terms.reserve(atoms.size());
    for (const auto& a : atoms) terms.push_back(a.weight * std::polar(1.0, l * a.point.theta()));
    return pairwise_sum(terms);
  }

  /// ∫ G dμ_α.
  template <class G>
  cplx integrate(G&& g) const {
    std::vector<cplx> terms;
    terms.reserve(atoms.size());
    for (const auto& a : atoms) terms.push_back(a.weight * g(a.point.value()));
    return pairwise_sum(terms);
  }
};

/// Jet at 0 of f^n by composing jets: (a∘b)' = a1 b1, (a∘b)''/2 = a1 b2 + a2 b1².
inline TaylorJet taylor_at_zero(const BlaschkeProduct& f) { return f.taylor_at_zero(); }

inline TaylorJet taylor_at_zero(const Iterate& g) {
  const TaylorJet base = g.base().taylor_at_zero();
  TaylorJet jet{1.0, 0.0};
  for (int k = 0; k < g.order(); ++k)
    jet = {base.c1 * jet.c1, base.c1 * jet.c2 + base.c2 * jet.c1 * jet.c1};
  return jet;
}

inline long map_degree(const BlaschkeProduct& f) { return f.degree(); }
inline long map_degree(const Iterate& g) { return g.degree(); }

namespace detail {

inline double principal(double x) {
  // Maps to (−π, π].
  double r = std::remainder(x, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

struct PhaseGrid {
  std::vector<double> theta;   // K + 1 nodes, θ_K = 2π
  std::vector<double> raw;     // arg g(e^{iθ_k})
  std::vector<double> lifted;  // unwrapped phase
};

template <class Map>
std::optional<PhaseGrid> unwrap_phase(const Map& g, long degree, long K) {
  PhaseGrid pg;
  pg.theta.resize(static_cast<std::size_t>(K) + 1);
  pg.raw.resize(static_cast<std::size_t>(K) + 1);
  parallel_for(static_cast<std::size_t>(K), 0, [&](std::size_t k) {
    const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(K);
    pg.theta[k] = th;
    pg.raw[k] = std::arg(g.eval(std::polar(1.0, th)));
  });
  pg.theta[static_cast<std::size_t>(K)] = kTwoPi;
  pg.raw[static_cast<std::size_t>(K)] = pg.raw[0];
  pg.lifted.resize(pg.raw.size());
  pg.lifted[0] = pg.raw[0];
  for (std::size_t k = 0; k < static_cast<std::size_t>(K); ++k) {
    const double inc = principal(pg.raw[k + 1] - pg.raw[k]);
    if (!(inc > 0.0)) return std::nullopt;
    pg.lifted[k + 1] = pg.lifted[k] + inc;
  }
  const double total = pg.lifted.back() - pg.lifted.front();
  if (std::abs(total - kTwoPi * static_cast<double>(degree)) > 1e-6) return std::nullopt;
  return pg;
}

}  // namespace detail

/// Atoms and weights of μ_α for g (a BlaschkeProduct or an Iterate).
template <class Map>
ClarkMeasure clark_measure(const Map& g, CirclePoint alpha) {
  const long d = map_degree(g);
  if (d < 1) throw InvalidArgument("clark_measure: degree must be >= 1");
  if (d > kMaxClarkAtoms)
    throw InvalidArgument("clark_measure: degree exceeds the atom budget");

  const long coarse = std::max(1L << 12, next_power_of_two(16 * d));
  std::optional<detail::PhaseGrid> pg = detail::unwrap_phase(g, d, coarse);
  if (!pg) pg = detail::unwrap_phase(g, d, coarse * 16);
  if (!pg)
    throw RootBracketFailure(
        "clark_measure: boundary phase is not monotone on the refined grid");

  const std::vector<double>& lifted = pg->lifted;
  const std::vector<double>& theta = pg->theta;
  const double base = lifted.front();
  const double psi = base + CirclePoint::canonical(alpha.theta() - base);
  const std::size_t cells = theta.size() - 1;

  ClarkMeasure mu;
  mu.alpha = alpha;
  mu.source_degree = d;
  mu.atoms.resize(static_cast<std::size_t>(d));

  std::size_t cell = 0;
  for (long j = 0; j < d; ++j) {
    const double target = psi + kTwoPi * static_cast<double>(j);
    while (cell + 1 < cells && lifted[cell + 1] <= target) ++cell;
    // Lifted phase inside the cell; the cell increment is below π.
    const double ref_lift = lifted[cell];
    const double ref_raw = pg->raw[cell];
    auto phase = [&](double th) {
      return ref_lift + detail::principal(std::arg(g.eval(std::polar(1.0, th))) - ref_raw);
    };
    double lo = theta[cell];
    double hi = theta[cell + 1];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (phase(mid) < target)
        lo = mid;
      else
        hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    const CirclePoint p(root);
    mu.atoms[static_cast<std::size_t>(j)] = {p, 1.0 / std::abs(g.derivative(p.value()))};
  }
  std::sort(mu.atoms.begin(), mu.atoms.end(), [](const ClarkAtom& a, const ClarkAtom& b) {
    return a.point.theta() < b.point.theta();
  });
  return mu;
}

struct MomentCheck {
  cplx atomic;
  cplx target;
  double residual = 0.0;
};

/// ∫ z dμ_α against conj(g'(0))·α.
template <class Map>
MomentCheck check_first_moment(const Map& g, CirclePoint alpha) {
  const ClarkMeasure mu = clark_measure(g, alpha);
  const TaylorJet jet = taylor_at_zero(g);
  const cplx a = alpha.value();
  MomentCheck out{mu.moment(1), std::conj(jet.c1) * a, 0.0};
  out.residual = std::abs(out.atomic - out.target);
  return out;
}

/// ∫ z² dμ_α against conj(g''(0)/2)·α + conj(g'(0))²·α².
template <class Map>
MomentCheck check_second_moment(const Map& g, CirclePoint alpha) {
  const ClarkMeasure mu = clark_measure(g, alpha);
  const TaylorJet jet = taylor_at_zero(g);
  const cplx a = alpha.value();
  const cplx c1 = std::conj(jet.c1);
  MomentCheck out{mu.moment(2), std::conj(jet.c2) * a + c1 * c1 * a * a, 0.0};
  out.residual = std::abs(out.atomic - out.target);
  return out;
}

struct Desintegration {
  cplx double_integral;  // ∫∫ G dμ_α dm(α)
  cplx direct;           // ∫ G dm
  double residual = 0.0;
};

inline constexpr int kDefaultAlphaNodes = 512;

/// Averages the atomic integrals of G over a uniform α-grid and compares
/// with the Lebesgue integral of G.
template <class Map, class G>
Desintegration desintegrate(const Map& g, G&& observable, int alpha_nodes = kDefaultAlphaNodes,
                            const QuadratureOptions& opt = {}) {
  if (alpha_nodes < 64) throw InvalidArgument("desintegrate: at least 64 alpha nodes");
  std::vector<cplx> inner(static_cast<std::size_t>(alpha_nodes));
  for (std::size_t k = 0; k < inner.size(); ++k) {
    const CirclePoint alpha(kTwoPi * static_cast<double>(k) / alpha_nodes);
    inner[k] = clark_measure(g, alpha).integrate(observable);
  }
  Desintegration out;
  out.double_integral = pairwise_sum(inner) / static_cast<double>(alpha_nodes);
  out.direct = integrate(observable, opt).value;
  out.residual = std::abs(out.double_integral - out.direct);
  return out;
}

/// The l-th conjugate moment of the Clark measures of f^n as a polynomial in α:
///   ∫ conj(z)^l dμ_α = Σ_{k=1}^{l} conj(α)^k c_k   (l > 0),
/// with c_k the order-l Taylor coefficient of (f^n)^k at 0. For l < 0 the
/// moment is the conjugate of the |l| case.
struct MomentPolynomial {
  int l = 0;
  int n = 0;
  std::vector<cplx> coeffs;  // c_1 .. c_|l|

  cplx evaluate(CirclePoint alpha) const {
    const cplx a = alpha.value();
    cplx acc = 0.0;
    cplx pw = 1.0;
    for (const cplx& c : coeffs) {
      pw *= std::conj(a);
      acc += pw * c;
    }
    return l > 0 ? acc : std::conj(acc);
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const cplx& c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }
};

inline constexpr int kMaxMomentOrder = 64;

/// table[(l-1)*lmax + (k-1)] = order-l Taylor coefficient of (f^n)^k, for
/// 1 ≤ k, l ≤ lmax, all from one quadrature pass.
inline std::vector<cplx> moment_coefficient_table(const BlaschkeProduct& f, int n, int lmax,
                                                  QuadratureOptions opt = {}) {
  if (n < 1) throw InvalidArgument("moment_polynomial: n must be >= 1");
  if (lmax < 1 || lmax > kMaxMomentOrder)
    throw InvalidArgument("moment_polynomial: |l| outside [1, 64]");
  const Iterate g(f, n);
  opt.start_grid = std::max(opt.start_grid, grid_for_degree(lmax * g.degree(1L << 20)));
  opt.start_grid = std::min(opt.start_grid, opt.max_grid);
  const std::size_t L = static_cast<std::size_t>(lmax);
  auto integrand = [&](cplx z, std::span<cplx> out) {
    const cplx w = g.eval(z);
    const cplx zc = std::conj(z);
    cplx zl = 1.0;
    for (std::size_t l = 0; l < L; ++l) {
      zl *= zc;
      cplx wk = 1.0;
      for (std::size_t k = 0; k < L; ++k) {
        wk *= w;
        out[l * L + k] = wk * zl;
      }
    }
  };
  return integrate_multi(integrand, L * L, opt).values;
}

inline MomentPolynomial moment_polynomial(const BlaschkeProduct& f, int n, int l,
                                          const QuadratureOptions& opt = {}) {
  if (l == 0) throw InvalidArgument("moment_polynomial: l must be nonzero");
  const int L = std::abs(l);
  const auto table = moment_coefficient_table(f, n, L, opt);
  MomentPolynomial p;
  p.l = l;
  p.n = n;
  const std::size_t row = static_cast<std::size_t>(L - 1) * static_cast<std::size_t>(L);
  p.coeffs.assign(table.begin() + static_cast<long>(row),
                  table.begin() + static_cast<long>(row) + L);
  return p;
}

struct MomentBoundCheck {
  int n = 0;
  int l = 0;
  double max_coeff = 0.0;
  double bound = 0.0;  // |f'(0)|^{n/2}
  bool pass = false;
};

inline constexpr double kMomentBoundSlack = 1e-12;

/// Coefficients of the l-th moment polynomial of the Clark measures of f^n
/// against |f'(0)|^{n/2}.
inline MomentBoundCheck check_moment_bound(const BlaschkeProduct& f, int n, int l,
                                           const QuadratureOptions& opt = {}) {
  if (l == 0 || std::abs(l) > n)
    throw InvalidArgument("check_moment_bound: need 1 <= |l| <= n");
  const double a = std::abs(f.taylor_at_zero().c1);
  MomentBoundCheck out;
  out.n = n;
  out.l = l;
  out.max_coeff = moment_polynomial(f, n, l, opt).max_abs_coeff();
  out.bound = std::pow(a, 0.5 * n);
  out.pass = out.max_coeff <= out.bound + kMomentBoundSlack;
  return out;
}

struct MomentBoundSweep {
  std::vector<MomentBoundCheck> worst_per_n;  // the largest coefficient over 1 ≤ l ≤ n
  std::optional<int> empirical_n0;            // first n from which every check passes
};

/// Checks every 1 ≤ l ≤ n for n = 1..n_max and reports the empirical onset.
inline MomentBoundSweep moment_bound_sweep(const BlaschkeProduct& f, int n_max,
                                           const QuadratureOptions& opt = {}) {
  const double a = std::abs(f.taylor_at_zero().c1);
  MomentBoundSweep sweep;
  for (int n = 1; n <= n_max; ++n) {
    const auto table = moment_coefficient_table(f, n, n, opt);
    MomentBoundCheck worst;
    worst.n = n;
    worst.bound = std::pow(a, 0.5 * n);
    for (int l = 1; l <= n; ++l)
      for (int k = 1; k <= n; ++k) {
        const double c = std::abs(table[static_cast<std::size_t>((l - 1) * n + (k - 1))]);
        if (c >= worst.max_coeff) {
          worst.max_coeff = c;
          worst.l = l;
        }
      }
    worst.pass = worst.max_coeff <= worst.bound + kMomentBoundSlack;
    sweep.worst_per_n.push_back(worst);
  }
  for (int n = n_max; n >= 1; --n) {
    if (!sweep.worst_per_n[static_cast<std::size_t>(n - 1)].pass) break;
    sweep.empirical_n0 = n;
  }
  return sweep;
}

}  // namespace innerclt
