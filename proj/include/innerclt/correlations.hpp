#pragma once

// Correlation integrals of iterates, ∫ Π f^{ε_j n_j} dm with f^{-n} = conj(f^n)
// on the circle, together with the closed forms and decay bounds they obey.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/coefficients.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/quadrature.hpp"

namespace innerclt {

/// One factor f^{sign·index} of a correlation product.
struct SignedIndex {
  int sign = 1;  // +1 or −1
  int index = 1;
};

/// Signs ε_j and strictly increasing positive indices n_1 < ... < n_k.
class CorrelationSpec {
 public:
  CorrelationSpec(std::vector<int> signs, std::vector<int> indices)
      : signs_(std::move(signs)), indices_(std::move(indices)) {
    if (signs_.empty()) throw InvalidArgument("CorrelationSpec: k must be >= 1");
    if (signs_.size() != indices_.size())
      throw InvalidArgument("CorrelationSpec: signs and indices differ in length");
    for (int s : signs_)
      if (s != 1 && s != -1) throw InvalidArgument("CorrelationSpec: signs must be +1 or -1");
    if (indices_.front() < 1) throw InvalidArgument("CorrelationSpec: indices must be positive");
    for (std::size_t j = 1; j < indices_.size(); ++j)
      if (indices_[j] <= indices_[j - 1])
        throw InvalidArgument("CorrelationSpec: indices must increase strictly");
  }

  int k() const noexcept { return static_cast<int>(signs_.size()); }
  const std::vector<int>& signs() const noexcept { return signs_; }
  const std::vector<int>& indices() const noexcept { return indices_; }

  /// Smallest gap n_{j+1} − n_j; 0 when k = 1.
  int min_gap() const {
    int q = 0;
    for (std::size_t j = 1; j < indices_.size(); ++j) {
      const int g = indices_[j] - indices_[j - 1];
      q = (j == 1) ? g : std::min(q, g);
    }
    return q;
  }

  CorrelationSpec flipped() const {
    std::vector<int> s(signs_);
    for (int& x : s) x = -x;
    return {std::move(s), indices_};
  }

  std::vector<SignedIndex> factors() const {
    std::vector<SignedIndex> out;
    for (std::size_t j = 0; j < signs_.size(); ++j) out.push_back({signs_[j], indices_[j]});
    return out;
  }

 private:
  std::vector<int> signs_;
  std::vector<int> indices_;
};

/// Total degree Σ deg(f)^{n_j} bounds the budget of an iterate integrand.
inline constexpr long kMaxTotalDegree = 1L << 15;

inline long iterate_degree(const BlaschkeProduct& f, int n) { return Iterate(f, n).degree(1L << 40); }

inline long total_degree(const BlaschkeProduct& f, std::span<const SignedIndex> factors) {
  long d = 0;
  for (const auto& x : factors) d = std::min(d + iterate_degree(f, x.index), 1L << 40);
  return d;
}

inline QuadratureOptions budgeted_options(long total_deg, QuadratureOptions opt) {
  if (total_deg > kMaxTotalDegree)
    throw DegreeBudgetExceeded("correlation: total iterate degree " + std::to_string(total_deg) +
                               " exceeds the budget " + std::to_string(kMaxTotalDegree));
  opt.start_grid = std::min(std::max(opt.start_grid, grid_for_degree(total_deg)), opt.max_grid);
  return opt;
}

/// ∫ Π f^{ε_j n_j} dm for any factor list (indices may repeat).
inline QuadratureResult signed_product_integral(const BlaschkeProduct& f,
                                                std::span<const SignedIndex> factors,
                                                const QuadratureOptions& opt = {}) {
  int top = 0;
  for (const auto& x : factors) {
    if (x.index < 1 || (x.sign != 1 && x.sign != -1))
      throw InvalidArgument("signed_product_integral: bad factor");
    top = std::max(top, x.index);
  }
  const QuadratureOptions o = budgeted_options(total_degree(f, factors), opt);
  std::vector<SignedIndex> fs(factors.begin(), factors.end());
  return integrate(
      [&f, fs, top](cplx z) {
        std::array<cplx, kDefaultMaxIterate + 1> orbit;
        if (top > kDefaultMaxIterate) throw InvalidArgument("iterate beyond orbit cap");
        orbit[0] = z;
        for (int n = 1; n <= top; ++n) orbit[static_cast<std::size_t>(n)] = f.step_boundary(orbit[static_cast<std::size_t>(n - 1)]);
        cplx p = 1.0;
        for (const auto& x : fs) {
          const cplx w = orbit[static_cast<std::size_t>(x.index)];
          p *= (x.sign > 0) ? w : std::conj(w);
        }
        return p;
      },
      o);
}

struct PairCorrelation {
  cplx value;
  cplx target;  // f'(0)^{j−k}
  double residual = 0.0;
};

/// ∫ conj(f^k) f^j dm against f'(0)^{j−k}.
inline PairCorrelation pair_correlation(const BlaschkeProduct& f, int k, int j,
                                        const QuadratureOptions& opt = {}) {
  if (!(1 <= k && k < j)) throw InvalidArgument("pair_correlation: need 1 <= k < j");
  const std::array<SignedIndex, 2> fs{SignedIndex{-1, k}, SignedIndex{1, j}};
  PairCorrelation out;
  out.value = signed_product_integral(f, fs, opt).value;
  out.target = std::pow(f.taylor_at_zero().c1, j - k);
  out.residual = std::abs(out.value - out.target);
  return out;
}

/// Index set A of a partial sum ξ(A) = Σ_{n∈A} a_n f^n.
struct BlockSum {
  std::vector<int> indices;

  int first() const { return *std::min_element(indices.begin(), indices.end()); }
  int last() const { return *std::max_element(indices.begin(), indices.end()); }
};

struct Factorization {
  double lhs = 0.0;  // ∫ Π |ξ_k|² dm
  double rhs = 0.0;  // Π ∫ |ξ_k|² dm
  double residual = 0.0;
};

/// Squared moduli of separated blocks are uncorrelated.
inline Factorization block_product_factorization(const BlaschkeProduct& f,
                                                 const CoefficientSequence& a,
                                                 std::span<const BlockSum> blocks,
                                                 const QuadratureOptions& opt = {}) {
  if (blocks.empty()) throw InvalidArgument("block_product_factorization: no blocks");
  for (const auto& b : blocks) {
    if (b.indices.empty()) throw InvalidArgument("block_product_factorization: empty block");
    if (b.first() < 1) throw InvalidArgument("block_product_factorization: indices must be positive");
  }
  for (std::size_t k = 1; k < blocks.size(); ++k)
    if (blocks[k - 1].last() >= blocks[k].first())
      throw SeparationViolation("block_product_factorization: blocks interleave");

  long deg = 0;
  for (const auto& b : blocks) deg += 2 * iterate_degree(f, b.last());
  const QuadratureOptions o = budgeted_options(deg, opt);
  const int top = blocks.back().last();
  if (top > kDefaultMaxIterate) throw InvalidArgument("block index beyond orbit cap");
  const std::size_t p = blocks.size();

  std::vector<std::vector<std::pair<int, cplx>>> terms(p);
  for (std::size_t k = 0; k < p; ++k)
    for (int n : blocks[k].indices) terms[k].push_back({n, a[n]});

  auto integrand = [&](cplx z, std::span<cplx> out) {
    std::array<cplx, kDefaultMaxIterate + 1> orbit;
    orbit[0] = z;
    for (int n = 1; n <= top; ++n)
      orbit[static_cast<std::size_t>(n)] = f.step_boundary(orbit[static_cast<std::size_t>(n - 1)]);
    double prod = 1.0;
    for (std::size_t k = 0; k < p; ++k) {
      cplx xi = 0.0;
      for (const auto& [n, c] : terms[k]) xi += c * orbit[static_cast<std::size_t>(n)];
      const double sq = std::norm(xi);
      out[k + 1] = sq;
      prod *= sq;
    }
    out[0] = prod;
  };
  const auto r = integrate_multi(integrand, p + 1, o);
  Factorization out;
  out.lhs = r.values[0].real();
  out.rhs = 1.0;
  for (std::size_t k = 0; k < p; ++k) out.rhs *= r.values[k + 1].real();
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

enum class FourFactorShape { I, II, III, IV };

inline std::string to_string(FourFactorShape s) {
  switch (s) {
    case FourFactorShape::I: return "I";
    case FourFactorShape::II: return "II";
    case FourFactorShape::III: return "III";
    case FourFactorShape::IV: return "IV";
  }
  return "?";
}

/// Four factors in integrand order. Shapes:
///   I    f^{ε n1} f^{−ε n2} f^{n3} f^{n4},   max(n1,n2) < min(n3,n4)
///   II   f^{ε1 n1} (f^{ε2 n2})² f^{ε3 n3},    n1 < n2 < n3  (factors 2 and 3 equal)
///   III  (f^{ε1 n1})² f^{ε2 n2} f^{ε3 n3},    n1 < n2 < n3  (factors 1 and 2 equal)
///   IV   four arbitrary signs,               n1 < n2 < n3 < n4
struct FourFactorSpec {
  std::array<SignedIndex, 4> factors;
};

inline bool matches(const FourFactorSpec& s, FourFactorShape shape) {
  const auto& x = s.factors;
  for (const auto& f : x)
    if (f.index < 1 || (f.sign != 1 && f.sign != -1)) return false;
  switch (shape) {
    case FourFactorShape::I:
      return x[0].sign == -x[1].sign && x[2].sign == 1 && x[3].sign == 1 &&
             std::max(x[0].index, x[1].index) < std::min(x[2].index, x[3].index);
    case FourFactorShape::II:
      return x[1].index == x[2].index && x[1].sign == x[2].sign && x[0].index < x[1].index &&
             x[2].index < x[3].index;
    case FourFactorShape::III:
      return x[0].index == x[1].index && x[0].sign == x[1].sign && x[1].index < x[2].index &&
             x[2].index < x[3].index;
    case FourFactorShape::IV:
      return x[0].index < x[1].index && x[1].index < x[2].index && x[2].index < x[3].index;
  }
  return false;
}

inline FourFactorShape classify(const FourFactorSpec& s) {
  for (auto shape : {FourFactorShape::I, FourFactorShape::III, FourFactorShape::II,
                     FourFactorShape::IV})
    if (matches(s, shape)) return shape;
  throw ShapeMismatch("four_factor: specification matches no shape");
}

struct FourFactorResult {
  FourFactorShape shape = FourFactorShape::IV;
  cplx value;
  double exponent = 0.0;    // e in the bound C·a^e (shape I: none, value is 0)
  double reference = 0.0;   // a^e
  bool exact = false;       // shape I or alternating IV: a closed form applies
  double expected_abs = 0.0;
  std::optional<bool> exact_pass;  // set when `exact`
  double ratio = 0.0;       // |value| / a^e, the constant this instance needs

  bool bounded_by(double C, double tol = 1e-12) const {
    return std::abs(value) <= C * reference + tol;
  }
};

inline constexpr double kFourFactorTolerance = 1e-8;

inline FourFactorResult four_factor(const BlaschkeProduct& f, const FourFactorSpec& spec,
                                    std::optional<FourFactorShape> shape = std::nullopt,
                                    double tol = kFourFactorTolerance,
                                    const QuadratureOptions& opt = {}) {
  FourFactorResult r;
  if (shape) {
    if (!matches(spec, *shape))
      throw ShapeMismatch("four_factor: specification does not have shape " + to_string(*shape));
    r.shape = *shape;
  } else {
    r.shape = classify(spec);
  }
  r.value = signed_product_integral(f, spec.factors, opt).value;
  const double a = std::abs(f.taylor_at_zero().c1);
  const auto& x = spec.factors;
  switch (r.shape) {
    case FourFactorShape::I:
      r.exact = true;
      r.expected_abs = 0.0;
      r.exponent = 0.0;
      break;
    case FourFactorShape::II:
      r.exponent = x[3].index - x[0].index;
      break;
    case FourFactorShape::III: {
      const int n1 = x[0].index, n2 = x[2].index, n3 = x[3].index;
      r.exponent = (n2 == n1 + 1 && n3 <= n2 + 2) ? 0.0 : static_cast<double>(n3 - n1);
      break;
    }
    case FourFactorShape::IV: {
      const int n1 = x[0].index, n2 = x[1].index, n3 = x[2].index, n4 = x[3].index;
      r.exponent = (n4 - n3 > 2) ? static_cast<double>(n2 - n1 + n4 - n3)
                                 : static_cast<double>(n3 - n1);
      if (x[0].sign * x[1].sign == -1 && x[2].sign * x[3].sign == -1) {
        r.exact = true;
        r.exponent = n2 - n1 + n4 - n3;
        r.expected_abs = std::pow(a, r.exponent);
      }
      break;
    }
  }
  r.reference = std::pow(a, r.exponent);
  if (r.exact) r.exact_pass = std::abs(std::abs(r.value) - r.expected_abs) <= tol;
  r.ratio = r.reference > 0.0 ? std::abs(r.value) / r.reference
                              : (std::abs(r.value) <= tol ? 0.0 : INFINITY);
  return r;
}

/// Smallest C with |value| ≤ C·a^e over a family of bound-type results.
inline double fit_four_factor_constant(std::span<const FourFactorResult> results) {
  double c = 0.0;
  for (const auto& r : results) c = std::max(c, r.ratio);
  return c;
}

/// ∫ Π f^{ε_j n_j} dm.
inline cplx higher_correlation(const BlaschkeProduct& f, const CorrelationSpec& spec,
                               const QuadratureOptions& opt = {}) {
  const auto fs = spec.factors();
  return signed_product_integral(f, fs, opt).value;
}

struct PhiReport {
  std::vector<double> deltas;  // δ_1 .. δ_{k−1}
  double phi = 0.0;
  double lower_bound = 0.0;  // k·q/4
  int q = 0;
};

namespace detail {

struct PhiPath {
  double phi = 0.0;
  std::vector<double> deltas;  // assignments from some gap onward
};

// Gap g (0-based) sits between factors g and g+1. States follow the estimate
// chain: a plain product starting at factor j, or a product preceded by a
// power z^l (l ≠ 0) starting at factor j. Steps after a plain product are
// fixed by the signs; after a power the dominating term is not determined,
// so the smaller exponent (the weaker bound) is taken.
class PhiSolver {
 public:
  PhiSolver(const std::vector<int>& signs, const std::vector<int>& indices)
      : eps_(signs), n_(indices), k_(static_cast<int>(signs.size())) {}

  PhiPath solve() { return plain(0); }

 private:
  double gap(int g) const { return n_[static_cast<std::size_t>(g + 1)] - n_[static_cast<std::size_t>(g)]; }

  // Plain product of factors j..k−1 (0-based); assigns gaps from j on.
  PhiPath plain(int j) {
    const int r = k_ - j;
    if (r <= 1) return {};
    PhiPath out;
    out.deltas.push_back(1.0);
    out.phi = gap(j);
    PhiPath rest;
    if (eps_[static_cast<std::size_t>(j)] * eps_[static_cast<std::size_t>(j + 1)] == -1) {
      const int nj = j + 2;
      if (nj <= k_ - 1) {
        // Gap j+1 collapses. A single leftover factor integrates to zero; its
        // gap still gets 1/2 so the terminal rule δ_{k−1} ≥ 1/2 holds.
        if (nj == k_ - 1) {
          rest.deltas = {0.5};
          rest.phi = 0.5 * gap(j + 1);
        } else {
          rest = plain(nj);
          rest.deltas.insert(rest.deltas.begin(), 0.0);
        }
      }
    } else {
      rest = powered(j + 2);
    }
    out.phi += rest.phi;
    out.deltas.insert(out.deltas.end(), rest.deltas.begin(), rest.deltas.end());
    return out;
  }

  // z^l times the product of factors j..k−1; assigns gaps from j−1 on.
  PhiPath powered(int j) {
    if (j >= k_) return {};
    PhiPath out;
    out.deltas.push_back(0.5);
    out.phi = 0.5 * gap(j - 1);
    if (j == k_ - 1) return out;
    // Next term z^n: n ≠ 0 keeps the power, n = 0 hands over to a plain product.
    PhiPath keep = powered(j + 1);
    PhiPath drop;
    if (j + 1 == k_ - 1) {
      drop.deltas = {0.5};
      drop.phi = 0.5 * gap(j);
    } else {
      drop = plain(j + 1);
      drop.deltas.insert(drop.deltas.begin(), 0.0);
    }
    const PhiPath& best = (drop.phi <= keep.phi) ? drop : keep;
    out.phi += best.phi;
    out.deltas.insert(out.deltas.end(), best.deltas.begin(), best.deltas.end());
    return out;
  }

  const std::vector<int>& eps_;
  const std::vector<int>& n_;
  int k_;
};

inline void check_phi_structure(const PhiReport& r) {
  const auto& d = r.deltas;
  bool ok = !d.empty() && d.front() == 1.0 && d.back() >= 0.5;
  for (double x : d) ok = ok && (x == 0.0 || x == 0.5 || x == 1.0);
  for (std::size_t j = 1; j < d.size(); ++j) ok = ok && ((d[j] == 1.0) == (d[j - 1] == 0.0));
  ok = ok && r.phi + 1e-12 >= r.lower_bound;
  if (!ok) throw Error("phi_exponent: structural invariant violated");
}

}  // namespace detail

/// Exponent Φ(ε, n) = Σ δ_j (n_{j+1} − n_j) from the estimate chain.
inline PhiReport phi_exponent(const CorrelationSpec& spec) {
  if (spec.k() < 2) throw InvalidArgument("phi_exponent: need k >= 2");
  detail::PhiSolver solver(spec.signs(), spec.indices());
  detail::PhiPath path = solver.solve();
  PhiReport r;
  r.deltas = std::move(path.deltas);
  r.q = spec.min_gap();
  r.lower_bound = spec.k() * r.q / 4.0;
  double phi = 0.0;
  for (std::size_t j = 0; j < r.deltas.size(); ++j)
    phi += r.deltas[j] * (spec.indices()[j + 1] - spec.indices()[j]);
  r.phi = phi;
  detail::check_phi_structure(r);
  return r;
}

struct DecayRow {
  int k = 0;
  int q = 0;
  double phi = 0.0;
  double abs_I = 0.0;
  double bound = 0.0;  // C^k k! a^Φ with the fitted C
  bool pass = false;
};

struct DecayCheck {
  bool vacuous = false;  // a = 0: the bound degenerates and nothing is tested
  double fitted_C = 0.0;
  bool pass = false;
  std::vector<DecayRow> rows;
};

inline constexpr double kDecayConstantCap = 100.0;

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Fits the smallest C with |I| ≤ C^k k! a^Φ over the family.
inline DecayCheck decay_check(const BlaschkeProduct& f, std::span<const CorrelationSpec> family,
                              int q, const QuadratureOptions& opt = {}) {
  DecayCheck out;
  const double a = std::abs(f.taylor_at_zero().c1);
  out.vacuous = (a == 0.0);
  for (const auto& spec : family) {
    if (spec.k() >= 2 && spec.min_gap() < q)
      throw InvalidArgument("decay_check: specification gap below q");
    DecayRow row;
    row.k = spec.k();
    row.q = q;
    row.abs_I = std::abs(higher_correlation(f, spec, opt));
    row.phi = spec.k() >= 2 ? phi_exponent(spec).phi : 0.0;
    if (!out.vacuous) {
      const double scale = factorial(row.k) * std::pow(a, row.phi);
      out.fitted_C = std::max(out.fitted_C, std::pow(row.abs_I / scale, 1.0 / row.k));
    }
    out.rows.push_back(row);
  }
  for (auto& row : out.rows) {
    row.bound = out.vacuous ? 0.0
                            : std::pow(out.fitted_C, row.k) * factorial(row.k) * std::pow(a, row.phi);
    row.pass = out.vacuous || row.abs_I <= row.bound * (1.0 + 1e-12) + 1e-300;
  }
  out.pass = out.vacuous || out.fitted_C <= kDecayConstantCap;
  return out;
}

}  // namespace innerclt
