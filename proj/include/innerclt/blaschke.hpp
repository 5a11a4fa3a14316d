#pragma once

// Finite Blaschke products fixing the origin,
//
//   f(z) = rotation · z^m · Π (a_i − z) / (1 − conj(a_i) z),
//
// where m ≥ 1 is the multiplicity of the zero at 0 and a_i are the nonzero
// zeros. f(0) = 0 is structural. Boundary values have modulus one and the
// boundary phase θ ↦ arg f(e^{iθ}) increases strictly, by 2π·degree per turn.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "innerclt/errors.hpp"

namespace innerclt {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Point e^{iθ} of the unit circle, θ canonical in [0, 2π).
class CirclePoint {
 public:
  CirclePoint() = default;
  explicit CirclePoint(double theta) : theta_(canonical(theta)) {}

  static CirclePoint from_complex(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == cplx{})
      throw InvalidArgument("CirclePoint: point must be finite and nonzero");
    return CirclePoint(std::arg(z));
  }

  double theta() const noexcept { return theta_; }
  cplx value() const { return std::polar(1.0, theta_); }

  static double canonical(double theta) {
    if (!std::isfinite(theta))
      throw InvalidArgument("CirclePoint: angle must be finite");
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;  // fmod rounding at the top end
    return t;
  }

 private:
  double theta_ = 0.0;
};

/// Taylor data at the origin: c1 = f'(0), c2 = f''(0)/2.
struct TaylorJet {
  cplx c1;
  cplx c2;
};

class BlaschkeProduct {
 public:
  static constexpr double kZeroModulusGuard = 1e-12;
  static constexpr double kRotationTolerance = 1e-14;
  static constexpr double kPoleGuard = 1e-12;
  static constexpr double kDomainSlack = 1e-9;

  /// Validates and normalizes. Zeros are a multiset; at least one must be
  /// exactly 0, every one must satisfy |a| < 1 − 1e-12, |rotation| = 1.
  BlaschkeProduct(std::vector<cplx> zeros, cplx rotation = {1.0, 0.0})
      : zeros_(std::move(zeros)), rotation_(rotation) {
    if (std::abs(std::abs(rotation_) - 1.0) > kRotationTolerance)
      throw InvalidArgument("BlaschkeProduct: |rotation| must be 1");
    for (const cplx& a : zeros_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw InvalidArgument("BlaschkeProduct: zeros must be finite");
      if (std::abs(a) >= 1.0 - kZeroModulusGuard)
        throw InvalidArgument("BlaschkeProduct: zeros must lie inside the disc");
      if (a == cplx{})
        ++origin_multiplicity_;
      else
        nonzero_.push_back(a);
    }
    if (origin_multiplicity_ == 0)
      throw InvalidArgument("BlaschkeProduct: a zero at the origin is required");
  }

  /// z^degree.
  static BlaschkeProduct monomial(int degree) {
    if (degree < 1) throw InvalidArgument("monomial: degree must be >= 1");
    return BlaschkeProduct(std::vector<cplx>(static_cast<std::size_t>(degree)));
  }

  /// z · Π (a_i − z)/(1 − conj(a_i) z).
  static BlaschkeProduct with_zeros(std::span<const cplx> nonzero,
                                    cplx rotation = {1.0, 0.0}) {
    std::vector<cplx> all{cplx{}};
    all.insert(all.end(), nonzero.begin(), nonzero.end());
    return BlaschkeProduct(std::move(all), rotation);
  }

  const std::vector<cplx>& zeros() const noexcept { return zeros_; }
  const std::vector<cplx>& nonzero_zeros() const noexcept { return nonzero_; }
  cplx rotation() const noexcept { return rotation_; }
  int origin_multiplicity() const noexcept { return origin_multiplicity_; }
  int degree() const noexcept { return static_cast<int>(zeros_.size()); }
  bool is_rotation() const noexcept { return degree() < 2; }

  cplx operator()(cplx w) const { return eval(w); }

  cplx eval(cplx w) const {
    check_point(w);
    cplx v = rotation_;
    for (int k = 0; k < origin_multiplicity_; ++k) v *= w;
    for (const cplx& a : nonzero_) v *= (a - w) / (1.0 - std::conj(a) * w);
    return v;
  }

  /// Analytic derivative by the product rule over the degree factors, so it
  /// is well defined at 0 and on the circle alike.
  cplx derivative(cplx w) const {
    check_point(w);
    // Running (value, derivative) of the partial product.
    cplx val = rotation_;
    cplx der = 0.0;
    for (int k = 0; k < origin_multiplicity_; ++k) {
      der = der * w + val;
      val *= w;
    }
    for (const cplx& a : nonzero_) {
      const cplx den = 1.0 - std::conj(a) * w;
      const cplx g = (a - w) / den;
      const cplx dg = (std::norm(a) - 1.0) / (den * den);
      der = der * g + val * dg;
      val *= g;
    }
    return der;
  }

  /// Closed-form jet at 0 from the zero data.
  TaylorJet taylor_at_zero() const {
    const int m = origin_multiplicity_;
    if (m >= 3) return {0.0, 0.0};
    cplx b0 = 1.0;        // B(0) = Π a_i
    cplx log_der = 0.0;   // B'(0)/B(0) = Σ (|a_i|² − 1)/a_i
    for (const cplx& a : nonzero_) {
      b0 *= a;
      log_der += (std::norm(a) - 1.0) / a;
    }
    if (m == 2) return {0.0, rotation_ * b0};
    return {rotation_ * b0, rotation_ * b0 * log_der};
  }

  /// Boundary step: f(z) projected back to modulus one.
  cplx step_boundary(cplx z) const {
    const cplx v = eval(z);
    return v / std::abs(v);
  }

 private:
  void check_point(cplx w) const {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
      throw InvalidArgument("BlaschkeProduct: evaluation point must be finite");
    if (std::abs(w) > 1.0 + kDomainSlack)
      throw InvalidArgument("BlaschkeProduct: evaluation point outside the disc");
    for (const cplx& a : nonzero_)
      if (std::abs(1.0 - std::conj(a) * w) <= kPoleGuard)
        throw PoleProximity("BlaschkeProduct: evaluation point at a pole");
  }

  std::vector<cplx> zeros_;
  cplx rotation_;
  std::vector<cplx> nonzero_;
  int origin_multiplicity_ = 0;
};

inline constexpr int kDefaultMaxIterate = 64;

/// The n-th iterate f^n as a map of the closed disc. Boundary evaluation
/// renormalizes after each step; interior evaluation composes exactly.
class Iterate {
 public:
  Iterate(const BlaschkeProduct& f, int n) : f_(&f), n_(n) {
    if (n < 0) throw InvalidArgument("Iterate: n must be non-negative");
  }

  const BlaschkeProduct& base() const noexcept { return *f_; }
  int order() const noexcept { return n_; }

  /// deg(f)^n, saturating at `cap`.
  long degree(long cap = 1L << 40) const {
    long d = 1;
    for (int k = 0; k < n_; ++k) {
      d *= f_->degree();
      if (d > cap) return cap;
    }
    return d;
  }

  cplx eval(cplx w) const {
    const bool on_circle = std::abs(std::abs(w) - 1.0) < 1e-12;
    for (int k = 0; k < n_; ++k) w = on_circle ? f_->step_boundary(w) : f_->eval(w);
    return w;
  }

  /// (f^n)'(w) = Π_k f'(f^k(w)).
  cplx derivative(cplx w) const {
    const bool on_circle = std::abs(std::abs(w) - 1.0) < 1e-12;
    cplx d = 1.0;
    for (int k = 0; k < n_; ++k) {
      d *= f_->derivative(w);
      w = on_circle ? f_->step_boundary(w) : f_->eval(w);
    }
    return d;
  }

 private:
  const BlaschkeProduct* f_;
  int n_;
};

/// Angle of f^n(e^{iθ}).
inline CirclePoint iterate_boundary(const BlaschkeProduct& f, CirclePoint p, int n,
                                    int max_n = kDefaultMaxIterate) {
  if (n < 0 || n > max_n)
    throw InvalidArgument("iterate_boundary: n outside [0, max_n]");
  if (n == 0) return p;
  cplx z = p.value();
  for (int k = 0; k < n; ++k) z = f.step_boundary(z);
  return CirclePoint::from_complex(z);
}

/// Fills out[k] = f^{k+1}(z) for k < out.size(), renormalizing each step.
inline void boundary_orbit(const BlaschkeProduct& f, cplx z, std::span<cplx> out) {
  for (auto& v : out) {
    z = f.step_boundary(z);
    v = z;
  }
}

}  // namespace innerclt
