#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/rng.hpp"

namespace innerclt {

enum class CoefficientKind { Explicit, Constant, RandomSigns, Geometric };

inline std::string to_string(CoefficientKind k) {
  switch (k) {
    case CoefficientKind::Explicit: return "explicit";
    case CoefficientKind::Constant: return "ones";
    case CoefficientKind::RandomSigns: return "random_signs";
    case CoefficientKind::Geometric: return "geometric";
  }
  return "explicit";
}

/// Finite stretch a_1, ..., a_L of a coefficient sequence, 1-indexed, plus the
/// generator it came from (used to bound the mass beyond storage).
class CoefficientSequence {
 public:
  static CoefficientSequence explicit_values(std::vector<cplx> values) {
    return CoefficientSequence(std::move(values), CoefficientKind::Explicit);
  }

  static CoefficientSequence constant(std::size_t length, cplx value = 1.0) {
    CoefficientSequence s(std::vector<cplx>(length, value), CoefficientKind::Constant);
    s.param_ = std::abs(value);
    return s;
  }

  static CoefficientSequence random_signs(std::size_t length, std::uint64_t seed) {
    std::vector<cplx> v(length);
    for (std::size_t i = 0; i < length; ++i) v[i] = static_cast<double>(rng::sign(seed, i, 7));
    CoefficientSequence s(std::move(v), CoefficientKind::RandomSigns);
    s.seed_ = seed;
    return s;
  }

  /// a_n = ratio^n.
  static CoefficientSequence geometric(std::size_t length, cplx ratio) {
    std::vector<cplx> v(length);
    cplx p = 1.0;
    for (auto& x : v) {
      p *= ratio;
      x = p;
    }
    CoefficientSequence s(std::move(v), CoefficientKind::Geometric);
    s.param_ = std::abs(ratio);
    return s;
  }

  std::size_t size() const noexcept { return values_.size(); }
  CoefficientKind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double parameter() const noexcept { return param_; }
  const std::vector<cplx>& values() const noexcept { return values_; }

  /// a_n for 1 ≤ n ≤ size(); zero beyond storage.
  cplx operator[](long n) const {
    if (n < 1) throw InvalidArgument("CoefficientSequence: indices start at 1");
    return static_cast<std::size_t>(n) <= values_.size() ? values_[static_cast<std::size_t>(n - 1)]
                                                         : cplx{};
  }

  /// S_N² = Σ_{n≤N} |a_n|².
  double mass(long N) const {
    double s = 0.0;
    for (long n = 1; n <= std::min<long>(N, static_cast<long>(size())); ++n)
      s += std::norm(values_[static_cast<std::size_t>(n - 1)]);
    return s;
  }

  /// Σ_{n ≥ N} |a_n|² over storage.
  double tail_mass(long N) const {
    double s = 0.0;
    for (long n = std::max(1L, N); n <= static_cast<long>(size()); ++n)
      s += std::norm(values_[static_cast<std::size_t>(n - 1)]);
    return s;
  }

  /// Σ_{n > size()} |a_n|² of the generating law: zero for explicit data,
  /// infinite for the non-decaying generators, closed form for geometric.
  double mass_beyond_storage() const {
    switch (kind_) {
      case CoefficientKind::Explicit: return 0.0;
      case CoefficientKind::Constant: return param_ == 0.0 ? 0.0 : INFINITY;
      case CoefficientKind::RandomSigns: return INFINITY;
      case CoefficientKind::Geometric: {
        const double r2 = param_ * param_;
        if (r2 >= 1.0) return INFINITY;
        return std::pow(r2, static_cast<double>(size() + 1)) / (1.0 - r2);
      }
    }
    return INFINITY;
  }

 private:
  CoefficientSequence(std::vector<cplx> v, CoefficientKind k) : values_(std::move(v)), kind_(k) {
    if (values_.empty()) throw InvalidArgument("CoefficientSequence: must be non-empty");
    for (const cplx& x : values_)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw InvalidArgument("CoefficientSequence: values must be finite");
  }

  std::vector<cplx> values_;
  CoefficientKind kind_;
  std::uint64_t seed_ = 0;
  double param_ = 0.0;
};

}  // namespace innerclt
