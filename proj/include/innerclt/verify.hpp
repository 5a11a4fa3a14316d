#pragma once

// Property suites behind the `verify` command. Each check records a measured
// quantity against its threshold.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/clark.hpp"
#include "innerclt/coefficients.hpp"
#include "innerclt/correlations.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/quadrature.hpp"
#include "innerclt/rng.hpp"
#include "innerclt/variance.hpp"

namespace innerclt::verify {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }

  void at_most(std::string name, double value, double threshold) {
    checks.push_back({std::move(name), value <= threshold, value, threshold});
  }

  void holds(std::string name, bool ok) { checks.push_back({std::move(name), ok, ok ? 1.0 : 0.0, 1.0}); }

  // Runs body; an exception turns into one failed check.
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      checks.push_back({name + " raised: " + e.what(), false, NAN, 0.0});
    }
  }
};

inline void print(std::ostream& out, const SuiteResult& r) {
  for (const auto& c : r.checks)
    out << (c.pass ? "PASS " : "FAIL ") << r.suite << ": " << c.name << "  (" << c.value
        << " vs " << c.threshold << ")\n";
  out << r.suite << ": " << (r.pass() ? "all checks passed" : "FAILED") << '\n';
}

/// Maps used by the suites: z², z³ and z(0.5 − z)/(1 − 0.5z).
inline std::vector<std::pair<std::string, BlaschkeProduct>> test_maps() {
  const cplx half = 0.5;
  return {{"z^2", BlaschkeProduct::monomial(2)},
          {"z^3", BlaschkeProduct::monomial(3)},
          {"zero 0.5", BlaschkeProduct::with_zeros(std::span<const cplx>(&half, 1))}};
}

inline SuiteResult invariance() {
  SuiteResult r{"invariance", {}};
  for (const auto& [name, f] : test_maps())
    for (int p = -5; p <= 5; ++p) {
      if (p == 0) continue;
      r.guarded(name, [&, p] {
        const auto chk = check_invariance(
            f, [p](cplx z) { return std::pow(z, p) + std::conj(std::pow(z, p)) + std::norm(z + z * z); },
            1e-10);
        r.at_most(name + " G = z^" + std::to_string(p) + " + conj + |z+z^2|^2", chk.residual, 1e-10);
      });
    }
  return r;
}

inline SuiteResult clark() {
  SuiteResult r{"clark", {}};
  const cplx zi = cplx(0.0, 0.3);
  auto maps = test_maps();
  maps.push_back({"zero 0.3i", BlaschkeProduct::with_zeros(std::span<const cplx>(&zi, 1))});
  for (const auto& [name, f] : maps) {
    r.guarded(name, [&] {
      double mass = 0.0, m1 = 0.0, m2 = 0.0;
      bool count = true;
      for (std::uint64_t i = 0; i < 20; ++i) {
        const CirclePoint alpha(rng::uniform_angle(2024, i));
        const auto mu = clark_measure(f, alpha);
        count = count && static_cast<int>(mu.atoms.size()) == f.degree();
        mass = std::max(mass, std::abs(mu.total_mass() - 1.0));
        m1 = std::max(m1, check_first_moment(f, alpha).residual);
        m2 = std::max(m2, check_second_moment(f, alpha).residual);
      }
      r.holds(name + " atom count equals degree", count);
      r.at_most(name + " |weight sum - 1|", mass, 1e-10);
      r.at_most(name + " first moment residual", m1, 1e-8);
      r.at_most(name + " second moment residual", m2, 1e-8);
      const auto d = desintegrate(f, [](cplx z) { return std::norm(z + z * z) + z * z * z; });
      r.at_most(name + " desintegration residual", d.residual, 1e-8);
    });
  }
  r.guarded("moment bound", [&] {
    const cplx half = 0.5;
    const auto f = BlaschkeProduct::with_zeros(std::span<const cplx>(&half, 1));
    const auto sweep = moment_bound_sweep(f, 10);
    r.holds("moment bound sweep has a finite empirical n0", sweep.empirical_n0.has_value());
  });
  return r;
}

inline SuiteResult correlations() {
  SuiteResult r{"correlations", {}};
  const cplx half = 0.5;
  const auto f = BlaschkeProduct::with_zeros(std::span<const cplx>(&half, 1));
  const auto sq = BlaschkeProduct::monomial(2);
  r.guarded("pair", [&] {
    double worst = 0.0;
    for (int j = 2; j <= 6; ++j)
      for (int k = 1; k < j; ++k)
        worst = std::max({worst, pair_correlation(f, k, j).residual, pair_correlation(sq, k, j).residual});
    r.at_most("pair correlations, 1 <= k < j <= 6", worst, 1e-9);
  });
  r.guarded("four factor", [&] {
    const auto iv = four_factor(f, {{{{1, 1}, {-1, 2}, {1, 3}, {-1, 4}}}});
    r.at_most("alternating shape IV at (1,2,3,4)", std::abs(std::abs(iv.value) - 0.25), 1e-8);
    const auto i = four_factor(f, {{{{1, 2}, {-1, 1}, {1, 3}, {1, 5}}}});
    r.at_most("shape I vanishes", std::abs(i.value), 1e-8);
  });
  r.guarded("higher", [&] {
    const CorrelationSpec alt({1, -1, 1, -1, 1, -1}, {1, 3, 5, 7, 9, 11});
    r.at_most("alternating k = 6", std::abs(std::abs(higher_correlation(f, alt)) - 0.015625), 1e-8);
    const CorrelationSpec s({1, -1, 1, 1}, {1, 3, 5, 8});
    r.at_most("global sign flip conjugates",
              std::abs(higher_correlation(f, s.flipped()) - std::conj(higher_correlation(f, s))), 1e-10);
  });
  r.guarded("phi", [&] {
    r.at_most("phi of (+,-,+,-) at (1,2,3,4)",
              std::abs(phi_exponent(CorrelationSpec({1, -1, 1, -1}, {1, 2, 3, 4})).phi - 2.0), 0.0);
    const CorrelationSpec mixed({1, 1, -1, 1, 1}, {1, 3, 5, 7, 9});
    const std::vector<CorrelationSpec> fam{mixed, CorrelationSpec({1, 1, 1}, {1, 3, 6}),
                                           CorrelationSpec({1, -1, -1, 1}, {2, 4, 6, 8})};
    r.holds("decay bound with C <= 100", decay_check(f, fam, 2).pass);
  });
  return r;
}

inline SuiteResult variance() {
  SuiteResult r{"variance", {}};
  r.guarded("closed forms", [&] {
    const auto ones = CoefficientSequence::constant(3);
    r.at_most("sigma_3^2(a = 1, 0.5) = 5.5", std::abs(sigma_N_squared(ones, 0.5, 3) - 5.5), 0.0);
    r.at_most("asymptotic variance at 0.5", std::abs(asymptotic_sigma_squared(0.5) - 3.0), 1e-15);
  });
  r.guarded("sandwich", [&] {
    int violations = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      std::vector<cplx> v(40);
      for (std::size_t n = 0; n < v.size(); ++n) {
        const auto g = rng::normal_pair(s, n, 3);
        v[n] = {g[0], g[1]};
      }
      try {
        toeplitz_sandwich(CoefficientSequence::explicit_values(v), cplx(0.0, 0.7), 40);
      } catch (const SandwichViolation&) {
        ++violations;
      }
    }
    r.at_most("sandwich violations over 100 random sequences at 0.7i", violations, 0);
    const auto rep = toeplitz_sandwich(CoefficientSequence::constant(5), 0.5, 5);
    r.at_most("symbol minimum 1/3", std::abs(rep.symbol_min - 1.0 / 3.0), 1e-9);
    r.at_most("symbol maximum 3", std::abs(rep.symbol_max - 3.0), 1e-9);
  });
  r.guarded("l2 identity", [&] {
    double worst = 0.0;
    for (const auto& [name, f] : test_maps()) {
      if (f.degree() > 2) continue;
      for (long N = 1; N <= 10; ++N)
        worst = std::max(worst, l2_identity_check(f, CoefficientSequence::random_signs(10, 11), N).residual);
    }
    r.at_most("l2 identity residual", worst, 1e-8);
  });
  r.guarded("split plan", [&] {
    for (long N : {100L, 400L, 1600L}) {
      const auto plan = split_plan(CoefficientSequence::constant(static_cast<std::size_t>(N)), N);
      r.holds("split plan bounds at N = " + std::to_string(N), plan.regime_holds());
    }
  });
  return r;
}

inline SuiteResult run(const std::string& name) {
  if (name == "invariance") return invariance();
  if (name == "clark") return clark();
  if (name == "correlations") return correlations();
  if (name == "variance") return variance();
  throw InvalidArgument("unknown suite '" + name + "'");
}

}  // namespace innerclt::verify
