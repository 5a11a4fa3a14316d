// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "innerclt/innerclt.hpp"
#include "oracles.hpp"

using namespace innerclt;

namespace {

const double kPi = std::numbers::pi;

BlaschkeProduct with_zero(cplx a) { return BlaschkeProduct::with_zeros(std::span<const cplx>(&a, 1)); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double time_limit,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0.0) {
    out.detail << "; runtime " << secs << " s (limit " << time_limit << " s)";
    out.require(secs < time_limit, "runtime");
  } else {
    out.detail << "; runtime " << secs << " s";
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %2d %s:%s\n", out.pass ? "PASS" : "FAIL", id, title.c_str(),
              out.detail.str().c_str());
  std::fflush(stdout);
}

cplx gaussian(std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  return {n(gen), n(gen)};
}

}  // namespace

int main() {
  const auto sq = BlaschkeProduct::monomial(2);
  const auto cube = BlaschkeProduct::monomial(3);
  const auto half = with_zero(0.5);
  const auto tenth = with_zero(cplx(0.0, 0.3));

  criterion(1, "invariance", 5.0, [&](Outcome& o) {
    // Ten trigonometric polynomials with known means.
    std::vector<std::pair<std::function<cplx(cplx)>, cplx>> obs;
    for (int p = 1; p <= 8; ++p)
      obs.push_back({[p](cplx z) { return std::pow(z, p) + std::pow(std::conj(z), p); }, 0.0});
    obs.push_back({[](cplx z) { return cplx(std::norm(z * z + std::pow(z, 4))); }, 2.0});
    obs.push_back({[](cplx z) { return 3.0 + std::pow(z, 5) - 2.0 * std::conj(z * z * z); }, 3.0});
    double worst = 0.0, worst_mean = 0.0;
    for (const auto* f : {&sq, &cube, &half})
      for (const auto& [g, mean] : obs) {
        const auto r = check_invariance(*f, g, 1e-10);
        worst = std::max(worst, r.residual);
        worst_mean = std::max(worst_mean, std::abs(r.direct.value - mean));
      }
    o.detail << " worst |int G(f) - int G| = " << worst << " (tol 1e-10), worst |int G - exact| = " << worst_mean;
    o.require(worst <= 1e-10, "residual");
    o.require(worst_mean <= 1e-12, "direct integral");
  });

  criterion(2, "pair correlation", 10.0, [&](Outcome& o) {
    double worst = 0.0;
    const std::vector<std::pair<const BlaschkeProduct*, cplx>> maps{
        {&sq, 0.0}, {&half, 0.5}, {&tenth, cplx(0.0, 0.3)}};
    for (const auto& [f, lambda] : maps)
      for (int j = 2; j <= 6; ++j)
        for (int k = 1; k < j; ++k)
          worst = std::max(worst, std::abs(pair_correlation(*f, k, j).value - std::pow(lambda, j - k)));
    o.detail << " worst |quadrature - f'(0)^(j-k)| = " << worst << " (tol 1e-9)";
    o.require(worst <= 1e-9, "residual");
  });

  criterion(3, "clark measures", 30.0, [&](Outcome& o) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> t(0.0, 2 * kPi);
    double mass = 0.0, m1 = 0.0, m2 = 0.0, des = 0.0;
    bool counts = true;
    for (const auto* f : {&sq, &cube, &half, &tenth}) {
      // Moment targets from the Cauchy-integral Taylor oracle.
      const auto jet = oracle::taylor([f](cplx z) { return f->eval(z); }, 2);
      const cplx c1 = jet[1], c2 = jet[2];
      for (int i = 0; i < 20; ++i) {
        const CirclePoint alpha(t(gen));
        const cplx a = alpha.value();
        const auto mu = clark_measure(*f, alpha);
        counts = counts && static_cast<int>(mu.atoms.size()) == f->degree();
        mass = std::max(mass, std::abs(mu.total_mass() - 1.0));
        m1 = std::max(m1, std::abs(mu.moment(1) - std::conj(c1) * a));
        m2 = std::max(m2, std::abs(mu.moment(2) - (std::conj(c2) * a + std::conj(c1) * std::conj(c1) * a * a)));
      }
      const auto d = desintegrate(*f, [](cplx z) { return cplx(std::norm(z + z * z)) + std::pow(z, 3); }, 512);
      des = std::max(des, std::max(d.residual, std::abs(d.double_integral - 2.0)));
    }
    o.detail << " atom counts " << (counts ? "ok" : "wrong") << ", |mass - 1| <= " << mass
             << ", first moment <= " << m1 << ", second moment <= " << m2 << ", desintegration <= " << des;
    o.require(counts, "atom count");
    o.require(mass <= 1e-10, "mass");
    o.require(m1 <= 1e-8 && m2 <= 1e-8, "moments");
    o.require(des <= 1e-8, "desintegration");
  });

  criterion(4, "block factorization", 0.0, [&](Outcome& o) {
    const auto ones = CoefficientSequence::constant(12);
    const std::vector<BlockSum> hand{{{1, 2}}, {{3, 4}}};
    const auto h = block_product_factorization(sq, ones, hand);
    o.detail << " hand case lhs = " << h.lhs << ", rhs = " << h.rhs;
    o.require(std::abs(h.lhs - 4.0) <= 1e-10 && std::abs(h.rhs - 4.0) <= 1e-10, "hand value 4 = 2*2");

    std::mt19937_64 gen(4);
    std::vector<cplx> v(12);
    for (auto& x : v) x = gaussian(gen);
    const auto a = CoefficientSequence::explicit_values(v);
    std::uniform_int_distribution<int> len(1, 3), gap(0, 1), count(2, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto* f = trial % 2 ? &half : &sq;
      std::vector<BlockSum> blocks;
      int pos = 1;
      const int p = count(gen);
      for (int b = 0; b < p; ++b) {
        BlockSum s;
        for (int i = 0, L = len(gen); i < L; ++i) s.indices.push_back(pos++);
        blocks.push_back(s);
        pos += gap(gen);
      }
      worst = std::max(worst, block_product_factorization(*f, a, blocks).residual);
    }
    o.detail << "; 20 random families worst residual " << worst << " (tol 1e-8)";
    o.require(worst <= 1e-8, "residual");
  });

  criterion(5, "four-factor correlations", 0.0, [&](Outcome& o) {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> u(1, 4), s(0, 1);
    double worst_i = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int n1 = u(gen), n2 = u(gen);
      const int lo = std::max(n1, n2);
      const int n3 = lo + u(gen), n4 = lo + u(gen);
      const int e = s(gen) ? 1 : -1;
      const auto r = four_factor(half, {{{{e, n1}, {-e, n2}, {1, n3}, {1, n4}}}}, FourFactorShape::I);
      worst_i = std::max(worst_i, std::abs(r.value));
    }
    double worst_iv = 0.0;
    for (int n1 = 1; n1 <= 4; ++n1)
      for (int n2 = n1 + 1; n2 <= 6; ++n2)
        for (int n3 = n2 + 1; n3 <= 8; ++n3)
          for (int n4 = n3 + 1; n4 <= 10; ++n4)
            for (int e : {1, -1}) {
              const auto r = four_factor(half, {{{{e, n1}, {-e, n2}, {e, n3}, {-e, n4}}}});
              worst_iv = std::max(worst_iv, std::abs(std::abs(r.value) - std::pow(0.5, n2 - n1 + n4 - n3)));
            }
    const auto base = four_factor(half, {{{{1, 1}, {-1, 2}, {1, 3}, {-1, 4}}}});
    o.detail << " shape I max |value| = " << worst_i << ", alternating IV worst deviation = " << worst_iv
             << ", |value(1,2,3,4)| = " << std::abs(base.value);
    o.require(worst_i <= 1e-8, "shape I");
    o.require(worst_iv <= 1e-8, "shape IV");
    o.require(std::abs(std::abs(base.value) - 0.25) <= 1e-8, "0.25 case");
  });

  criterion(6, "higher-order decay", 0.0, [&](Outcome& o) {
    // Alternating exactness: |I| = a^{sum of gaps inside (+,-) pairs}.
    double worst_exact = 0.0;
    for (int k = 2; k <= 6; k += 2)
      for (int pattern = 0; pattern < 3; ++pattern) {
        std::vector<int> s, n;
        int pos = 1, even = 0;
        for (int j = 0; j < k; ++j) {
          s.push_back(j % 2 ? -1 : 1);
          n.push_back(pos);
          const int g = 1 + (j + pattern) % 3;
          if (j % 2 == 0) even += g;
          pos += g;
        }
        const double v = std::abs(higher_correlation(half, CorrelationSpec(s, n)));
        worst_exact = std::max(worst_exact, std::abs(v - std::pow(0.5, even)));
      }
    // Mixed-sign family, k <= 5, gaps >= 2.
    std::vector<CorrelationSpec> fam;
    const std::vector<std::vector<int>> gap_sets{{2, 2, 2, 2}, {2, 3, 2, 3}, {3, 2, 2, 2}};
    for (int k = 2; k <= 5; ++k)
      for (const auto& gs : gap_sets)
        for (int mask = 0; mask < (1 << k); ++mask) {
          std::vector<int> s, n;
          int pos = 1;
          for (int j = 0; j < k; ++j) {
            s.push_back((mask >> j) & 1 ? -1 : 1);
            n.push_back(pos);
            if (j < k - 1) pos += gs[static_cast<std::size_t>(j)];
          }
          fam.emplace_back(s, n);
        }
    const auto d = decay_check(half, fam, 2);
    bool structure = true;
    for (const auto& spec : fam) {
      const auto r = phi_exponent(spec);
      bool ok = r.deltas.front() == 1.0 && r.deltas.back() >= 0.5 && r.phi >= spec.k() * spec.min_gap() / 4.0;
      for (std::size_t j = 1; j < r.deltas.size(); ++j) ok = ok && ((r.deltas[j] == 1.0) == (r.deltas[j - 1] == 0.0));
      structure = structure && ok;
    }
    bool rows = true;
    for (const auto& r : d.rows) rows = rows && r.pass;
    o.detail << " alternating worst deviation " << worst_exact << " (tol 1e-8); " << fam.size()
             << " mixed specs, fitted C = " << d.fitted_C << " (cap 100); phi structure "
             << (structure ? "ok" : "violated");
    o.require(worst_exact <= 1e-8, "alternating exactness");
    o.require(d.pass && rows && !d.vacuous, "decay bound");
    o.require(structure, "phi invariants");
  });

  criterion(7, "variance", 0.0, [&](Outcome& o) {
    const double s3 = sigma_N_squared(CoefficientSequence::constant(3), 0.5, 3);
    const double asym = asymptotic_sigma_squared(0.5);
    std::mt19937_64 gen(7);
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
      std::vector<cplx> v(50);
      for (auto& x : v) x = gaussian(gen);
      const auto a = CoefficientSequence::explicit_values(v);
      try {
        const auto r = toeplitz_sandwich(a, cplx(0.0, 0.7), 50);
        // Independent check of the bounds from the reported numbers.
        const double C = 1.7 / 0.3;
        if (r.sigma2 < r.s2 / C * (1 - 1e-12) || r.sigma2 > r.s2 * C * (1 + 1e-12)) ++violations;
      } catch (const SandwichViolation&) {
        ++violations;
      }
    }
    double l2 = 0.0;
    for (const auto* f : {&sq, &half, &tenth})
      for (long N = 1; N <= 10; ++N) {
        std::vector<cplx> v(10);
        for (auto& x : v) x = gaussian(gen);
        l2 = std::max(l2, l2_identity_check(*f, CoefficientSequence::explicit_values(v), N).residual);
      }
    const auto rep = toeplitz_sandwich(CoefficientSequence::constant(4), 0.5, 4);
    o.detail << " sigma_3^2 = " << s3 << ", sigma^2(0.5) = " << asym << ", sandwich violations "
             << violations << "/100, l2 residual " << l2 << ", symbol range [" << rep.symbol_min << ", "
             << rep.symbol_max << "]";
    o.require(s3 == 5.5, "5.5 exactly");
    o.require(std::abs(asym - 3.0) <= 1e-15, "asymptotic 3");
    o.require(violations == 0, "sandwich");
    o.require(l2 <= 1e-8, "l2 identity");
    o.require(std::abs(rep.symbol_min - 1.0 / 3.0) <= 1e-9 && std::abs(rep.symbol_max - 3.0) <= 1e-9,
              "symbol extremes");
  });

  criterion(8, "split plan", 0.0, [&](Outcome& o) {
    double prev = 0.0, last = 0.0;
    bool bounds = true, increasing = true;
    for (long N : {100L, 400L, 1600L}) {
      const auto ones = CoefficientSequence::constant(static_cast<std::size_t>(N));
      const auto p = split_plan(ones, N, 0.2, 0.5);
      // Recheck every block and gap against the stated bounds.
      bool ok = true;
      for (int k = 0; k < p.Q; ++k) {
        const auto& b = p.xi_blocks[static_cast<std::size_t>(k)];
        const auto& g = p.eta_gaps[static_cast<std::size_t>(k)];
        const double bm = static_cast<double>(b.length()), gm = static_cast<double>(g.length());
        ok = ok && bm >= p.p && bm <= 2 * p.p && gm >= p.q && gm <= 2 * p.q;
        ok = ok && bm >= std::pow(p.p, p.gamma) && gm >= std::pow(p.q, p.beta);
      }
      bounds = bounds && ok;
      increasing = increasing && p.partial_variance_ratio > prev;
      prev = last = p.partial_variance_ratio;
      o.detail << " N=" << N << ": Q=" << p.Q << ", ratio " << p.partial_variance_ratio << ";";
    }
    o.require(bounds, "mass/length bounds");
    o.require(increasing, "ratio increasing");
    o.require(last >= 0.9, "ratio >= 0.9 at N = 1600");
  });

  criterion(9, "CLT runs", 60.0, [&](Outcome& o) {
    const GaussTolerances tol{0.01, 0.01, 0.02, 0.05, 0.02};
    const std::uint64_t seed = 20240601;
    const auto a = gauss_report(simulate(sq, CoefficientSequence::constant(18), 18, 200000, seed), tol);
    const auto b = gauss_report(simulate(half, CoefficientSequence::constant(14), 14, 100000, seed), tol);
    for (const auto& [name, r] : {std::pair{"z^2 N=18", a}, std::pair{"half N=14", b}})
      o.detail << " " << name << ": |mean| " << std::abs(r.mean) << ", E|T|^2 " << r.e_abs2 << ", |ET^2| "
               << std::abs(r.e_sq) << ", E|T|^4 " << r.e_abs4 << ", KS " << r.ks_re << "/" << r.ks_im << ";";
    o.require(a.pass, "z^2 run");
    o.require(b.pass, "half-map run");
  });

  criterion(10, "negative controls", 0.0, [&](Outcome& o) {
    const auto small = gauss_report(simulate(sq, CoefficientSequence::constant(2), 2, 200000, 10));
    const std::vector<long> Ns{5, 10, 20, 40};
    const auto growth = growth_condition(CoefficientSequence::geometric(40, 2.0), 0.5, Ns);
    const std::vector<long> Nq{10, 100, 1000};
    const auto quasi = quasiorthogonality(CoefficientSequence::constant(1000), Nq);
    o.detail << " N=2 KS(Re) " << small.ks_re << "; 2^n growth ratios " << growth.ratios.front() << " -> "
             << growth.ratios.back() << "; ones quasi ratio " << quasi.ratios.back();
    o.require(small.ks_re > 0.02 && !small.pass, "N = 2 fails KS");
    o.require(!growth.holds, "2^n fails growth");
    o.require(!quasi.holds && std::abs(quasi.ratios.back() - 0.999) <= 1e-12, "ones fails quasi");
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
