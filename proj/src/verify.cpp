#include "qicd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qicd/conversion.hpp"
#include "qicd/csv.hpp"
#include "qicd/fock_oracle.hpp"
#include "qicd/gaussian.hpp"
#include "qicd/receivers.hpp"
#include "qicd/scenario.hpp"

namespace qicd {

namespace {

double ulps_apart(double a, double b) {
  if (a == b) return 0.0;
  const double ulp = std::nextafter(std::abs(b), std::numeric_limits<double>::infinity()) - std::abs(b);
  return std::abs(a - b) / ulp;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform());
}

Scenario random_scenario(Rng& rng) {
  ScenarioParams p;
  p.n_s = log_uniform(rng, 1e-6, 10.0);
  p.n_b = log_uniform(rng, 1e-3, 1e4);
  p.kappa = rng.uniform();
  p.gain = log_uniform(rng, 1.0, 1e3);
  p.n_v = log_uniform(rng, 1e-3, 1e4);
  p.eta_s = 0.01 + 0.99 * rng.uniform();
  p.n_e1 = log_uniform(rng, 1e-3, 1e4);
  p.eta_i = 0.01 + 0.99 * rng.uniform();
  p.n_e2 = log_uniform(rng, 1e-12, 1.0);
  p.copies = static_cast<std::int64_t>(std::llround(log_uniform(rng, 1.0, 1e10)));
  return Scenario(p);
}

// Small-M point with 2 M xi close to 3, used for the Monte Carlo checks.
Scenario mc_point() {
  ScenarioParams p = presets::cool_case().params();
  p.n_s = 0.1;
  p.n_b = 0.1;
  p.kappa = 0.4;
  p.copies = 100;
  return Scenario(p);
}

CheckResult check(std::string name, double measured, double tol, std::string detail = {}) {
  return {std::move(name), measured <= tol, measured, tol, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> run_verification(VerifyLevel level, std::uint64_t seed, int threads) {
  const bool full = level == VerifyLevel::Full;
  std::vector<CheckResult> out;

  {
    double worst = 0.0;
    Rng rng(derive_seed(seed, 1));
    for (int i = 0; i < 200; ++i) {
      const auto s = random_scenario(rng);
      const auto [h0, h1] = hypothesis_states(s);
      const auto m = effective_moments(s);
      worst = std::max({worst, rel_diff(h1.a(), 2.0 * m.n_a + 1.0), rel_diff(h1.b(), 2.0 * m.n_i + 1.0),
                        m.v12 > 0 ? rel_diff(h1.c(), m.v12) : 0.0});
      const auto het = heterodyne_condition(h1);
      worst = std::max(worst, std::abs(het.e_prime - xi_of(s).e_prime) / std::max(1.0, m.n_i));
    }
    out.push_back(check("channel composition vs effective moments (rel)", worst, 1e-12));
  }

  {
    double worst = 0.0;
    Rng rng(derive_seed(seed, 2));
    const int points = full ? 1000 : 200;
    for (int i = 0; i < points; ++i) {
      const auto e = xi_of(random_scenario(rng));
      worst = std::max(worst, ulps_apart(pnrd_error(e, 1).p_error, kennedy_error(e).p_error));
    }
    out.push_back(check("pnrd(n_D=1) vs Kennedy closed form (ulp)", worst, 4.0));
  }

  {
    const std::vector<std::int64_t> ms = full ? std::vector<std::int64_t>{10, 10000, 690000000}
                                              : std::vector<std::int64_t>{10, 690000000};
    const std::vector<double> xs = full ? std::vector<double>{0.5, 3.0, 10.0} : std::vector<double>{3.0};
    const std::vector<double> es = full ? std::vector<double>{1e-4, 9e-4, 5e-2} : std::vector<double>{9e-4};
    double worst = 0.0;
    for (auto m : ms) {
      for (double x : xs) {
        for (double ep : es) {
          const double xi = x / (2.0 * static_cast<double>(m));
          const auto e = make_ensemble(xi, ep + 2.0 * xi, m);
          for (int n = 0; n < 8; ++n) {
            worst = std::max(worst, std::abs(averaged_pmf_numeric(e, n) - averaged_pmf(e, n, Method::Exact)));
          }
        }
      }
    }
    out.push_back(check("averaged pmf: quadrature vs hypergeometric form (abs)", worst, 1e-8));
  }

  {
    const double x = 4.0, nt = 0.5;
    const auto rho = build_density_matrix(std::sqrt(x), nt);
    const auto pmf = displaced_thermal_pmf(x, nt, rho.dim - 1);
    double worst = 0.0;
    for (int n = 0; n < rho.dim; ++n) worst = std::max(worst, std::abs(rho.matrix(n, n).real() - pmf[n]));
    out.push_back(check("density-matrix diagonal vs Laguerre pmf (abs)", worst, 1e-10));
  }

  {
    const auto s = mc_point();
    const auto e = xi_of(s);
    const std::int64_t trials = full ? 100000 : 20000;
    const auto k = mc_receiver(e, McReceiver::Kennedy, 1, trials, derive_seed(seed, 3), threads);
    const double pk = kennedy_error(e).p_error;
    out.push_back(check("Monte Carlo Kennedy (standard errors)", std::abs(k.estimate - pk) / k.std_error, 3.0,
                        "closed form " + format_number(pk) + ", estimate " + format_number(k.estimate)));
    const auto n3 = mc_receiver(e, McReceiver::Pnrd, 3, trials, derive_seed(seed, 4), threads);
    const double p3 = pnrd_error(e, 3).p_error;
    out.push_back(check("Monte Carlo PNRD n_D=3 (standard errors)", std::abs(n3.estimate - p3) / n3.std_error, 3.0,
                        "closed form " + format_number(p3) + ", estimate " + format_number(n3.estimate)));
  }

  // Nine cells are tested at once, so the per-cell critical values are
  // Bonferroni-corrected to a family-wise level of 0.01.
  {
    const double ks_crit = std::sqrt(-0.5 * std::log(0.01 / 9.0 / 2.0));
    const double z_crit = 3.26;
    const int n = full ? 20000 : 5000;
    double worst_ks = 0.0, worst_mean = 0.0;
    std::uint64_t stream = 100;
    for (std::int64_t m : {1, 10, 100}) {
      for (double xi : {0.01, 0.5, 2.0}) {
        Rng rng(derive_seed(seed, stream++));
        const auto e = make_ensemble(xi, 2.0 * xi + 0.1, m);
        std::vector<double> v(n);
        for (auto& x : v) x = sample_total_energy(e, rng);
        std::sort(v.begin(), v.end());
        double d = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) {
          const double f = chi2_cdf(v[i], m, xi);
          d = std::max({d, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
          sum += v[i];
        }
        worst_ks = std::max(worst_ks, d * std::sqrt(static_cast<double>(n)) / ks_crit);
        const double sd = 2.0 * xi * std::sqrt(static_cast<double>(m)) / std::sqrt(static_cast<double>(n));
        worst_mean = std::max(worst_mean, std::abs(sum / n - 2.0 * m * xi) / sd);
      }
    }
    out.push_back(check("sampler KS statistic / critical value", worst_ks, 1.0));
    out.push_back(check("sampler mean (standard errors)", worst_mean, z_crit));
  }

  {
    double worst = 0.0;
    for (double x : {6.0, 9.0, 12.0}) {
      const auto r1 = build_density_matrix(std::sqrt(x), 0.0);
      const auto r0 = build_density_matrix(0.0, 0.0, r1.dim);
      worst = std::max(worst, rel_diff(helstrom(r0, r1), std::exp(-x) / 4.0));
    }
    out.push_back(check("Helstrom vacuum vs coherent ~ e^-x/4 (rel)", worst, 0.1));
  }

  {
    Rng rng(derive_seed(seed, 5));
    double worst = -1.0;
    const int pairs = full ? 100 : 20;
    for (int i = 0; i < pairs; ++i) {
      const double x0 = 4.0 * rng.uniform(), x1 = 4.0 * rng.uniform();
      const double n0 = 2.0 * rng.uniform(), n1 = 2.0 * rng.uniform();
      const std::complex<double> d1 = std::polar(std::sqrt(x1), 2.0 * rng.uniform());
      const int dim = std::max(build_density_matrix(std::sqrt(x0), n0).dim, build_density_matrix(d1, n1).dim);
      const auto r0 = build_density_matrix(std::sqrt(x0), n0, dim);
      const auto r1 = build_density_matrix(d1, n1, dim);
      worst = std::max(worst, helstrom(r0, r1) - single_shot_qcb(r0, r1));
    }
    out.push_back(check("Helstrom minus single-shot QCB (max)", worst, 1e-12));
  }

  {
    ScenarioParams p;
    p.n_s = 1e-2;
    p.n_b = 20.0;
    p.kappa = 0.1;
    p.copies = 10;
    const auto e = xi_of(Scenario(p));
    const auto num = numeric_p_cd(e);
    const double bound = std::min(kennedy_error(e).p_error, pnrd_optimal(e).p_error);
    out.push_back(check("numeric Helstrom average minus best counting receiver", num.value - bound, 1e-12,
                        "P_CD " + format_number(num.value) + " with " + std::to_string(num.nodes) + " nodes"));
  }

  {
    const auto s = presets::cool_case().with_copies(100000);
    const auto e = xi_of(s);
    double worst = 0.0;
    for (int n = 0; n < 6; ++n) {
      worst = std::max(worst, rel_diff(averaged_pmf(e, n, Method::Asymptotic), averaged_pmf(e, n, Method::Exact)));
    }
    out.push_back(check("exact vs large-M pmf at M=1e5 (rel)", worst, 1e-3));
  }

  return out;
}

}  // namespace qicd
