// One line per acceptance criterion: PASS/FAIL, the measured quantity and the wall time.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qicd/conversion.hpp"
#include "qicd/figures.hpp"
#include "qicd/fock_oracle.hpp"
#include "qicd/gaussian.hpp"
#include "qicd/receivers.hpp"
#include "qicd/roc.hpp"
#include "qicd/scenario.hpp"

using namespace qicd;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioParams ideal(double n_s, double n_b, double kappa) {
  ScenarioParams p;
  p.n_s = n_s;
  p.n_b = n_b;
  p.kappa = kappa;
  p.n_e2 = 0.0;
  return p;
}

double ratio_lb(const Scenario& s) {
  const auto r = error_exponents(s);
  return r.r_lb / r.r_cs;
}

double ulps(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / (std::nextafter(std::abs(b), INFINITY) - std::abs(b));
}

// 1. Reference table values with the number of significant digits each was printed with.
Outcome table_one() {
  struct Row {
    double printed;
    int digits;
  };
  const Row rows[8] = {{1.25e3, 3}, {4.15e2, 3}, {40, 1}, {15, 2}, {4, 1}, {1e-1, 1}, {4e-11, 1}, {9e-27, 1}};
  bool ok = true;
  std::string bad;
  for (int i = 0; i < 8; ++i) {
    const double n = thermal_occupation(kTable1FrequencyHz, kTable1Temperatures[i]);
    const int d = std::min(rows[i].digits, 2);
    const double unit = std::pow(10.0, std::floor(std::log10(rows[i].printed)) - (d - 1));
    if (std::abs(n - rows[i].printed) > 0.5 * unit) {
      ok = false;
      bad += fmt(" T=%gK: %.4g vs %g", kTable1Temperatures[i], n, rows[i].printed);
    }
  }
  return {ok, ok ? "all 8 rows within half a unit of the printed digit" : "mismatch:" + bad};
}

Outcome optimal_advantage() {
  const double r = ratio_lb(Scenario(ideal(1e-6, 1250.0, 0.01)));
  return {r >= 3.95 && r <= 4.00, fmt("r_LB/r_CS = %.6f", r)};
}

Outcome amplification_claims() {
  ScenarioParams warm = ideal(1e-3, 1250.0, 0.01);
  warm.n_v = warm.n_e1 = 1250.0;
  warm.eta_s = 0.1;
  ScenarioParams cool = warm;
  cool.n_v = cool.n_e1 = 0.1;
  const int n = 100;
  double warm_g1 = 0.0, warm_best = 0.0, warm_best_g = 1.0, cool_near1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = std::pow(10.0, 4.0 * i / (n - 1));
    warm.gain = g;
    cool.gain = g;
    const double rw = ratio_lb(Scenario(warm));
    if (i == 0) warm_g1 = rw;
    if (rw > warm_best) {
      warm_best = rw;
      warm_best_g = g;
    }
    if (g <= 2.0) cool_near1 = std::max(cool_near1, ratio_lb(Scenario(cool)));
  }
  const bool ok = warm_g1 < 2.0 && warm_best > 2.0 && cool_near1 > 2.0;
  return {ok, fmt("warm: ratio %.4f at G=1, max %.4f at G=%.3g; cool: max %.4f for G<=2", warm_g1, warm_best,
                  warm_best_g, cool_near1)};
}

Outcome qcb_alignment() {
  double worst = 0.0, at = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double n_s = std::pow(10.0, -6.0 + 4.0 * i / 40);
    const Scenario s(ideal(n_s, 1250.0, 0.01));
    const double lb = error_exponents(s).r_lb;
    const double q = qcb(s).exponent;
    const double rel = std::abs(lb - q) / q;
    if (rel > worst) {
      worst = rel;
      at = n_s;
    }
  }
  return {worst <= 0.1, fmt("max |r_LB - r_QCB|/r_QCB = %.3e (at N_S=%.2g) for N_S <= 1e-2", worst, at)};
}

Outcome receiver_ordering() {
  const auto base = presets::cool_case();
  const auto m = copies_for_homodyne_error(base, 0.05);
  const auto s = base.with_copies(m);
  const double p_qcb = qcb(s).probability;
  const double p_k = kennedy_error(xi_of(s)).p_error;
  const double p_pcr = pcr_error(s).p_error;
  const double p_h = homodyne_error(s, false).p_error;
  const auto far = xi_of(base.with_copies(1'000'000'000'000LL));
  const double floor = far.n_i_prime / (2.0 * (far.n_i_prime + 1.0));
  const double p_far = kennedy_error(far).p_error;
  const bool floor_ok = std::abs(p_far - floor) / floor < 1e-6;
  const bool ok = p_qcb <= p_k && p_k < p_pcr && p_pcr < p_h && floor_ok;
  return {ok, fmt("M=%lld: P_QCB=%.4e P_K=%.4e P_PCR=%.4e P_homo=%.4f; floor %.4e vs P_K(1e12)=%.4e", 
                  static_cast<long long>(m), p_qcb, p_k, p_pcr, p_h, floor, p_far)};
}

ScenarioParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto lu = [&](double lo, double hi) { return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u(rng)); };
  ScenarioParams p;
  p.n_s = lu(1e-6, 10.0);
  p.n_b = lu(1e-3, 1e4);
  p.kappa = u(rng);
  p.gain = lu(1.0, 1e3);
  p.n_v = lu(1e-3, 1e4);
  p.eta_s = 0.01 + 0.99 * u(rng);
  p.n_e1 = lu(1e-3, 1e4);
  p.eta_i = 0.01 + 0.99 * u(rng);
  p.n_e2 = lu(1e-12, 1.0);
  p.copies = static_cast<std::int64_t>(std::llround(lu(1.0, 1e10)));
  return p;
}

Outcome kennedy_identity() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto e = xi_of(Scenario(random_params(rng)));
    worst = std::max(worst, ulps(pnrd_error(e, 1).p_error, kennedy_error(e).p_error));
  }
  return {worst <= 4.0, fmt("max distance %.0f ulp over 1000 points", worst)};
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  for (std::int64_t m : {10LL, 10000LL, 690000000LL}) {
    for (double x : {0.5, 3.0, 10.0}) {
      for (double ep : {1e-4, 9e-4, 5e-2}) {
        const double xi = x / (2.0 * static_cast<double>(m));
        const auto e = make_ensemble(xi, ep + 2.0 * xi, m);
        for (int n = 0; n < 40; ++n) {
          const double closed = averaged_pmf(e, n, Method::Exact);
          worst = std::max(worst, std::abs(averaged_pmf_numeric(e, n) - closed));
          if (closed < 1e-20 && n > x) break;
        }
      }
    }
  }
  ScenarioParams p = presets::cool_case().params();
  p.n_s = 0.1;
  p.n_b = 0.1;
  p.kappa = 0.4;
  p.copies = 100;
  const auto e = xi_of(Scenario(p));
  const auto k = mc_receiver(e, McReceiver::Kennedy, 1, 100000, 31, 4);
  const auto n3 = mc_receiver(e, McReceiver::Pnrd, 3, 100000, 32, 4);
  const double zk = std::abs(k.estimate - kennedy_error(e).p_error) / k.std_error;
  const double z3 = std::abs(n3.estimate - pnrd_error(e, 3).p_error) / n3.std_error;
  const bool ok = worst <= 1e-8 && zk <= 3.0 && z3 <= 3.0;
  return {ok, fmt("max |quadrature - closed form| = %.2e; MC at 2Mxi=%.3f: Kennedy %.2f se, n_D=3 %.2f se", worst,
                  2.0 * 100 * e.xi, zk, z3)};
}

Outcome roc_dominance() {
  const auto s = presets::cool_case().with_copies(kRocCopies);
  const auto e = xi_of(s);
  const auto curve = cd_roc(e, default_n_max(e.n_i_prime));
  double worst_dom = INFINITY, worst_dom_pf = 0.0, worst_gauss = 0.0, worst_cls = INFINITY, first_loss = NAN;
  for (int i = 0; i <= 200; ++i) {
    const double pf = std::pow(10.0, -4.0 + (std::log10(0.5) + 4.0) * i / 200);
    const double cd = np_detection_probability(curve, pf);
    const double pcr = pcr_roc(s, pf);
    if (cd < pcr && std::isnan(first_loss)) first_loss = pf;
    if (cd - pcr < worst_dom) {
      worst_dom = cd - pcr;
      worst_dom_pf = pf;
    }
    worst_cls = std::min(worst_cls, pcr - classical_roc(s, pf, true));
    if (pf >= 0.05) worst_gauss = std::max(worst_gauss, std::abs(cd_roc_gaussian(e, pf) - cd));
  }
  const bool dom = worst_dom >= 0.0;
  const bool gauss = worst_gauss <= 0.05;
  const bool cls = worst_cls >= 0.0;
  return {dom && gauss && cls,
          fmt("2Mxi=%.3f; min(P_D^CD - P_D^PCR) = %.4f at P_F=%.3g, PCR ahead from P_F=%.3g [%s]; max |Gauss - exact| on [0.05,0.5] = %.4f "
              "[%s]; min(P_D^PCR - P_D^CS,NI) = %.4f [%s]",
              2.0 * static_cast<double>(e.copies) * e.xi, worst_dom, worst_dom_pf, first_loss, dom ? "ok" : "fails", worst_gauss,
              gauss ? "ok" : "fails", worst_cls, cls ? "ok" : "fails")};
}

Outcome sampler_statistics() {
  const int trials = 10000;
  const double ks_crit = 1.628 / std::sqrt(static_cast<double>(trials));
  double worst_ks = 0.0, worst_z = 0.0;
  int failures = 0;
  std::uint64_t stream = 0;
  for (std::int64_t m : {1LL, 10LL, 100LL}) {
    // Ideal lossless return with N_B = 0: xi = N_S / 2.
    for (double n_s : {0.02, 1.0, 4.0}) {
      ScenarioParams p = ideal(n_s, 0.0, 1.0);
      p.copies = m;
      const Scenario s(p);
      const double xi = xi_of(s).xi;
      std::vector<double> v(trials);
      double sum = 0.0;
      for (auto& x : v) {
        x = sample_displacements(s, derive_seed(4242, stream++)).total;
        sum += x;
      }
      std::sort(v.begin(), v.end());
      double d = 0.0;
      for (int i = 0; i < trials; ++i) {
        const double f = chi2_cdf(v[i], m, xi);
        d = std::max({d, (i + 1.0) / trials - f, f - static_cast<double>(i) / trials});
      }
      const double z = std::abs(sum / trials - 2.0 * m * xi) / (2.0 * xi * std::sqrt(static_cast<double>(m) / trials));
      worst_ks = std::max(worst_ks, d / ks_crit);
      worst_z = std::max(worst_z, z);
      failures += (d > ks_crit) + (z > 3.0);
    }
  }
  return {failures == 0,
          fmt("9 cells x 10^4 draws: max KS/critical = %.3f, max |mean - 2Mxi| = %.2f se, %d cell tests failed",
              worst_ks, worst_z, failures)};
}

Outcome helstrom_sanity() {
  double worst = 0.0;
  for (double x = 6.0; x <= 12.0; x += 0.5) {
    const auto coh = build_density_matrix(std::sqrt(x), 0.0);
    const auto vac = build_density_matrix(0.0, 0.0, coh.dim);
    worst = std::max(worst, std::abs(helstrom(vac, coh) / (0.25 * std::exp(-x)) - 1.0));
  }
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double margin = INFINITY;
  for (int i = 0; i < 100; ++i) {
    const std::complex<double> d0 = std::polar(2.0 * u(rng), 6.283185307179586 * u(rng));
    const std::complex<double> d1 = std::polar(2.0 * u(rng), 6.283185307179586 * u(rng));
    const double n0 = 1.5 * u(rng), n1 = 1.5 * u(rng);
    const int dim = std::max(build_density_matrix(d0, n0).dim, build_density_matrix(d1, n1).dim);
    const auto r0 = build_density_matrix(d0, n0, dim);
    const auto r1 = build_density_matrix(d1, n1, dim);
    const double gap = single_shot_qcb(r0, r1) - helstrom(r0, r1);
    margin = std::min(margin, gap);
    violations += gap < -1e-12;
  }
  return {worst <= 0.1 && violations == 0,
          fmt("max |P_H / (e^-x/4) - 1| = %.4f on x in [6,12]; min(QCB - P_H) = %.3e over 100 pairs", worst, margin)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "thermal occupation table", 1e-3, table_one},
      {2, "optimal advantage limit", 1e-3, optimal_advantage},
      {3, "amplification claims", 0.1, amplification_claims},
      {4, "lower bound aligns with QCB", 5.0, qcb_alignment},
      {5, "receiver ordering and Kennedy floor", 1.0, receiver_ordering},
      {6, "n_D=1 equals Kennedy", 1.0, kennedy_identity},
      {7, "oracle equivalence", 60.0, oracle_equivalence},
      {8, "ROC dominance", 5.0, roc_dominance},
      {9, "sampler statistics", 10.0, sampler_statistics},
      {10, "Fock-space Helstrom sanity", 30.0, helstrom_sanity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = o.passed && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s; %.3g s (limit %g s%s)\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs,
                c.time_limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
