#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "qicd/conversion.hpp"
#include "qicd/error.hpp"
#include "qicd/receivers.hpp"
#include "qicd/scenario.hpp"

using namespace qicd;
using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>>;

namespace {

// Photon-number generating function of the averaged H1 idler,
//   G(z) = (1 + E' - E' z)^(M-1) / (1 + E' + 2 xi - (E' + 2 xi) z)^M,
// expanded as a power series in 100-digit arithmetic.
std::vector<Big> pmf_from_generating_function(double xi, double e_prime, int m, int count) {
  const Big e(e_prime), t = Big(e_prime) + 2 * Big(xi);
  // Polynomial (1 + e - e z)^(m-1).
  std::vector<Big> poly(static_cast<std::size_t>(m), Big(0));
  Big binom = 1;
  for (int k = 0; k < m; ++k) {
    poly[k] = binom * pow(1 + e, m - 1 - k) * pow(-e, k);
    binom = binom * (m - 1 - k) / (k + 1);
  }
  // Negative binomial series of (1 + t - t z)^(-m).
  std::vector<Big> nb(static_cast<std::size_t>(count));
  Big c = pow(1 + t, -m);
  for (int k = 0; k < count; ++k) {
    nb[k] = c;
    c = c * Big(m + k) / Big(k + 1) * t / (1 + t);
  }
  std::vector<Big> out(static_cast<std::size_t>(count), Big(0));
  for (int n = 0; n < count; ++n) {
    for (int k = 0; k <= std::min(n, m - 1); ++k) out[n] += poly[k] * nb[n - k];
  }
  return out;
}

ConvertedEnsemble fig8_ensemble(std::int64_t m) { return xi_of(presets::cool_case().with_copies(m)); }

}  // namespace

TEST_CASE("thermal pmf") {
  CHECK(thermal_pmf(0.0, 0) == 1.0);
  CHECK(thermal_pmf(0.0, 3) == 0.0);
  CHECK(thermal_pmf(2.0, 3) == doctest::Approx(8.0 / 81.0).epsilon(1e-15));
}

TEST_CASE("averaged pmf against the generating function") {
  for (int m : {1, 7, 60}) {
    for (double xi : {1e-3, 0.05, 0.8}) {
      for (double ep : {0.0, 1e-4, 0.3}) {
        const auto e = make_ensemble(xi, ep + 2.0 * xi, m);
        const auto ref = pmf_from_generating_function(xi, ep, m, 25);
        for (int n = 0; n < 25; ++n) {
          const double r = static_cast<double>(ref[n]);
          INFO("M=" << m << " xi=" << xi << " E'=" << ep << " n=" << n);
          CHECK(averaged_pmf(e, n, Method::Exact) == doctest::Approx(r).epsilon(1e-11).scale(1e-300));
        }
      }
    }
  }
}

TEST_CASE("averaged pmf normalization and large-M agreement") {
  for (std::int64_t m : {100000LL, 10000000LL}) {
    const auto e = fig8_ensemble(m);
    for (auto method : {Method::Exact, Method::Asymptotic}) {
      const auto p = averaged_pmf_table(e, 200, method);
      double sum = 0.0;
      for (double v : p) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  const auto e = fig8_ensemble(100000);
  for (int n = 0; n < 6; ++n) {
    CHECK(averaged_pmf(e, n, Method::Asymptotic) == doctest::Approx(averaged_pmf(e, n, Method::Exact)).epsilon(1e-3));
  }
  for (int nd = 1; nd <= 5; ++nd) {
    CHECK(pnrd_error(e, nd, Method::Asymptotic).p_error ==
          doctest::Approx(pnrd_error(e, nd, Method::Exact).p_error).epsilon(1e-3));
  }
  CHECK(method_for(fig8_ensemble(10000)) == Method::Exact);
  CHECK(method_for(fig8_ensemble(10001)) == Method::Asymptotic);
}

TEST_CASE("Kennedy receiver") {
  const auto blind = make_ensemble(0.0, 0.2, 1000);
  CHECK(kennedy_error(blind).p_error == doctest::Approx(0.5).epsilon(1e-15));

  const auto e = fig8_ensemble(1000);
  const double p0 = static_cast<double>(pmf_from_generating_function(e.xi, e.e_prime, 1000, 1)[0]);
  CHECK(kennedy_error(e).p_error ==
        doctest::Approx(0.5 * (e.n_i_prime / (e.n_i_prime + 1.0) + p0)).epsilon(1e-12));

  // Saturation floor for M -> infinity.
  const auto inf = fig8_ensemble(100'000'000'000LL);
  CHECK(kennedy_error(inf).p_error ==
        doctest::Approx(inf.n_i_prime / (2.0 * (inf.n_i_prime + 1.0))).epsilon(1e-6));

  // Threshold one is the Kennedy receiver on both sides of the method switch.
  for (std::int64_t m : {1LL, 1000LL, 10000LL, 10001LL, 690000000LL}) {
    const auto x = fig8_ensemble(m);
    const double k = kennedy_error(x).p_error;
    CHECK(std::abs(pnrd_error(x, 1).p_error - k) <= 4.0 * (std::nextafter(k, 1.0) - k));
  }
}

TEST_CASE("photon-number-resolving threshold") {
  const auto blind = make_ensemble(0.0, 0.4, 50);
  for (int nd = 1; nd < 6; ++nd) CHECK(pnrd_error(blind, nd).p_error == doctest::Approx(0.5).epsilon(1e-14));

  const auto small = fig8_ensemble(10'000'000);
  const auto opt_small = pnrd_optimal(small);
  CHECK(opt_small.threshold == 1);
  CHECK(opt_small.tag == ReceiverTag::PnrdOptimal);

  for (std::int64_t m : {100'000'000LL, 1'000'000'000LL, 3'000'000'000LL, 10'000'000'000LL}) {
    const auto e = fig8_ensemble(m);
    const auto opt = pnrd_optimal(e, 30);
    for (int nd = 1; nd <= 30; ++nd) CHECK(opt.p_error <= pnrd_error(e, nd).p_error);
    CHECK(opt.p_error <= kennedy_error(e).p_error);
    CHECK_FALSE(opt.truncated);
  }
  CHECK(pnrd_optimal(fig8_ensemble(10'000'000'000LL)).threshold.value() > 1);
  // Deep in the tail the default search range is exhausted and says so.
  const auto deep = pnrd_optimal(fig8_ensemble(100'000'000'000LL));
  CHECK(deep.truncated);
  CHECK(deep.threshold == default_n_max(fig8_ensemble(100'000'000'000LL).n_i_prime));
  CHECK(default_n_max(1e-3) >= 5);
  CHECK(default_n_max(1e-3) <= 10);
}

TEST_CASE("homodyne benchmark") {
  CHECK(homodyne_error(0.01, 1e-3, 1250.0, 0.0) == 0.5);
  const auto cool = presets::cool_case().with_copies(100'000'000);
  CHECK(homodyne_error(cool, true).p_error >= homodyne_error(cool, false).p_error);

  const auto m = copies_for_homodyne_error(presets::cool_case(), 0.05);
  CHECK(homodyne_error(0.01, 1e-3, 1250.0, static_cast<double>(m)) <= 0.05);
  CHECK(homodyne_error(0.01, 1e-3, 1250.0, static_cast<double>(m - 1)) > 0.05);
}

TEST_CASE("phase-conjugating receiver") {
  const auto off = pcr_stats(presets::cool_case().with("kappa", 0.0));
  CHECK(off.mu1 == off.mu0);
  CHECK(off.sigma1_sq == doctest::Approx(off.sigma0_sq).epsilon(1e-15));
  const auto blind = pcr_stats(presets::cool_case().with("G_PCR", 1.0));
  CHECK(blind.mu1 == 0.0);

  const auto st = pcr_stats(presets::cool_case());
  const double closeness = (st.sigma1_sq - st.sigma0_sq) / st.sigma0_sq;
  CHECK(closeness > 0.0);
  CHECK(closeness < 10.0 * 0.01 * 1e-3 / 1250.0 * 1e3);

  CHECK(pcr_error(presets::cool_case().with("kappa", 0.0)).p_error == 0.5);
  // ln P scales linearly in M deep in the tail.
  const auto a = pcr_error(presets::cool_case().with_copies(20'000'000'000LL)).p_error;
  const auto b = pcr_error(presets::cool_case().with_copies(40'000'000'000LL)).p_error;
  CHECK(std::log(b) / std::log(a) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("receiver ordering at the reference point") {
  const auto m = copies_for_homodyne_error(presets::cool_case(), 0.05);
  const auto s = presets::cool_case().with_copies(m);
  const double pk = kennedy_error(xi_of(s)).p_error;
  const double pp = pcr_error(s).p_error;
  const double ph = homodyne_error(s, false).p_error;
  CHECK(pk < pp);
  CHECK(pp < ph);
}
