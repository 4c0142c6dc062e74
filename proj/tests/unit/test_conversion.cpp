#include <doctest.h>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <set>

#include "qicd/conversion.hpp"
#include "qicd/error.hpp"
#include "qicd/gaussian.hpp"
#include "qicd/scenario.hpp"

using namespace qicd;
using boost::math::quadrature::gauss_kronrod;

namespace {

Scenario ideal_point(double n_s, double n_b, double kappa) {
  ScenarioParams p;
  p.n_s = n_s;
  p.n_b = n_b;
  p.kappa = kappa;
  p.n_e2 = 0.0;
  return Scenario(p);
}

}  // namespace

TEST_CASE("xi_of") {
  const auto zero = xi_of(presets::cool_case().with("kappa", 0.0));
  CHECK(zero.xi == 0.0);
  CHECK(zero.e_prime == zero.n_i_prime);

  const auto s = ideal_point(0.02, 30.0, 0.3);
  const auto e = xi_of(s);
  CHECK(e.xi == doctest::Approx(0.3 * 0.02 * 1.02 / (2.0 * (0.3 * 0.02 + 30.0 + 1.0))).epsilon(1e-14));
  CHECK(e.e_prime == doctest::Approx(0.02 - 2.0 * e.xi).epsilon(1e-14));

  // Agreement with the Gaussian-state heterodyne route.
  for (auto sc : {presets::cool_case(), presets::warm_case().with("G", 7.0)}) {
    const auto het = heterodyne_condition(hypothesis_states(sc).second);
    const auto ens = xi_of(sc);
    CHECK(het.xi == doctest::Approx(ens.xi).epsilon(1e-12));
    CHECK(het.e_prime == doctest::Approx(ens.e_prime).epsilon(1e-10));
  }

  const auto roc = xi_of(presets::cool_case().with_copies(690'000'000));
  const double x = 2.0 * static_cast<double>(roc.copies) * roc.xi;
  CHECK(x >= 1.0);
  CHECK(x <= 10.0);

  CHECK_THROWS_AS(make_ensemble(0.5, 0.5, 1), PhysicalityError);
}

TEST_CASE("chi-square energy density") {
  const double xi = 0.37;
  for (double x : {0.0, 0.2, 1.0, 4.0}) {
    CHECK(chi2_pdf(x, 1, xi) == doctest::Approx(std::exp(-x / (2.0 * xi)) / (2.0 * xi)).epsilon(1e-14));
  }
  for (std::int64_t m : {1LL, 3LL, 50LL, 4000LL, 100000LL}) {
    const boost::math::gamma_distribution<double> ref(static_cast<double>(m), 2.0 * xi);
    const double mean = 2.0 * m * xi, sd = 2.0 * xi * std::sqrt(static_cast<double>(m));
    for (double z : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
      const double x = mean + z * sd;
      if (x <= 0.0) continue;
      CHECK(chi2_pdf(x, m, xi) == doctest::Approx(boost::math::pdf(ref, x)).epsilon(1e-11));
    }
    const double lo = std::max(0.0, mean - 40.0 * sd), hi = mean + 40.0 * sd;
    auto f = [&](double x) { return chi2_pdf(x, m, xi); };
    double err = 0.0;
    const double norm = gauss_kronrod<double, 61>::integrate(f, lo, mean, 12, 1e-13, &err) +
                        gauss_kronrod<double, 61>::integrate(f, mean, hi, 12, 1e-13, &err);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    auto fx = [&](double x) { return x * chi2_pdf(x, m, xi); };
    const double m1 = gauss_kronrod<double, 61>::integrate(fx, lo, mean, 12, 1e-13) +
                      gauss_kronrod<double, 61>::integrate(fx, mean, hi, 12, 1e-13);
    auto fx2 = [&](double x) { return (x - mean) * (x - mean) * chi2_pdf(x, m, xi); };
    const double var = gauss_kronrod<double, 61>::integrate(fx2, lo, mean, 12, 1e-13) +
                       gauss_kronrod<double, 61>::integrate(fx2, mean, hi, 12, 1e-13);
    CHECK(m1 == doctest::Approx(mean).epsilon(1e-9));
    CHECK(var == doctest::Approx(4.0 * m * xi * xi).epsilon(1e-8));
    // cdf is the integral of the pdf.
    const double part = gauss_kronrod<double, 61>::integrate(f, lo, mean + 0.5 * sd, 12, 1e-13);
    CHECK(chi2_cdf(mean + 0.5 * sd, m, xi) == doctest::Approx(part).epsilon(1e-9));
  }
  CHECK(std::isfinite(gamma_log_pdf_unit(1e9, 1e9)));
  CHECK(gamma_log_pdf_unit(690e6, 690e6) ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI * 690e6) - 1.0 / (12.0 * 690e6)).epsilon(1e-12));
  CHECK_THROWS(chi2_pdf(1.0, 3, 0.0));
}

TEST_CASE("seeds and generators") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  CHECK(seen.size() == 1000);
  Rng a(derive_seed(9, 0)), b(derive_seed(9, 0));
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("displacement sampling") {
  const auto off = sample_displacements(presets::cool_case().with("kappa", 0.0).with_copies(50), 3);
  CHECK(off.d.size() == 50);
  for (auto d : off.d) CHECK(d == std::complex<double>(0.0, 0.0));
  CHECK(off.total == 0.0);

  // |d_T|^2 has mean 2 M xi and standard deviation 2 xi sqrt(M).
  const auto sc = ideal_point(0.5, 2.0, 0.4).with_copies(10);
  const auto e = xi_of(sc);
  const int trials = 10000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto draw = sample_displacements(sc, derive_seed(77, t));
    double direct = 0.0;
    for (auto d : draw.d) direct += std::norm(d);
    CHECK(draw.total == doctest::Approx(direct).epsilon(1e-14));
    sum += draw.total;
  }
  const double se = 2.0 * e.xi * std::sqrt(10.0) / std::sqrt(static_cast<double>(trials));
  CHECK(std::abs(sum / trials - 20.0 * e.xi) <= 3.0 * se);
  CHECK_THROWS_AS(sample_displacements(sc.with_copies(20'000'000), 1), ValidationError);
}

TEST_CASE("energy sampler matches the density") {
  for (std::int64_t m : {1LL, 10LL, 100LL, 50000LL}) {
    for (double xi : {0.01, 0.5, 2.0}) {
      const auto e = make_ensemble(xi, 2.0 * xi + 0.1, m);
      Rng rng(derive_seed(123, static_cast<std::uint64_t>(m) * 10 + static_cast<std::uint64_t>(xi * 100)));
      const int n = 20000;
      std::vector<double> v(n);
      for (auto& x : v) x = sample_total_energy(e, rng);
      std::sort(v.begin(), v.end());
      double d = 0.0;
      for (int i = 0; i < n; ++i) {
        const double f = chi2_cdf(v[i], m, xi);
        d = std::max({d, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
      }
      INFO("M=" << m << " xi=" << xi);
      // Family of 12 cells at overall level 0.01.
      CHECK(d * std::sqrt(static_cast<double>(n)) < std::sqrt(-0.5 * std::log(0.01 / 12.0 / 2.0)));
    }
  }
}

TEST_CASE("error exponents") {
  using Big = boost::multiprecision::cpp_bin_float_50;
  for (double n : {0.0, 1e-9, 1e-3, 1.0, 1250.0, 1e12}) {
    const Big ref = pow(sqrt(Big(n) + 1) - sqrt(Big(n)), 2);
    CHECK(sqrt_gap_sq(n) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
  }

  const auto r = error_exponents(ideal_point(1e-6, 1250.0, 0.01));
  CHECK(r.r_lb / r.r_cs == doctest::Approx(4.0).epsilon(0.01));
  REQUIRE(r.r_cs_nonideal.has_value());
  CHECK(*r.r_cs_nonideal == doctest::Approx(r.r_cs).epsilon(1e-12));

  for (auto sc : {presets::cool_case(), presets::warm_case(), ideal_point(3.0, 0.1, 0.9)}) {
    const auto x = error_exponents(sc);
    CHECK(x.r_lb <= x.r_ub);
  }

  // Return-path loss without gain costs advantage; amplification recovers some.
  const auto warm = presets::warm_case().with("G", 1.0);
  const auto base = error_exponents(warm);
  CHECK(base.r_lb / base.r_cs < 2.0);
  const auto amped = error_exponents(warm.with("G", 10.0));
  CHECK(amped.r_lb > base.r_lb);

  const auto over = error_exponents(presets::cool_case().with("G", 2e3));
  CHECK_FALSE(over.r_cs_nonideal.has_value());
}
