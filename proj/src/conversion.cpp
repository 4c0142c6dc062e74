#include "qicd/conversion.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/log1p.hpp>

#include "qicd/csv.hpp"
#include "qicd/error.hpp"
#include "qicd/mathfn.hpp"

namespace qicd {

namespace {

constexpr double kLn2Pi = 1.8378770664093453;

// Stirling remainder lgamma(a) - [(a - 1/2) ln a - a + ln(2 pi)/2], valid for a >= 20.
double stirling_remainder(double a) {
  const double r = 1.0 / a;
  const double r2 = r * r;
  return r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)));
}

}  // namespace

ConvertedEnsemble make_ensemble(double xi, double n_i_prime, std::int64_t copies) {
  if (!(xi >= 0.0)) throw ValidationError("make_ensemble: xi must be >= 0");
  if (!(n_i_prime >= 0.0)) throw ValidationError("make_ensemble: N'_I must be >= 0");
  if (copies < 1) throw ValidationError("make_ensemble: M must be >= 1");
  const double e_prime = n_i_prime - 2.0 * xi;
  if (e_prime < -1e-12) {
    throw PhysicalityError("make_ensemble: E' = N'_I - 2 xi = " + format_number(e_prime) + " < 0");
  }
  return {xi, std::max(e_prime, 0.0), n_i_prime, copies};
}

ConvertedEnsemble xi_of(const Scenario& s) {
  const auto& p = s.params();
  const auto m = effective_moments(s);
  const double xi = p.eta_s * p.eta_i * p.gain * p.kappa * p.n_s * (p.n_s + 1.0) / (2.0 * (m.n_a + 1.0));
  return make_ensemble(xi, m.n_i, p.copies);
}

double gamma_log_pdf_unit(double u, double shape) {
  if (u < 0.0) return -std::numeric_limits<double>::infinity();
  if (u == 0.0) {
    if (shape == 1.0) return 0.0;
    return shape < 1.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  if (shape < 20.0) return (shape - 1.0) * std::log(u) - u - mathfn::log_gamma(shape);
  // Write u = shape (1 + t) and cancel the O(shape) terms analytically.
  const double t = u / shape - 1.0;
  return -0.5 * (kLn2Pi + std::log(shape)) - stirling_remainder(shape) + shape * boost::math::log1pmx(t) -
         std::log1p(t);
}

double chi2_log_pdf(double x, std::int64_t copies, double xi) {
  if (copies < 1) throw ValidationError("chi2_pdf: M must be >= 1");
  if (!(xi > 0.0)) throw ValidationError("chi2_pdf: xi must be > 0");
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  const double scale = 2.0 * xi;
  return gamma_log_pdf_unit(x / scale, static_cast<double>(copies)) - std::log(scale);
}

double chi2_pdf(double x, std::int64_t copies, double xi) { return std::exp(chi2_log_pdf(x, copies, xi)); }

double chi2_cdf(double x, std::int64_t copies, double xi) {
  if (copies < 1) throw ValidationError("chi2_cdf: M must be >= 1");
  if (!(xi > 0.0)) throw ValidationError("chi2_cdf: xi must be > 0");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(copies), x / (2.0 * xi));
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DisplacementSample sample_displacements(const Scenario& s, std::uint64_t seed) {
  const auto& p = s.params();
  if (p.copies > 10'000'000) throw ValidationError("sample_displacements: M too large to materialize");
  const auto m = effective_moments(s);
  const double coeff = std::sqrt(p.eta_s * p.eta_i * p.gain * p.kappa * p.n_s * (p.n_s + 1.0)) / (m.n_a + 1.0);
  const std::complex<double> phase = std::polar(1.0, p.theta);
  // Each outcome is circular complex Gaussian with E|M_m|^2 = N'_A + 1.
  const double quad_sd = std::sqrt((m.n_a + 1.0) / 2.0);
  Rng rng(seed);
  DisplacementSample out;
  out.d.reserve(static_cast<std::size_t>(p.copies));
  mathfn::CompensatedSum total;
  for (std::int64_t i = 0; i < p.copies; ++i) {
    const std::complex<double> outcome(quad_sd * rng.normal(), quad_sd * rng.normal());
    const auto d = coeff * phase * std::conj(outcome);
    out.d.push_back(d);
    total.add(std::norm(d));
  }
  out.total = total.value();
  return out;
}

double sample_total_energy(const ConvertedEnsemble& e, Rng& rng) {
  if (e.xi == 0.0) return 0.0;
  if (e.copies <= kChi2DirectMax) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < 2 * e.copies; ++i) {
      const double z = rng.normal();
      sum += z * z;
    }
    return e.xi * sum;
  }
  std::gamma_distribution<double> gamma(static_cast<double>(e.copies), 2.0 * e.xi);
  return gamma(rng.engine());
}

double sqrt_gap_sq(double n) {
  const double s = std::sqrt(n + 1.0) + std::sqrt(n);
  return 1.0 / (s * s);
}

ErrorExponents error_exponents(const Scenario& s) {
  const auto& p = s.params();
  const auto e = xi_of(s);
  ErrorExponents r{};
  r.r_ub = 2.0 * e.xi;
  r.r_lb = r.r_ub * sqrt_gap_sq(p.n_s);
  r.r_cs = p.kappa * p.n_s * sqrt_gap_sq(p.n_b);
  const double kappa_eff = p.eta_s * p.gain * p.kappa;
  if (kappa_eff <= 1.0) {
    const auto ch = compose_channel(s);
    r.r_cs_nonideal = ch.kappa_eff * p.n_s * sqrt_gap_sq(ch.n_b_eff);
  }
  return r;
}

}  // namespace qicd
