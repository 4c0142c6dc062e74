#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qicd/scenario.hpp"

namespace qicd {

/// Sufficient statistics of the idler after correlation-to-displacement conversion.
struct ConvertedEnsemble {
  double xi;
  double e_prime;
  double n_i_prime;
  std::int64_t copies;
};

/// Builds an ensemble from (xi, N'_I, M); E' = N'_I - 2 xi. Throws PhysicalityError if E' < -1e-12.
ConvertedEnsemble make_ensemble(double xi, double n_i_prime, std::int64_t copies);

ConvertedEnsemble xi_of(const Scenario& s);

/// Density of x = |d_T|^2: a gamma law with shape M and scale 2 xi.
double chi2_log_pdf(double x, std::int64_t copies, double xi);
double chi2_pdf(double x, std::int64_t copies, double xi);
double chi2_cdf(double x, std::int64_t copies, double xi);

/// ln of the Gamma(shape, 1) density at u, stable for large shape.
double gamma_log_pdf_unit(double u, double shape);

/// Seed for stream `stream` derived from a root seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

/// Generator owned by one sampling task.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

struct DisplacementSample {
  std::vector<std::complex<double>> d;
  double total;
};

/// Draws M heterodyne outcomes and the conditional idler displacements d_m.
/// Materializes every copy, so M is capped at 1e7.
DisplacementSample sample_displacements(const Scenario& s, std::uint64_t seed);

inline constexpr std::int64_t kChi2DirectMax = 10000;

/// Draws |d_T|^2: xi * (sum of 2M squared normals) for M <= 1e4, gamma(M, 2 xi) above.
double sample_total_energy(const ConvertedEnsemble& e, Rng& rng);

struct ErrorExponents {
  double r_lb;
  double r_ub;
  double r_cs;
  std::optional<double> r_cs_nonideal;  // empty when the folded channel is unphysical
};

/// (sqrt(n + 1) - sqrt(n))^2 without cancellation.
double sqrt_gap_sq(double n);

ErrorExponents error_exponents(const Scenario& s);

}  // namespace qicd
