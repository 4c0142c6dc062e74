#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qicd/conversion.hpp"
#include "qicd/scenario.hpp"

namespace qicd {

inline constexpr double kTraceTolerance = 1e-10;

struct FockDensityMatrix {
  int dim;
  Eigen::MatrixXcd matrix;
  double trace_deficit;
};

/// Photon-number pmf p_0..p_{n_max} of a thermal state with N_T photons displaced
/// by energy x = |delta|^2. Throws TruncationError when the mass beyond n_max exceeds `tol`.
std::vector<double> displaced_thermal_pmf(double x, double n_t, int n_max, double tol = kTraceTolerance);

/// ceil(mean + 10 sd + 20) of the displaced thermal photon number.
int auto_dimension(double x, double n_t);

/// D(delta) rho_th(N_T) D(delta)^dagger in the first `dim` Fock states. Without `dim`
/// the automatic rule is used and doubled until the trace deficit is below `tol`;
/// with an explicit `dim` a larger deficit throws TruncationError.
FockDensityMatrix build_density_matrix(std::complex<double> delta, double n_t, std::optional<int> dim = std::nullopt,
                                       double tol = kTraceTolerance);

/// Minimum error probability for equal priors: (1 - ||rho0 - rho1||_1 / 2) / 2.
double helstrom(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1);

/// (1/2) min_s Tr rho0^s rho1^(1-s) in the truncated space.
double single_shot_qcb(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1);

/// Averaged H1 pmf at count n by adaptive quadrature of the displaced thermal pmf
/// against the gamma law of x. Independent of the closed forms in receivers.
double averaged_pmf_numeric(const ConvertedEnsemble& e, int n);

struct QuadratureResult {
  double value;
  int nodes;
  double rel_change;
};

/// Generalized Gauss-Laguerre rule (alpha = M - 1) normalized to the gamma law; Golub-Welsch.
void gamma_quadrature(std::int64_t copies, int nodes, std::vector<double>& u, std::vector<double>& w);

/// Average over x of the Helstrom error between the thermal idler (N'_I) and the
/// displaced thermal idler (sqrt x, E'). Node count doubles from 16 to 512 until
/// two successive results agree to 1e-4 relative.
QuadratureResult numeric_p_cd(const ConvertedEnsemble& e);
QuadratureResult numeric_p_cd(const Scenario& s);

enum class McReceiver { Kennedy, Pnrd };

struct McEstimate {
  double estimate;
  double std_error;
  std::int64_t trials;
};

/// Monte Carlo of the photon-counting receiver with threshold n_D (Kennedy: n_D = 1).
/// Each trial draws the hypothesis with probability 1/2, the displacement energy, and
/// a photon count; trials run in fixed blocks with seeds derived from `seed`.
McEstimate mc_receiver(const ConvertedEnsemble& e, McReceiver receiver, int n_d, std::int64_t trials,
                       std::uint64_t seed, int threads = 1);
McEstimate mc_receiver(const Scenario& s, McReceiver receiver, int n_d, std::int64_t trials, std::uint64_t seed,
                       int threads = 1);

/// Draws a photon count from the displaced thermal pmf by inverse CDF.
int sample_photon_count(double x, double n_t, Rng& rng);

}  // namespace qicd
