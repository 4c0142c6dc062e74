#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "qicd/scenario.hpp"

namespace qicd {

/// Zero-mean two-mode state with covariance matrix
///   [ a I      c RZ ]
///   [ c (RZ)^T  b I ]
/// where RZ = [[cos t, -sin t], [-sin t, -cos t]]. Mode A (return) first, idler second.
class TwoModeGaussianState {
 public:
  /// Throws ValidationError on a, b < 1 or c < 0.
  TwoModeGaussianState(double a, double b, double c, double theta = 0.0);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double theta() const { return theta_; }

  double n_a() const { return (a_ - 1.0) / 2.0; }
  double n_i() const { return (b_ - 1.0) / 2.0; }

  /// Dense 4x4 realization, quadrature order (q_A, p_A, q_I, p_I). Test use.
  Eigen::Matrix4d dense() const;

 private:
  double a_, b_, c_, theta_;
};

enum class Mode { Return, Idler };

TwoModeGaussianState tmsv(double n_s);

/// Phase-shifting thermal-loss channel on the return mode; background enters with
/// N_B / (1 - kappa) photons so that the added noise is N_B.
TwoModeGaussianState apply_loss_channel(const TwoModeGaussianState& s, double kappa, double theta, double n_b);

/// Phase-insensitive amplifier of gain G on the return mode.
TwoModeGaussianState apply_amplifier(const TwoModeGaussianState& s, double gain, double n_v);

/// Beamsplitter of transmissivity eta mixing `mode` with a thermal mode of N_E photons.
TwoModeGaussianState apply_inefficiency(const TwoModeGaussianState& s, Mode mode, double eta, double n_e);

struct HeterodyneResult {
  double e_prime;    // conditional idler thermal photons
  double gain_coeff; // idler displacement per unit heterodyne outcome
  double xi;         // per-copy displacement energy scale, c^2 / (4 (a + 1))
};

/// Heterodyne on the return mode. Throws PhysicalityError when E' < -1e-12.
HeterodyneResult heterodyne_condition(const TwoModeGaussianState& s);

struct SymplecticSpectrum {
  double nu_plus;
  double nu_minus;
  double omega_plus;
  double omega_minus;
};

/// Throws PhysicalityError when (a + b)^2 - 4 c^2 < 0.
SymplecticSpectrum symplectic_spectrum(const TwoModeGaussianState& s);

/// True when both symplectic eigenvalues are >= 1 - tol.
bool is_physical(const TwoModeGaussianState& s, double tol = 1e-9);

struct QcbResult {
  double probability;      // 0.5 * q_min^M
  double log_probability;
  double exponent;         // -ln q_min, per copy
  double s_opt;
  double q_min;
  bool unimodal;           // coarse scan of Q_s looked unimodal
};

/// ln Q_s for one copy.
double qcb_log_q(const TwoModeGaussianState& s0, const TwoModeGaussianState& s1, double s);

/// Quantum Chernoff bound for M copies. Golden-section search on s with a
/// 200-iteration cap after a coarse bracketing scan.
QcbResult qcb(const TwoModeGaussianState& s0, const TwoModeGaussianState& s1, std::int64_t copies);

/// Return/idler states under H0 (kappa = 0) and H1, built by sequential channel composition.
std::pair<TwoModeGaussianState, TwoModeGaussianState> hypothesis_states(const Scenario& sc);

QcbResult qcb(const Scenario& sc);

}  // namespace qicd
