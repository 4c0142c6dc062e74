#include "qicd/gaussian.hpp"

#include <cmath>
#include <iostream>
#include <vector>

#include "qicd/csv.hpp"
#include "qicd/error.hpp"

namespace qicd {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn4 = 1.3862943611198906;
constexpr double kUnitTol = 1e-12;

// ln G_s(x) and Lambda_s(x) with r = (x-1)/(x+1) and r^s = exp(s ln r), so
// (x - 1)^s never underflows and 1 - r^s keeps its relative precision.
struct PowerTerms {
  double log_g;
  double lambda;
};

PowerTerms power_terms(double x, double s) {
  if (x - 1.0 <= 0.0) return {0.0, 1.0};
  const double log_r = x < 3.0 ? std::log((x - 1.0) / (x + 1.0)) : std::log1p(-2.0 / (x + 1.0));
  const double t = s * log_r;
  const double one_minus = -std::expm1(t);
  const double rs = std::exp(t);
  return {s * kLn2 - s * std::log(x + 1.0) - std::log(one_minus), (1.0 + rs) / one_minus};
}

struct ReducedBlock {
  double a, b, c;
  double log_g;
};

// S diag(L-, L-, L+, L+) S^T in (a, b, c) form, plus the product of G_s factors.
ReducedBlock weighted_block(const TwoModeGaussianState& st, double s) {
  const auto sp = symplectic_spectrum(st);
  const auto tm = power_terms(sp.nu_minus, s);
  const auto tp = power_terms(sp.nu_plus, s);
  const double wp2 = sp.omega_plus * sp.omega_plus;
  const double wm2 = sp.omega_minus * sp.omega_minus;
  return {wp2 * tm.lambda + wm2 * tp.lambda, wm2 * tm.lambda + wp2 * tp.lambda,
          sp.omega_plus * sp.omega_minus * (tm.lambda + tp.lambda), tm.log_g + tp.log_g};
}

}  // namespace

TwoModeGaussianState::TwoModeGaussianState(double a, double b, double c, double theta)
    : a_(a), b_(b), c_(c), theta_(theta) {
  if (!(a >= 1.0 - kUnitTol) || !(b >= 1.0 - kUnitTol)) {
    throw ValidationError("TwoModeGaussianState: diagonal entries must be >= 1");
  }
  if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("TwoModeGaussianState: c must be finite and >= 0");
  if (!std::isfinite(theta)) throw ValidationError("TwoModeGaussianState: theta must be finite");
}

Eigen::Matrix4d TwoModeGaussianState::dense() const {
  Eigen::Matrix2d rz;
  rz << std::cos(theta_), -std::sin(theta_), -std::sin(theta_), -std::cos(theta_);
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  v.topLeftCorner<2, 2>() = a_ * Eigen::Matrix2d::Identity();
  v.bottomRightCorner<2, 2>() = b_ * Eigen::Matrix2d::Identity();
  v.topRightCorner<2, 2>() = c_ * rz;
  v.bottomLeftCorner<2, 2>() = c_ * rz.transpose();
  return v;
}

TwoModeGaussianState tmsv(double n_s) {
  if (!(n_s >= 0.0)) throw ValidationError("tmsv: N_S must be >= 0");
  return {2.0 * n_s + 1.0, 2.0 * n_s + 1.0, 2.0 * std::sqrt(n_s * (n_s + 1.0)), 0.0};
}

TwoModeGaussianState apply_loss_channel(const TwoModeGaussianState& s, double kappa, double theta, double n_b) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw ValidationError("apply_loss_channel: kappa must lie in [0, 1]");
  if (!(n_b >= 0.0)) throw ValidationError("apply_loss_channel: N_B must be >= 0");
  return {kappa * s.a() + 2.0 * n_b + (1.0 - kappa), s.b(), std::sqrt(kappa) * s.c(), s.theta() + theta};
}

TwoModeGaussianState apply_amplifier(const TwoModeGaussianState& s, double gain, double n_v) {
  if (!(gain >= 1.0)) throw ValidationError("apply_amplifier: G must be >= 1");
  if (!(n_v >= 0.0)) throw ValidationError("apply_amplifier: N_V must be >= 0");
  return {gain * s.a() + (gain - 1.0) * (2.0 * n_v + 1.0), s.b(), std::sqrt(gain) * s.c(), s.theta()};
}

TwoModeGaussianState apply_inefficiency(const TwoModeGaussianState& s, Mode mode, double eta, double n_e) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("apply_inefficiency: eta must lie in (0, 1]");
  if (!(n_e >= 0.0)) throw ValidationError("apply_inefficiency: N_E must be >= 0");
  const double noise = (1.0 - eta) * (2.0 * n_e + 1.0);
  if (mode == Mode::Return) return {eta * s.a() + noise, s.b(), std::sqrt(eta) * s.c(), s.theta()};
  return {s.a(), eta * s.b() + noise, std::sqrt(eta) * s.c(), s.theta()};
}

HeterodyneResult heterodyne_condition(const TwoModeGaussianState& s) {
  const double c2 = s.c() * s.c();
  const double e_prime = (s.b() - 1.0) / 2.0 - c2 / (2.0 * (s.a() + 1.0));
  if (e_prime < -1e-12) {
    throw PhysicalityError("heterodyne_condition: conditional idler occupation " + format_number(e_prime) + " < 0");
  }
  return {std::max(e_prime, 0.0), s.c() / (s.a() + 1.0), c2 / (4.0 * (s.a() + 1.0))};
}

SymplecticSpectrum symplectic_spectrum(const TwoModeGaussianState& s) {
  const double apb = s.a() + s.b();
  const double y = apb * apb - 4.0 * s.c() * s.c();
  if (y < 0.0) throw PhysicalityError("symplectic_spectrum: (a+b)^2 - 4c^2 < 0");
  const double sy = std::sqrt(y);
  if (sy == 0.0) throw PhysicalityError("symplectic_spectrum: degenerate covariance matrix");
  const double d = s.b() - s.a();
  return {(sy + d) / 2.0, (sy - d) / 2.0, std::sqrt((apb + sy) / (2.0 * sy)), std::sqrt((apb - sy) / (2.0 * sy))};
}

bool is_physical(const TwoModeGaussianState& s, double tol) {
  const double apb = s.a() + s.b();
  const double y = apb * apb - 4.0 * s.c() * s.c();
  if (y <= 0.0) return false;
  const auto sp = symplectic_spectrum(s);
  return sp.nu_minus >= 1.0 - tol && sp.nu_plus >= 1.0 - tol;
}

double qcb_log_q(const TwoModeGaussianState& s0, const TwoModeGaussianState& s1, double s) {
  if (s0.c() > 0.0 && s1.c() > 0.0 && s0.theta() != s1.theta()) {
    throw ValidationError("qcb: correlated states must share the same rotation angle");
  }
  const auto w0 = weighted_block(s0, s);
  const auto w1 = weighted_block(s1, 1.0 - s);
  const double big_a = w0.a + w1.a;
  const double big_b = w0.b + w1.b;
  const double big_c = w0.c + w1.c;
  // det Sigma = (AB - C^2)^2 for the block structure above.
  return kLn4 - std::log(std::abs(big_a * big_b - big_c * big_c)) + w0.log_g + w1.log_g;
}

QcbResult qcb(const TwoModeGaussianState& s0, const TwoModeGaussianState& s1, std::int64_t copies) {
  if (copies < 1) throw ValidationError("qcb: M must be >= 1");
  if (!is_physical(s0) || !is_physical(s1)) throw PhysicalityError("qcb: unphysical input state");

  constexpr double lo = 1e-6;
  constexpr double hi = 1.0 - 1e-6;
  constexpr int kScan = 41;
  std::vector<double> grid(kScan), vals(kScan);
  for (int i = 0; i < kScan; ++i) {
    grid[i] = lo + (hi - lo) * i / (kScan - 1);
    vals[i] = qcb_log_q(s0, s1, grid[i]);
    if (!std::isfinite(vals[i])) throw NumericalError("qcb: non-finite Q_s at s = " + format_number(grid[i]));
  }
  int best = 0;
  for (int i = 1; i < kScan; ++i) {
    if (vals[i] < vals[best]) best = i;
  }
  bool unimodal = true;
  const double noise = 1e-13;
  bool rising = false;
  for (int i = 1; i < kScan; ++i) {
    const double diff = vals[i] - vals[i - 1];
    if (diff > noise) rising = true;
    else if (diff < -noise && rising) unimodal = false;
  }
  if (!unimodal) std::clog << "warning: qcb: Q_s is not unimodal on the coarse scan; using its best bracket\n";

  double left = grid[std::max(best - 1, 0)];
  double right = grid[std::min(best + 1, kScan - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = right - inv_phi * (right - left);
  double x2 = left + inv_phi * (right - left);
  double f1 = qcb_log_q(s0, s1, x1);
  double f2 = qcb_log_q(s0, s1, x2);
  for (int it = 0; it < 200 && right - left > 1e-13; ++it) {
    if (f1 <= f2) {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - inv_phi * (right - left);
      f1 = qcb_log_q(s0, s1, x1);
    } else {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + inv_phi * (right - left);
      f2 = qcb_log_q(s0, s1, x2);
    }
  }
  double s_opt = f1 <= f2 ? x1 : x2;
  double log_q = std::min(f1, f2);
  if (vals[best] < log_q) {
    s_opt = grid[best];
    log_q = vals[best];
  }
  // Q_s <= 1 always; rounding can push identical states a hair above.
  log_q = std::min(log_q, 0.0);
  const double log_p = -kLn2 + static_cast<double>(copies) * log_q;
  return {std::exp(log_p), log_p, -log_q, s_opt, std::exp(log_q), unimodal};
}

std::pair<TwoModeGaussianState, TwoModeGaussianState> hypothesis_states(const Scenario& sc) {
  const auto& p = sc.params();
  auto chain = [&](double kappa) {
    auto st = apply_loss_channel(tmsv(p.n_s), kappa, p.theta, p.n_b);
    st = apply_amplifier(st, p.gain, p.n_v);
    st = apply_inefficiency(st, Mode::Return, p.eta_s, p.n_e1);
    return apply_inefficiency(st, Mode::Idler, p.eta_i, p.n_e2);
  };
  return {chain(0.0), chain(p.kappa)};
}

QcbResult qcb(const Scenario& sc) {
  const auto [h0, h1] = hypothesis_states(sc);
  return qcb(h0, h1, sc.params().copies);
}

}  // namespace qicd
