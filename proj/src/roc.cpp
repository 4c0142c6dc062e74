#include "qicd/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qicd/error.hpp"
#include "qicd/mathfn.hpp"

namespace qicd {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kTailTol = 1e-15;
constexpr int kTailCap = 1'000'000;

void require_open_unit(double p_f, const char* who) {
  if (!(p_f > 0.0 && p_f < 1.0)) throw ValidationError(std::string(who) + ": P_F must lie in (0, 1)");
}

}  // namespace

double cd_pf(double n_i_prime, int n_d) {
  if (n_d < 0) throw ValidationError("cd_pf: n_D must be >= 0");
  if (n_d == 0) return 1.0;
  return std::pow(n_i_prime / (n_i_prime + 1.0), n_d);
}

double cd_pd(const ConvertedEnsemble& e, int n_d, Method method) {
  if (n_d < 0) throw ValidationError("cd_pd: n_D must be >= 0");
  if (n_d == 0) return 1.0;
  mathfn::CompensatedSum head;
  for (int n = 0; n < n_d; ++n) head.add(averaged_pmf(e, n, method));
  const double h = head.value();
  if (h < 0.5) return 1.0 - h;
  mathfn::CompensatedSum tail;
  double prev = INFINITY;
  for (int n = n_d; n < n_d + kTailCap; ++n) {
    const double p = averaged_pmf(e, n, method);
    tail.add(p);
    // Normalization supplies the remainder: what is left is 1 - head - tail. Once
    // rounding keeps that from reaching the tolerance, stop on a negligible
    // decreasing term instead.
    if (p < kTailTol && (1.0 - h - tail.value() < kTailTol || (p < prev && p < 1e-3 * kTailTol * tail.value()))) break;
    prev = p;
  }
  return std::clamp(tail.value(), 0.0, 1.0);
}

DetectionCurve cd_roc(const ConvertedEnsemble& e, int n_d_max, Method method) {
  if (n_d_max < 1) throw ValidationError("cd_roc: n_D_max must be >= 1");
  DetectionCurve curve{"cd_pnrd", {}, {}};
  const auto pmf = averaged_pmf_table(e, n_d_max, method);
  // head[k] = sum_{n<k} pmf; P_D(n_D) = 1 - head[n_D], with the direct tail past the median.
  std::vector<double> head(n_d_max + 1, 0.0);
  mathfn::CompensatedSum acc;
  for (int n = 0; n < n_d_max; ++n) {
    acc.add(pmf[n]);
    head[n + 1] = acc.value();
  }
  for (int n_d = n_d_max; n_d >= 0; --n_d) {
    const double p_d = head[n_d] < 0.5 ? 1.0 - head[n_d] : cd_pd(e, n_d, method);
    curve.points.push_back({static_cast<double>(n_d), cd_pf(e.n_i_prime, n_d), p_d});
  }
  return curve;
}

double cd_roc_gaussian(const ConvertedEnsemble& e, double p_f) {
  require_open_unit(p_f, "cd_roc_gaussian");
  const double ep = e.e_prime;
  const double x = 2.0 * static_cast<double>(e.copies) * e.xi;
  const double mean = ep + x;
  const double var = ep * ep + ep + x * (2.0 * e.xi + 2.0 * ep + 1.0);
  const double n = e.n_i_prime;
  const double threshold = std::log(p_f) / (std::log(n) - std::log1p(n));
  if (!(var > 0.0)) return threshold <= mean ? 1.0 : 0.0;
  return 0.5 * mathfn::erfc((threshold - mean) / (std::sqrt(var) * kSqrt2));
}

double binormal_roc(double d, double p_f) {
  require_open_unit(p_f, "binormal_roc");
  if (d == 0.0) return p_f;
  return 0.5 * mathfn::erfc(mathfn::erfc_inv(2.0 * p_f) - d / kSqrt2);
}

double d_pcr(const Scenario& s) {
  const auto st = pcr_stats(s);
  return std::sqrt(static_cast<double>(s.params().copies) * st.mu1 * st.mu1 / st.sigma1_sq);
}

double d_cs(const Scenario& s, bool nonideal) {
  const auto& p = s.params();
  double kappa = p.kappa;
  double n_b = p.n_b;
  if (nonideal) {
    const auto ch = compose_channel(s);
    kappa = ch.kappa_eff;
    n_b = ch.n_b_eff;
  }
  return 2.0 * std::sqrt(static_cast<double>(p.copies) * kappa * p.n_s / (2.0 * n_b + 1.0));
}

double pcr_roc(const Scenario& s, double p_f) { return binormal_roc(d_pcr(s), p_f); }

double classical_roc(const Scenario& s, double p_f, bool nonideal) { return binormal_roc(d_cs(s, nonideal), p_f); }

VanTrees VanTrees::from(const PcrStatistics& st, std::int64_t copies) {
  const double dmu = st.mu0 - st.mu1;
  return {st.sigma0_sq, st.sigma1_sq, static_cast<double>(copies) * dmu * dmu};
}

double VanTrees::mu(double s) const {
  const double d = s * sigma0_sq + (1.0 - s) * sigma1_sq;
  return 0.5 * s * std::log(sigma0_sq) + 0.5 * (1.0 - s) * std::log(sigma1_sq) - 0.5 * std::log(d) -
         k * s * (1.0 - s) / (2.0 * d);
}

double VanTrees::mu_ddot(double s) const {
  const double delta = sigma0_sq - sigma1_sq;
  const double d = s * sigma0_sq + (1.0 - s) * sigma1_sq;
  const double u = s - s * s;
  const double du = 1.0 - 2.0 * s;
  // d^2/ds^2 of -ln(D)/2 - K u / (2 D) with D linear in s.
  return delta * delta / (2.0 * d * d) + k / d + k * delta * (du * d - u * delta) / (d * d * d);
}

RocPoint VanTrees::point(double s) const {
  const double w = std::sqrt(mu_ddot(s) / 2.0);
  return {s, 0.5 * mathfn::erfc(s * w), 1.0 - 0.5 * mathfn::erfc((1.0 - s) * w)};
}

double pcr_roc_van_trees(const Scenario& s, double p_f) {
  require_open_unit(p_f, "pcr_roc_van_trees");
  const auto vt = VanTrees::from(pcr_stats(s), s.params().copies);
  if (vt.k == 0.0) return p_f;
  // D(s) must stay positive; P_F falls monotonically with s on the admissible range.
  double hi = 1.0;
  const double delta = vt.sigma0_sq - vt.sigma1_sq;
  const double s_max = delta < 0.0 ? vt.sigma1_sq / (-delta) : std::numeric_limits<double>::infinity();
  double lo = 0.0;
  while (vt.point(hi).p_f > p_f) {
    hi = std::min(2.0 * hi, 0.5 * (hi + s_max));
    if (hi > 1e6) throw NumericalError("pcr_roc_van_trees: cannot bracket P_F");
  }
  if (vt.point(lo).p_f < p_f) {
    lo = -1.0;
    while (vt.point(lo).p_f < p_f) {
      lo *= 2.0;
      if (lo < -1e6) throw NumericalError("pcr_roc_van_trees: cannot bracket P_F");
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (vt.point(mid).p_f > p_f) lo = mid;
    else hi = mid;
  }
  return vt.point(0.5 * (lo + hi)).p_d;
}

double np_detection_probability(const DetectionCurve& curve, double p_f) {
  double best = 0.0;
  for (const auto& pt : curve.points) {
    if (pt.p_f <= p_f) best = std::max(best, pt.p_d);
  }
  return best;
}

CsvTable curve_table(const DetectionCurve& curve) {
  CsvTable t;
  t.add_meta("receiver", curve.receiver);
  if (!curve.parameters.empty()) t.add_meta("parameters", curve.parameters);
  t.columns = {"threshold", "P_F", "P_D"};
  for (const auto& pt : curve.points) t.add_row({pt.threshold, pt.p_f, pt.p_d});
  return t;
}

}  // namespace qicd
