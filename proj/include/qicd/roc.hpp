#pragma once

#include <string>
#include <vector>

#include "qicd/conversion.hpp"
#include "qicd/csv.hpp"
#include "qicd/receivers.hpp"
#include "qicd/scenario.hpp"

namespace qicd {

struct RocPoint {
  double threshold;  // n_D for photon counting, s or eta parameter for analytic curves
  double p_f;
  double p_d;
};

/// Ordered (P_F, P_D) points, P_F nondecreasing along the vector.
struct DetectionCurve {
  std::string receiver;
  std::vector<RocPoint> points;
  std::string parameters;
};

/// False alarm of the count threshold n_D against a thermal idler with N'_I photons.
double cd_pf(double n_i_prime, int n_d);

/// Detection probability of the count threshold n_D under H1. The tail is summed
/// directly once the head mass passes 1/2, stopping when head + tail is within 1e-15 of one.
double cd_pd(const ConvertedEnsemble& e, int n_d, Method method = Method::Exact);

/// Threshold sweep from n_D_max down to 0.
DetectionCurve cd_roc(const ConvertedEnsemble& e, int n_d_max, Method method = Method::Exact);

/// Gaussian approximation of the photon-counting ROC. P_F must lie in (0, 1).
double cd_roc_gaussian(const ConvertedEnsemble& e, double p_f);

/// Equal-variance ROC 0.5 erfc(erfc^-1(2 P_F) - d / sqrt 2). d = 0 returns P_F.
double binormal_roc(double d, double p_f);

double d_pcr(const Scenario& s);
/// Classical coherent-state benchmark; `nonideal` folds the return path into (kappa, N_B).
double d_cs(const Scenario& s, bool nonideal);

double pcr_roc(const Scenario& s, double p_f);
double classical_roc(const Scenario& s, double p_f, bool nonideal);

/// Unequal-variance Gaussian test via the tilted semi-invariant mu(s).
struct VanTrees {
  double sigma0_sq;
  double sigma1_sq;
  double k;  // M (mu0 - mu1)^2

  static VanTrees from(const PcrStatistics& st, std::int64_t copies);
  double mu(double s) const;
  double mu_ddot(double s) const;
  RocPoint point(double s) const;
};

/// P_D of the PCR at false-alarm P_F along the unequal-variance path.
double pcr_roc_van_trees(const Scenario& s, double p_f);

/// Largest P_D over curve points with P_F <= p_f (Neyman-Pearson with integer thresholds).
double np_detection_probability(const DetectionCurve& curve, double p_f);

CsvTable curve_table(const DetectionCurve& curve);

}  // namespace qicd
