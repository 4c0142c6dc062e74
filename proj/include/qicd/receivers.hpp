#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qicd/conversion.hpp"
#include "qicd/scenario.hpp"

namespace qicd {

enum class ReceiverTag { Kennedy, Pnrd, PnrdOptimal, Homodyne, HomodyneNonideal, Pcr };
enum class Method { Exact, Asymptotic };

std::string_view to_string(ReceiverTag t);
std::string_view to_string(Method m);

struct ReceiverError {
  double p_error;
  ReceiverTag tag;
  std::optional<int> threshold;
  Method method = Method::Exact;
  bool truncated = false;  // optimal threshold hit n_max
};

struct PcrStatistics {
  double mu0;
  double mu1;
  double sigma0_sq;
  double sigma1_sq;
};

/// Copy count above which photon statistics under H1 use the large-M form.
inline constexpr std::int64_t kDefaultMSwitch = 10000;

/// Geometric photon-number pmf of a thermal state with mean N.
double thermal_pmf(double n_mean, int n);

/// Idler photon-number pmf under H1 averaged over the displacement energy.
/// Exact: finite hypergeometric sum in log space. Asymptotic: displaced thermal
/// pmf at the mean energy x = 2 M xi.
double averaged_pmf(const ConvertedEnsemble& e, int n, Method method);

/// averaged_pmf for n = 0 .. count-1.
std::vector<double> averaged_pmf_table(const ConvertedEnsemble& e, int count, Method method);

Method method_for(const ConvertedEnsemble& e, std::int64_t m_switch = kDefaultMSwitch);

ReceiverError kennedy_error(const ConvertedEnsemble& e);

/// Symmetric error of the threshold test "declare H1 iff n >= n_D".
ReceiverError pnrd_error(const ConvertedEnsemble& e, int n_d, Method method);
ReceiverError pnrd_error(const ConvertedEnsemble& e, int n_d);

/// Smallest n with P_F(n) < 1e-15, capped at 1e4.
int default_n_max(double n_i_prime);

/// Minimizes pnrd_error over n_D in [1, n_max]; ties go to the smallest n_D.
ReceiverError pnrd_optimal(const ConvertedEnsemble& e, std::optional<int> n_max = std::nullopt);

/// Coherent-state homodyne benchmark; M = 0 allowed and gives 1/2.
double homodyne_error(double kappa, double n_s, double n_b, double copies);
/// With `nonideal`, (kappa, N_B) are replaced by the folded channel.
ReceiverError homodyne_error(const Scenario& s, bool nonideal);

/// Smallest M with the ideal homodyne error <= target.
std::int64_t copies_for_homodyne_error(const Scenario& s, double target);

PcrStatistics pcr_stats(const Scenario& s);
/// Per-copy rate R = (mu1 - mu0)^2 / (4 (sigma0^2 + sigma1^2)).
double pcr_rate(const PcrStatistics& st);
ReceiverError pcr_error(const Scenario& s);

}  // namespace qicd
