#include "qicd/receivers.hpp"

#include <cmath>
#include <limits>

#include "qicd/error.hpp"
#include "qicd/mathfn.hpp"

namespace qicd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_pmf_exact(const ConvertedEnsemble& e, int n) {
  const double m = static_cast<double>(e.copies);
  const double ep = e.e_prime;
  const double two_xi = 2.0 * e.xi;
  if (ep == 0.0) {
    // Negative binomial: the displaced-vacuum limit averaged over the gamma law.
    if (two_xi == 0.0) return n == 0 ? 0.0 : kNegInf;
    return mathfn::log_binomial(m + n - 1.0, n) + n * std::log(two_xi) - (m + n) * std::log1p(two_xi);
  }
  const double pre = -m * std::log1p(two_xi / (ep + 1.0)) - (n + 1.0) * std::log1p(ep) + n * std::log(ep);
  if (two_xi == 0.0 || n == 0) return pre;
  const double z = -two_xi / (ep * (ep + 1.0 + two_xi));
  return pre + mathfn::log_gauss_2f1_terminating_nonpos(m, n, 1.0, z);
}

double log_pmf_asymptotic(const ConvertedEnsemble& e, int n) {
  const double x = 2.0 * static_cast<double>(e.copies) * e.xi;
  const double ep = e.e_prime;
  if (ep == 0.0) {
    if (x == 0.0) return n == 0 ? 0.0 : kNegInf;
    return n * std::log(x) - x - mathfn::log_gamma(n + 1.0);
  }
  double out = -x / (ep + 1.0) - std::log1p(ep) + n * (std::log(ep) - std::log1p(ep));
  if (x > 0.0 && n > 0) out += mathfn::log_laguerre_neg(n, x / (ep * (ep + 1.0)));
  return out;
}

double false_alarm(double n_mean, int n_d) {
  if (n_d <= 0) return 1.0;
  return std::pow(n_mean / (n_mean + 1.0), n_d);
}

// Vacuum probability under H1 in closed form; shares the power term with the Kennedy formula.
double vacuum_term_exact(const ConvertedEnsemble& e) {
  const double ep1 = e.e_prime + 1.0;
  const double t = std::exp((1.0 - static_cast<double>(e.copies)) * std::log1p(2.0 * e.xi / ep1));
  return t / (ep1 + 2.0 * e.xi);
}

}  // namespace

std::string_view to_string(ReceiverTag t) {
  switch (t) {
    case ReceiverTag::Kennedy: return "kennedy";
    case ReceiverTag::Pnrd: return "pnrd";
    case ReceiverTag::PnrdOptimal: return "pnrd_optimal";
    case ReceiverTag::Homodyne: return "homodyne";
    case ReceiverTag::HomodyneNonideal: return "homodyne_nonideal";
    case ReceiverTag::Pcr: return "pcr";
  }
  return "unknown";
}

std::string_view to_string(Method m) { return m == Method::Exact ? "exact" : "asymptotic"; }

double thermal_pmf(double n_mean, int n) {
  if (n < 0) return 0.0;
  if (n_mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * (std::log(n_mean) - std::log1p(n_mean)) - std::log1p(n_mean));
}

double averaged_pmf(const ConvertedEnsemble& e, int n, Method method) {
  if (n < 0) return 0.0;
  return std::exp(method == Method::Exact ? log_pmf_exact(e, n) : log_pmf_asymptotic(e, n));
}

std::vector<double> averaged_pmf_table(const ConvertedEnsemble& e, int count, Method method) {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  for (int n = 0; n < count; ++n) out[n] = averaged_pmf(e, n, method);
  return out;
}

Method method_for(const ConvertedEnsemble& e, std::int64_t m_switch) {
  return e.copies <= m_switch ? Method::Exact : Method::Asymptotic;
}

ReceiverError kennedy_error(const ConvertedEnsemble& e) {
  const double ep1 = e.e_prime + 1.0;
  if (!(ep1 > 0.0)) throw PhysicalityError("kennedy_error: N'_I + 1 - 2 xi must be > 0");
  const double t = std::exp((1.0 - static_cast<double>(e.copies)) * std::log1p(2.0 * e.xi / ep1));
  const double n = e.n_i_prime;
  return {(t + n) / (2.0 * (n + 1.0)), ReceiverTag::Kennedy, 1, Method::Exact, false};
}

ReceiverError pnrd_error(const ConvertedEnsemble& e, int n_d, Method method) {
  if (n_d < 1) throw ValidationError("pnrd_error: n_D must be >= 1");
  // P_E = (P_F + 1 - P_D) / 2 with 1 - P_D the H1 mass below threshold.
  mathfn::CompensatedSum miss;
  miss.add(vacuum_term_exact(e));
  for (int n = 1; n < n_d; ++n) miss.add(averaged_pmf(e, n, method));
  const double p = 0.5 * (false_alarm(e.n_i_prime, n_d) + miss.value());
  return {p, ReceiverTag::Pnrd, n_d, method, false};
}

ReceiverError pnrd_error(const ConvertedEnsemble& e, int n_d) { return pnrd_error(e, n_d, method_for(e)); }

int default_n_max(double n_i_prime) {
  constexpr double kTail = 1e-15;
  constexpr int kCap = 10000;
  if (n_i_prime <= 0.0) return 1;
  const double log_q = std::log(n_i_prime) - std::log1p(n_i_prime);
  double guess = std::ceil(std::log(kTail) / log_q);
  if (!(guess < kCap)) return kCap;
  int n = std::max(1, static_cast<int>(guess));
  while (n < kCap && std::exp(n * log_q) >= kTail) ++n;
  while (n > 1 && std::exp((n - 1) * log_q) < kTail) --n;
  return n;
}

ReceiverError pnrd_optimal(const ConvertedEnsemble& e, std::optional<int> n_max) {
  const int top = n_max.value_or(default_n_max(e.n_i_prime));
  if (top < 1) throw ValidationError("pnrd_optimal: n_max must be >= 1");
  const Method method = method_for(e);
  mathfn::CompensatedSum miss;
  miss.add(vacuum_term_exact(e));
  double best = std::numeric_limits<double>::infinity();
  int best_n = 1;
  for (int n_d = 1; n_d <= top; ++n_d) {
    if (n_d > 1) miss.add(averaged_pmf(e, n_d - 1, method));
    const double p = 0.5 * (false_alarm(e.n_i_prime, n_d) + miss.value());
    if (p < best) {
      best = p;
      best_n = n_d;
    }
  }
  return {best, ReceiverTag::PnrdOptimal, best_n, method, best_n == top && top > 1};
}

double homodyne_error(double kappa, double n_s, double n_b, double copies) {
  if (copies < 0.0) throw ValidationError("homodyne_error: M must be >= 0");
  return 0.5 * mathfn::erfc(std::sqrt(kappa * copies * n_s / (2.0 * (2.0 * n_b + 1.0))));
}

ReceiverError homodyne_error(const Scenario& s, bool nonideal) {
  const auto& p = s.params();
  const double m = static_cast<double>(p.copies);
  if (!nonideal) return {homodyne_error(p.kappa, p.n_s, p.n_b, m), ReceiverTag::Homodyne, std::nullopt};
  const auto ch = compose_channel(s);
  return {homodyne_error(ch.kappa_eff, p.n_s, ch.n_b_eff, m), ReceiverTag::HomodyneNonideal, std::nullopt};
}

std::int64_t copies_for_homodyne_error(const Scenario& s, double target) {
  const auto& p = s.params();
  if (!(target > 0.0 && target < 0.5)) throw ValidationError("copies_for_homodyne_error: target must lie in (0, 1/2)");
  if (!(p.kappa * p.n_s > 0.0)) throw ValidationError("copies_for_homodyne_error: kappa * N_S must be > 0");
  const double root = mathfn::erfc_inv(2.0 * target);
  const double m_real = 2.0 * (2.0 * p.n_b + 1.0) * root * root / (p.kappa * p.n_s);
  if (!(m_real < 9e18)) throw ValidationError("copies_for_homodyne_error: required M overflows");
  auto m = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(m_real)));
  while (m > 1 && homodyne_error(p.kappa, p.n_s, p.n_b, static_cast<double>(m - 1)) <= target) --m;
  while (homodyne_error(p.kappa, p.n_s, p.n_b, static_cast<double>(m)) > target) ++m;
  return m;
}

PcrStatistics pcr_stats(const Scenario& s) {
  const auto& p = s.params();
  const auto m1 = effective_moments(s);
  const auto m0 = effective_moments(s.target_absent());
  const double gm1 = p.gain_pcr - 1.0;
  const double mu1 = 2.0 * std::sqrt(p.eta_s * p.eta_i * p.gain * gm1 * p.kappa * p.n_s * (p.n_s + 1.0));
  const double common = m1.n_i + p.gain_pcr * p.n_v_pcr;
  const double sigma0_sq = common + gm1 * (2.0 * m1.n_i + 1.0) * (m0.n_a + 1.0);
  const double sigma1_sq = common + gm1 * (2.0 * m1.n_i + 1.0) * (m1.n_a + 1.0) + mu1 * mu1 / 2.0;
  return {0.0, mu1, sigma0_sq, sigma1_sq};
}

double pcr_rate(const PcrStatistics& st) {
  const double var = st.sigma0_sq + st.sigma1_sq;
  if (!(var > 0.0)) throw NumericalError("pcr_rate: total variance is zero");
  const double dmu = st.mu1 - st.mu0;
  return dmu * dmu / (4.0 * var);
}

ReceiverError pcr_error(const Scenario& s) {
  const double r = pcr_rate(pcr_stats(s));
  return {0.5 * mathfn::erfc(std::sqrt(r * static_cast<double>(s.params().copies))), ReceiverTag::Pcr,
          std::nullopt};
}

}  // namespace qicd
