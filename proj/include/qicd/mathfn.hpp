#pragma once

#include <string_view>

namespace qicd::mathfn {

/// Documented accuracy of one special function over a validated domain box.
///
/// `order_max` bounds the polynomial order for families indexed by an integer
/// (zero when not applicable); `arg_lo`/`arg_hi` bound the real argument.
struct AccuracySpec {
  std::string_view function;
  double abs_tol;
  double rel_tol;
  double arg_lo;
  double arg_hi;
  int order_max;
};

// For x > 0 the Laguerre tolerance is relative to the envelope exp(x/2),
// since L_n has real roots there and pointwise relative error is unbounded.
inline constexpr AccuracySpec kLaguerreAccuracy{"laguerre", 0.0, 1e-10, -50.0, 50.0, 200};
inline constexpr AccuracySpec kLogLaguerreAccuracy{"log_laguerre_neg", 1e-12, 1e-12, 0.0, 1e8, 10000};
// Relative on z <= 0 where the terms do not alternate. For z > 0 the error is
// bounded by 1e-14 times the sum of |terms| (cancellation).
inline constexpr AccuracySpec kHyp2f1Accuracy{"gauss_2f1_terminating", 0.0, 1e-12, -1.0, 0.0, 200};
inline constexpr AccuracySpec kKummerAccuracy{"kummer_1f1_poslike", 0.0, 1e-12, 0.0, 50.0, 200};
inline constexpr AccuracySpec kErfcAccuracy{"erfc", 0.0, 1e-14, -6.0, 26.0, 0};
// Round trip x -> erfc -> erfc_inv; the absolute bound is widened to the
// conditioning limit 4 ulp(erfc(x)) / |erfc'(x)| where that exceeds it.
inline constexpr AccuracySpec kErfcInvAccuracy{"erfc_inv", 1e-12, 0.0, -5.0, 5.0, 0};
inline constexpr AccuracySpec kLogGammaAccuracy{"log_gamma", 0.0, 1e-14, 1e-3, 1e12, 0};

/// Laguerre polynomial L_n(x) by the three-term recurrence.
double laguerre(int n, double x);

/// ln L_n(-y) for y >= 0. Every term of the series is positive there, so the
/// recurrence is run with per-step rescaling and never overflows (n up to 1e4+).
double log_laguerre_neg(int n, double y);

/// Terminating Gauss hypergeometric 2F1(a, -n; c; z) as a finite sum with
/// compensated (Neumaier) summation. Requires n >= 0 and c not a nonpositive integer >= -n.
double gauss_2f1_terminating(double a, int n, double c, double z);

/// ln 2F1(a, -n; c; z) for a >= 0, c > 0, z <= 0. In that regime the summands
/// are all nonnegative and the sum is accumulated in log space.
double log_gauss_2f1_terminating_nonpos(double a, int n, double c, double z);

/// Kummer 1F1(n+1; 1; z) through the identity 1F1(n+1; 1; z) = e^z L_n(-z).
double kummer_1f1_poslike(int n_plus_1, double z);

/// ln 1F1(n+1; 1; z) for z >= 0.
double log_kummer_1f1_poslike(int n_plus_1, double z);

double erfc(double x);

/// Inverse of erfc on (0, 2): rational initial guess, then Newton refinement.
double erfc_inv(double p);

/// ln Gamma(x) for x > 0 (reentrant; does not touch the global signgam).
double log_gamma(double x);

/// (1 + z)^p evaluated as exp(p * log1p(z)).
double pow1p(double z, double p);

/// ln of the binomial coefficient C(n, k).
double log_binomial(double n, double k);

/// ln(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double value);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace qicd::mathfn
