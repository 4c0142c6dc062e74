#include "qicd/mathfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qicd/error.hpp"

namespace qicd::mathfn {

namespace {

constexpr double kRescaleAbove = 1e200;
constexpr double kTwoOverSqrtPi = 1.1283791670955126;

// Single-precision erfinv (M. Giles' polynomial); only used as a starting point.
double erfinv_guess(double y) {
  double w = -std::log((1.0 - y) * (1.0 + y));
  double p;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  return p * y;
}

}  // namespace

void CompensatedSum::add(double value) {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

double laguerre(int n, double x) {
  if (n < 0) throw ValidationError("laguerre: negative order");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_laguerre_neg(int n, double y) {
  if (n < 0) throw ValidationError("log_laguerre_neg: negative order");
  if (!(y >= 0.0)) throw ValidationError("log_laguerre_neg: argument must be >= 0");
  if (n == 0) return 0.0;
  double log_scale = 0.0;
  double prev = 1.0;
  double cur = 1.0 + y;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + y) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    if (cur > kRescaleAbove) {
      log_scale += std::log(cur);
      prev /= cur;
      cur = 1.0;
    }
  }
  return log_scale + std::log(cur);
}

double gauss_2f1_terminating(double a, int n, double c, double z) {
  if (n < 0) throw ValidationError("gauss_2f1_terminating: n must be >= 0");
  CompensatedSum sum;
  double term = 1.0;
  sum.add(term);
  for (int k = 0; k < n; ++k) {
    const double denom = (c + k) * (k + 1.0);
    if (denom == 0.0) throw ValidationError("gauss_2f1_terminating: c is a pole of the series");
    term *= (a + k) * (k - n) / denom * z;
    sum.add(term);
  }
  const double v = sum.value();
  if (!std::isfinite(v)) throw NumericalError("gauss_2f1_terminating: overflow, use the log form");
  return v;
}

double log_gauss_2f1_terminating_nonpos(double a, int n, double c, double z) {
  if (n < 0) throw ValidationError("log_gauss_2f1_terminating_nonpos: n must be >= 0");
  if (a < 0.0 || c <= 0.0 || z > 0.0) {
    throw ValidationError("log_gauss_2f1_terminating_nonpos: requires a >= 0, c > 0, z <= 0");
  }
  if (n == 0 || z == 0.0 || a == 0.0) return 0.0;
  const double log_abs_z = std::log(-z);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(n) + 1);
  double log_term = 0.0;
  logs.push_back(log_term);
  for (int k = 0; k < n; ++k) {
    log_term += std::log(a + k) + std::log(static_cast<double>(n - k)) - std::log(c + k) -
                std::log(k + 1.0) + log_abs_z;
    logs.push_back(log_term);
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  CompensatedSum sum;
  for (double l : logs) sum.add(std::exp(l - peak));
  return peak + std::log(sum.value());
}

double kummer_1f1_poslike(int n_plus_1, double z) {
  if (n_plus_1 < 1) throw ValidationError("kummer_1f1_poslike: first parameter must be >= 1");
  if (z >= 0.0) return std::exp(log_kummer_1f1_poslike(n_plus_1, z));
  return std::exp(z) * laguerre(n_plus_1 - 1, -z);
}

double log_kummer_1f1_poslike(int n_plus_1, double z) {
  if (n_plus_1 < 1) throw ValidationError("log_kummer_1f1_poslike: first parameter must be >= 1");
  if (!(z >= 0.0)) throw ValidationError("log_kummer_1f1_poslike: argument must be >= 0");
  return z + log_laguerre_neg(n_plus_1 - 1, z);
}

double erfc(double x) { return std::erfc(x); }

double erfc_inv(double p) {
  if (!(p > 0.0 && p < 2.0)) throw ValidationError("erfc_inv: argument must lie in (0, 2)");
  if (p == 1.0) return 0.0;
  const bool upper = p > 1.0;
  const double q = upper ? 2.0 - p : p;
  const double log_q = std::log(q);

  double x = erfinv_guess(1.0 - q);
  if (q < 1e-30) x = std::sqrt(-log_q);

  // Newton on ln erfc(x) - ln q, which is concave and well scaled in the tail.
  for (int iter = 0; iter < 60; ++iter) {
    const double e = std::erfc(x);
    const double h = std::log(e) - log_q;
    const double dh = -kTwoOverSqrtPi * std::exp(-x * x) / e;
    const double step = h / dh;
    x -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      break;
    }
  }
  return upper ? -x : x;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw ValidationError("log_gamma: argument must be > 0");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double pow1p(double z, double p) { return std::exp(p * std::log1p(z)); }

double log_binomial(double n, double k) {
  if (k < 0.0 || k > n) throw ValidationError("log_binomial: k outside [0, n]");
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace qicd::mathfn
