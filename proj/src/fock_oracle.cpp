#include "qicd/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qicd/error.hpp"
#include "qicd/mathfn.hpp"

namespace qicd {

namespace {

constexpr int kMaxDim = 8192;

// Walks p_0, p_1, ... of a displaced thermal state. The Laguerre factor is carried
// as q^n L_n(-y) by its three-term recurrence, with a separate log scale so that
// neither the exp(-x/(N+1)) prefactor nor large orders under/overflow.
class DisplacedThermalWalk {
 public:
  DisplacedThermalWalk(double x, double n_t) : x_(x), n_t_(n_t) {
    if (!(x >= 0.0) || !(n_t >= 0.0)) throw ValidationError("displaced thermal pmf: x and N_T must be >= 0");
    if (n_t == 0.0) {
      log_scale_ = -x;
      cur_ = 1.0;
    } else {
      q_ = n_t / (n_t + 1.0);
      y_ = x / (n_t * (n_t + 1.0));
      log_scale_ = -x / (n_t + 1.0) - std::log1p(n_t);
      prev_ = 0.0;
      cur_ = 1.0;
    }
  }

  int n() const { return n_; }
  double p() const { return cur_ == 0.0 ? 0.0 : std::exp(log_scale_ + std::log(cur_)); }

  void advance() {
    double next;
    if (n_t_ == 0.0) {
      next = cur_ * x_ / (n_ + 1.0);
    } else {
      next = q_ * ((2.0 * n_ + 1.0 + y_) * cur_ - n_ * q_ * prev_) / (n_ + 1.0);
    }
    prev_ = cur_;
    cur_ = next;
    ++n_;
    if (cur_ > 1e200 || (cur_ > 0.0 && cur_ < 1e-200)) {
      log_scale_ += std::log(cur_);
      prev_ /= cur_;
      cur_ = 1.0;
    }
  }

 private:
  double x_, n_t_;
  double q_ = 0.0, y_ = 0.0;
  double log_scale_ = 0.0;
  double prev_ = 0.0, cur_ = 1.0;
  int n_ = 0;
};

double pmf_at(double x, double n_t, int n) {
  DisplacedThermalWalk walk(x, n_t);
  while (walk.n() < n) walk.advance();
  return walk.p();
}

Eigen::MatrixXcd build_matrix(std::complex<double> delta, double n_t, int dim) {
  // Thermal weights p_k and the displaced number states D|k> by
  // D|k+1> = (a^dagger - conj(delta)) D|k> / sqrt(k+1), which is exact component-wise.
  std::vector<double> weights;
  if (n_t == 0.0) {
    weights.push_back(1.0);
  } else {
    const double q = n_t / (n_t + 1.0);
    double w = 1.0 / (n_t + 1.0);
    double tail = 1.0;
    while (tail > 1e-17 && static_cast<int>(weights.size()) < 4 * kMaxDim) {
      weights.push_back(w);
      tail -= w;
      w *= q;
      if (w < 1e-300) break;
    }
  }
  const int kmax = static_cast<int>(weights.size());
  Eigen::VectorXcd col(dim);
  const double x = std::norm(delta);
  col(0) = std::exp(-x / 2.0);
  for (int n = 1; n < dim; ++n) col(n) = col(n - 1) * delta / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd cols(dim, kmax);
  cols.col(0) = col * std::sqrt(weights[0]);
  const auto dc = std::conj(delta);
  for (int k = 1; k < kmax; ++k) {
    Eigen::VectorXcd next(dim);
    const double inv = 1.0 / std::sqrt(static_cast<double>(k));
    next(0) = -dc * col(0) * inv;
    for (int n = 1; n < dim; ++n) next(n) = (std::sqrt(static_cast<double>(n)) * col(n - 1) - dc * col(n)) * inv;
    col = next;
    cols.col(k) = col * std::sqrt(weights[k]);
  }
  Eigen::MatrixXcd rho = cols * cols.adjoint();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace

std::vector<double> displaced_thermal_pmf(double x, double n_t, int n_max, double tol) {
  if (n_max < 0) throw ValidationError("displaced_thermal_pmf: n_max must be >= 0");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  DisplacedThermalWalk walk(x, n_t);
  mathfn::CompensatedSum total;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) walk.advance();
    out.push_back(walk.p());
    total.add(out.back());
  }
  if (1.0 - total.value() >= tol) {
    throw TruncationError("displaced_thermal_pmf: n_max = " + std::to_string(n_max) + " leaves mass " +
                          std::to_string(1.0 - total.value()));
  }
  return out;
}

int auto_dimension(double x, double n_t) {
  const double mean = x + n_t;
  const double var = n_t * n_t + n_t + x * (2.0 * n_t + 1.0);
  return static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(var) + 20.0));
}

FockDensityMatrix build_density_matrix(std::complex<double> delta, double n_t, std::optional<int> dim, double tol) {
  if (!(n_t >= 0.0)) throw ValidationError("build_density_matrix: N_T must be >= 0");
  if (std::norm(delta) > 1400.0) throw ValidationError("build_density_matrix: |delta|^2 too large");
  if (dim) {
    if (*dim < 1) throw ValidationError("build_density_matrix: dim must be >= 1");
    FockDensityMatrix out{*dim, build_matrix(delta, n_t, *dim), 0.0};
    out.trace_deficit = 1.0 - out.matrix.trace().real();
    if (out.trace_deficit >= tol) {
      throw TruncationError("build_density_matrix: trace deficit " + std::to_string(out.trace_deficit) +
                            " at dim " + std::to_string(*dim) + "; increase the dimension");
    }
    return out;
  }
  for (int d = auto_dimension(std::norm(delta), n_t); d <= kMaxDim; d *= 2) {
    FockDensityMatrix out{d, build_matrix(delta, n_t, d), 0.0};
    out.trace_deficit = 1.0 - out.matrix.trace().real();
    if (out.trace_deficit < tol) return out;
  }
  throw TruncationError("build_density_matrix: no dimension up to " + std::to_string(kMaxDim) + " meets tolerance");
}

double helstrom(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1) {
  if (rho0.dim != rho1.dim) throw ValidationError("helstrom: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0.matrix - rho1.matrix, Eigen::EigenvaluesOnly);
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  return std::clamp(0.5 * (1.0 - 0.5 * trace_norm), 0.0, 0.5);
}

double single_shot_qcb(const FockDensityMatrix& rho0, const FockDensityMatrix& rho1) {
  if (rho0.dim != rho1.dim) throw ValidationError("single_shot_qcb: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e0(rho0.matrix), e1(rho1.matrix);
  const Eigen::MatrixXd overlap = (e0.eigenvectors().adjoint() * e1.eigenvectors()).cwiseAbs2();
  const Eigen::VectorXd l0 = e0.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd l1 = e1.eigenvalues().cwiseMax(0.0);
  auto pw = [](const Eigen::VectorXd& l, double s) {
    Eigen::VectorXd out(l.size());
    for (Eigen::Index i = 0; i < l.size(); ++i) out(i) = l(i) > 0.0 ? std::exp(s * std::log(l(i))) : 0.0;
    return out;
  };
  auto trace = [&](double s) { return pw(l0, s).dot(overlap * pw(l1, 1.0 - s)); };
  // s -> Tr rho0^s rho1^(1-s) is convex on [0, 1].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = trace(x1), f2 = trace(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
    if (f1 <= f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = trace(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = trace(x2);
    }
  }
  const double best = std::min({f1, f2, trace(0.0), trace(1.0)});
  return 0.5 * std::min(best, 1.0);
}

double averaged_pmf_numeric(const ConvertedEnsemble& e, int n) {
  if (n < 0) return 0.0;
  if (e.xi == 0.0) return pmf_at(0.0, e.e_prime, n);
  const double shape = static_cast<double>(e.copies);
  const double scale = 2.0 * e.xi;
  auto f = [&](double u) {
    const double p = pmf_at(scale * u, e.e_prime, n);
    if (p == 0.0) return 0.0;
    return std::exp(gamma_log_pdf_unit(u, shape) + std::log(p));
  };
  const double sd = std::sqrt(shape);
  const double lo = std::max(0.0, shape - 40.0 * sd);
  const double hi = shape + 40.0 * sd + 40.0;
  // Split at the mode so the adaptive rule sees the peak on a panel edge.
  const double mode = std::clamp(shape - 1.0, lo, hi);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  if (mode > lo) total += GK::integrate(f, lo, mode, 20, 1e-14);
  total += GK::integrate(f, mode, hi, 20, 1e-14);
  return total;
}

void gamma_quadrature(std::int64_t copies, int nodes, std::vector<double>& u, std::vector<double>& w) {
  if (copies < 1 || nodes < 1) throw ValidationError("gamma_quadrature: M and node count must be >= 1");
  const double alpha = static_cast<double>(copies) - 1.0;
  Eigen::VectorXd diag(nodes), sub(std::max(nodes - 1, 1));
  for (int k = 0; k < nodes; ++k) diag(k) = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < nodes; ++k) sub(k - 1) = std::sqrt(k * (k + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(nodes - 1, 0)), Eigen::ComputeEigenvectors);
  u.assign(nodes, 0.0);
  w.assign(nodes, 0.0);
  double total = 0.0;
  for (int k = 0; k < nodes; ++k) {
    u[k] = es.eigenvalues()(k);
    w[k] = es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
    total += w[k];
  }
  for (auto& wk : w) wk /= total;
}

QuadratureResult numeric_p_cd(const ConvertedEnsemble& e) {
  if (e.xi == 0.0) return {0.5, 0, 0.0};
  std::vector<double> u, w;
  double previous = 0.0;
  for (int nodes = 16; nodes <= 512; nodes *= 2) {
    gamma_quadrature(e.copies, nodes, u, w);
    const double x_max = 2.0 * e.xi * u.back();
    const int dim = build_density_matrix(std::sqrt(x_max), e.e_prime).dim;
    const auto rho0 = build_density_matrix(0.0, e.n_i_prime, dim);
    mathfn::CompensatedSum acc;
    for (int k = 0; k < nodes; ++k) {
      if (w[k] < 1e-300) continue;
      const auto rho1 = build_density_matrix(std::sqrt(2.0 * e.xi * u[k]), e.e_prime, dim);
      acc.add(w[k] * helstrom(rho0, rho1));
    }
    const double value = acc.value();
    if (nodes > 16) {
      const double rel = std::abs(value - previous) / std::abs(value);
      if (rel <= 1e-4) return {value, nodes, rel};
    }
    previous = value;
  }
  throw NumericalError("numeric_p_cd: quadrature did not converge with 512 nodes");
}

QuadratureResult numeric_p_cd(const Scenario& s) { return numeric_p_cd(xi_of(s)); }

int sample_photon_count(double x, double n_t, Rng& rng) {
  const double target = rng.uniform();
  DisplacedThermalWalk walk(x, n_t);
  double cdf = walk.p();
  const double mean = x + n_t;
  while (cdf <= target) {
    walk.advance();
    const double p = walk.p();
    cdf += p;
    if (walk.n() > mean + 1.0 && p < 1e-300) break;
    if (walk.n() >= 100'000'000) break;
  }
  return walk.n();
}

McEstimate mc_receiver(const ConvertedEnsemble& e, McReceiver receiver, int n_d, std::int64_t trials,
                       std::uint64_t seed, int threads) {
  if (trials < 1000) throw ValidationError("mc_receiver: at least 1000 trials required");
  if (receiver == McReceiver::Kennedy) n_d = 1;
  if (n_d < 1) throw ValidationError("mc_receiver: n_D must be >= 1");
  constexpr std::int64_t kBlock = 10000;
  const std::int64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<std::int64_t> errors(static_cast<std::size_t>(blocks), 0);
  auto run_block = [&](std::int64_t b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const std::int64_t count = std::min(kBlock, trials - b * kBlock);
    std::int64_t err = 0;
    for (std::int64_t t = 0; t < count; ++t) {
      if (rng.uniform() < 0.5) {
        err += sample_photon_count(0.0, e.n_i_prime, rng) >= n_d;
      } else {
        const double x = sample_total_energy(e, rng);
        err += sample_photon_count(x, e.e_prime, rng) < n_d;
      }
    }
    errors[static_cast<std::size_t>(b)] = err;
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));
  if (workers == 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t b = w; b < blocks; b += workers) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::int64_t total = 0;
  for (auto v : errors) total += v;
  const double p = static_cast<double>(total) / static_cast<double>(trials);
  return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials)), trials};
}

McEstimate mc_receiver(const Scenario& s, McReceiver receiver, int n_d, std::int64_t trials, std::uint64_t seed,
                       int threads) {
  return mc_receiver(xi_of(s), receiver, n_d, trials, seed, threads);
}

}  // namespace qicd
