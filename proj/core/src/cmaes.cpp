#include "qsynth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

// Standard (mu/mu_w, lambda) CMA-ES with cumulative step-size adaptation and
// rank-one plus rank-mu covariance updates. Population and learning-rate
// constants follow the usual defaults; the covariance eigendecomposition is a
// cyclic Jacobi sweep, plenty at the dimensions seen here (< 100).

namespace qsynth {

namespace {

constexpr double kPi = std::numbers::pi;

// Jacobi eigendecomposition of symmetric a (n x n, row-major).
// On return eigvecs columns hold eigenvectors: a = V diag(eigvals) V^T.
void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& eigvals,
                  std::vector<double>& eigvecs) {
  eigvecs.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eigvecs[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = eigvecs[k * n + p], vkq = eigvecs[k * n + q];
          eigvecs[k * n + p] = c * vkp - s * vkq;
          eigvecs[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eigvals.resize(n);
  for (int i = 0; i < n; ++i) eigvals[i] = a[i * n + i];
}

}  // namespace

OptimizeOutcome minimize_cmaes(const ObjectiveSpec& spec,
                               const std::vector<double>* seed,
                               std::uint64_t rng_seed,
                               const OptimizerOptions& options) {
  const int n = spec.dimension;
  if (n < 1) throw std::invalid_argument("minimize: dimension must be >= 1");
  if (spec.budget < 1) throw std::invalid_argument("minimize: budget must be >= 1");
  if (!spec.evaluate) throw std::invalid_argument("minimize: missing objective");
  if (seed && static_cast<int>(seed->size()) != n) {
    throw std::invalid_argument("minimize: seed length mismatch");
  }

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::normal_distribution<double> gauss(0.0, 1.0);

  OptimizeOutcome out;
  out.best_value = std::numeric_limits<double>::infinity();
  long evals = 0;
  bool nan_abort = false;
  bool step_exhausted = false;

  std::vector<double> mean(n);
  if (seed) {
    mean = *seed;
  } else {
    for (double& v : mean) v = angle(rng);
  }

  auto eval = [&](const std::vector<double>& x, double& f) -> bool {
    if (evals >= spec.budget) return false;
    f = spec.evaluate(x);
    ++evals;
    if (std::isnan(f)) {
      nan_abort = true;
      return false;
    }
    if (f < out.best_value) {
      out.best_value = f;
      out.best_point = x;
    }
    return true;
  };

  {
    double f0;
    if (!eval(mean, f0) || out.best_value < spec.target_value) {
      out.evaluations_used = evals;
      out.nan_aborts = nan_abort ? 1 : 0;
      out.converged = !nan_abort && out.best_value < spec.target_value;
      return out;
    }
  }

  const int lambda = 4 + static_cast<int>(3.0 * std::log(n));
  const int mu = lambda / 2;
  std::vector<double> w(mu);
  for (int i = 0; i < mu; ++i) w[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= wsum;
  const double mueff =
      1.0 / std::inner_product(w.begin(), w.end(), w.begin(), 0.0);

  const double cs = (mueff + 2.0) / (n + mueff + 5.0);
  const double ds =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (n + 1.0)) - 1.0) + cs;
  const double cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
  const double c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mueff);
  const double cmu = std::min(
      1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((n + 2.0) * (n + 2.0) + mueff));
  const double chi_n =
      std::sqrt(1.0 * n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  double sigma = options.sigma0;
  std::vector<double> C(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) C[i * n + i] = 1.0;
  std::vector<double> ps(n, 0.0), pc(n, 0.0);
  std::vector<double> D(n, 1.0), Bv;
  jacobi_eigen(C, n, D, Bv);
  for (double& d : D) d = std::sqrt(std::max(d, 1e-20));
  const int eigen_every =
      std::max(1, static_cast<int>(1.0 / ((c1 + cmu) * n * 10.0)));

  std::vector<std::vector<double>> zs(lambda, std::vector<double>(n));
  std::vector<std::vector<double>> ys(lambda, std::vector<double>(n));
  std::vector<std::vector<double>> xs(lambda, std::vector<double>(n));
  std::vector<double> fs(lambda);
  std::vector<int> order(lambda);
  std::vector<double> yw(n), zw(n), bz(n), tmp(n);

  bool aborted = false;
  for (long gen = 0; !aborted; ++gen) {
    if (gen % eigen_every == 0 && gen > 0) {
      jacobi_eigen(C, n, D, Bv);
      for (double& d : D) d = std::sqrt(std::max(d, 1e-20));
    }
    for (int k = 0; k < lambda && !aborted; ++k) {
      for (int i = 0; i < n; ++i) zs[k][i] = gauss(rng);
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += Bv[i * n + j] * D[j] * zs[k][j];
        ys[k][i] = acc;
        xs[k][i] = mean[i] + sigma * acc;
      }
      if (!eval(xs[k], fs[k])) aborted = true;
    }
    if (aborted || out.best_value < spec.target_value) break;

    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });

    std::fill(yw.begin(), yw.end(), 0.0);
    std::fill(zw.begin(), zw.end(), 0.0);
    for (int i = 0; i < mu; ++i) {
      const int k = order[i];
      for (int j = 0; j < n; ++j) {
        yw[j] += w[i] * ys[k][j];
        zw[j] += w[i] * zs[k][j];
      }
    }
    for (int i = 0; i < n; ++i) mean[i] += sigma * yw[i];

    // ps update uses C^{-1/2} yw = B zw.
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += Bv[i * n + j] * zw[j];
      bz[i] = acc;
    }
    const double csc = std::sqrt(cs * (2.0 - cs) * mueff);
    double ps_norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      ps[i] = (1.0 - cs) * ps[i] + csc * bz[i];
      ps_norm2 += ps[i] * ps[i];
    }
    const double ps_norm = std::sqrt(ps_norm2);
    const double expo = 1.0 - std::pow(1.0 - cs, 2.0 * (gen + 1));
    const bool hs = ps_norm / std::sqrt(expo) / chi_n < 1.4 + 2.0 / (n + 1.0);
    const double ccc = std::sqrt(cc * (2.0 - cc) * mueff);
    for (int i = 0; i < n; ++i) {
      pc[i] = (1.0 - cc) * pc[i] + (hs ? ccc * yw[i] : 0.0);
    }

    const double c1a = c1 * (1.0 - (hs ? 0.0 : 1.0) * cc * (2.0 - cc));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double rank_mu = 0.0;
        for (int k = 0; k < mu; ++k) {
          rank_mu += w[k] * ys[order[k]][i] * ys[order[k]][j];
        }
        C[i * n + j] = (1.0 - c1a - cmu) * C[i * n + j] +
                       c1 * pc[i] * pc[j] + cmu * rank_mu;
      }
    }
    sigma *= std::exp((cs / ds) * (ps_norm / chi_n - 1.0));

    const double dmax = *std::max_element(D.begin(), D.end());
    if (sigma * dmax < 1e-12) {
      step_exhausted = true;
      break;
    }
    if (sigma > 1e8 || !std::isfinite(sigma)) break;
  }

  out.evaluations_used = evals;
  out.nan_aborts = nan_abort ? 1 : 0;
  out.converged =
      !nan_abort && (out.best_value < spec.target_value || step_exhausted);
  return out;
}

}  // namespace qsynth
