#include "qsynth/verify.hpp"

#include "qsynth/gates.hpp"
#include "qsynth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace qsynth {

StateVector random_state(std::size_t dim, std::mt19937_64& rng) {
  if (dim == 0) throw std::invalid_argument("random_state: dim must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  StateVector psi(dim);
  double norm2 = 0.0;
  for (cplx& a : psi) {
    a = cplx(gauss(rng), gauss(rng));
    norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (cplx& a : psi) a *= inv;
  return psi;
}

std::vector<double> measurement_distribution(const CMatrix& u,
                                             const StateVector& psi) {
  if (u.cols() != psi.size()) {
    throw std::invalid_argument(
        "measurement_distribution: state dimension mismatch");
  }
  std::vector<double> prob(u.rows(), 0.0);
  for (std::size_t r = 0; r < u.rows(); ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < u.cols(); ++c) acc += u(r, c) * psi[c];
    prob[r] = std::norm(acc);
  }
  return prob;
}

double kl_divergence(const std::vector<double>& p,
                     const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: length mismatch");
  }
  constexpr double kSmooth = 1e-30;
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i] + kSmooth;
    const double qi = q[i] + kSmooth;
    kl += pi * std::log(pi / qi);
  }
  return std::max(kl, 0.0);
}

Unitary haar_random_unitary(int dim, std::uint64_t rng_seed) {
  if (dim < 1) {
    throw std::invalid_argument("haar_random_unitary: dim must be >= 1");
  }
  const std::size_t n = static_cast<std::size_t>(dim);
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      a(r, c) = cplx(gauss(rng), gauss(rng));
    }
  }
  // Column-wise modified Gram-Schmidt; the second orthogonalization pass
  // keeps columns orthogonal to ~1e-15 even for ill-conditioned samples.
  Unitary q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = a(r, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj = 0.0;
        for (std::size_t r = 0; r < n; ++r) proj += std::conj(q(r, k)) * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= proj * q(r, k);
      }
    }
    double norm2 = 0.0;
    for (const cplx& x : v) norm2 += std::norm(x);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t r = 0; r < n; ++r) q(r, j) = v[r] * inv;
  }
  return q;
}

double verify_unitaries(const Unitary& u, const Unitary& target, int trials,
                        std::uint64_t rng_seed) {
  if (trials < 1) {
    throw std::invalid_argument("verify_unitaries: trials must be >= 1");
  }
  if (u.rows() != target.rows() || u.cols() != target.cols() ||
      u.rows() != u.cols()) {
    throw std::invalid_argument("verify_unitaries: dimension mismatch");
  }
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(mix_seed(rng_seed, static_cast<std::uint64_t>(t)));
    const StateVector psi = random_state(u.rows(), rng);
    const std::vector<double> p = measurement_distribution(target, psi);
    const std::vector<double> q = measurement_distribution(u, psi);
    worst = std::max(worst, kl_divergence(p, q));
  }
  return worst;
}

double verify_circuit(const CircuitStructure& structure, ParamView params,
                      const Unitary& target, int trials,
                      std::uint64_t rng_seed) {
  const EvalPlan plan(structure);
  return verify_unitaries(plan.evaluate(params), target, trials, rng_seed);
}

namespace {

// Near-identity unitary on 3 qubits: single-qubit rotations on every wire
// plus entangling CRZ kicks on neighboring pairs, all angles ~ N(0, scale).
// Smooth in scale with distance -> 0 as scale -> 0.
Unitary near_identity_unitary(double scale, std::mt19937_64& rng) {
  constexpr int kQubits = 3;
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto angle = [&]() { return scale * gauss(rng); };
  Unitary v = CMatrix::identity(std::size_t{1} << kQubits);
  for (int w = 0; w < kQubits; ++w) {
    const U3Params p{angle(), angle(), angle()};
    v = matmul(embed_gate(u3_matrix(p), {w}, kQubits), v);
  }
  for (int w = 0; w + 1 < kQubits; ++w) {
    v = matmul(embed_gate(crz_matrix(angle()), {w, w + 1}, kQubits), v);
  }
  return v;
}

}  // namespace

KLReport threshold_study(int num_pairs,
                         const std::vector<double>& perturbation_scales,
                         int states_per_pair, std::uint64_t rng_seed) {
  if (num_pairs < 1) {
    throw std::invalid_argument("threshold_study: num_pairs must be >= 1");
  }
  if (states_per_pair < 1) {
    throw std::invalid_argument(
        "threshold_study: states_per_pair must be >= 1");
  }
  for (double s : perturbation_scales) {
    if (!(s > 0.0)) {
      throw std::invalid_argument("threshold_study: scales must be positive");
    }
  }
  KLReport report;
  std::uint64_t task = 0;
  for (double scale : perturbation_scales) {
    for (int p = 0; p < num_pairs; ++p, ++task) {
      const std::uint64_t pair_seed = mix_seed(rng_seed, task);
      const Unitary u = haar_random_unitary(8, mix_seed(pair_seed, 1));
      std::mt19937_64 rng(mix_seed(pair_seed, 2));
      const Unitary perturbed = matmul(u, near_identity_unitary(scale, rng));
      const double distance = hs_distance(perturbed, u);
      const double worst = verify_unitaries(perturbed, u, states_per_pair,
                                            mix_seed(pair_seed, 3));
      report.pairs.push_back({distance, worst});
      report.samples += states_per_pair;
      report.max_kl = std::max(report.max_kl, worst);
      report.max_distance = std::max(report.max_distance, distance);
    }
  }
  return report;
}

double spearman_correlation(const std::vector<double>& x,
                            const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) {
    throw std::invalid_argument(
        "spearman_correlation: need two equal-length series of >= 2");
  }
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (i + j) + 1.0;  // average rank for the tie run
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("spearman_correlation: constant series");
  }
  return sxy / std::sqrt(sxx * syy);
}

void write_kl_report(std::ostream& out, const KLReport& report) {
  out << "distance,worst_kl\n";
  for (const KLPoint& p : report.pairs) {
    out << format_double(p.distance) << ',' << format_double(p.worst_kl)
        << '\n';
  }
}

}  // namespace qsynth
