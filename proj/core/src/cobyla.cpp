#include "qsynth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

// Linear-approximation trust-region method in the COBYLA family,
// specialized to the unconstrained case. A simplex of n+1 points carries a
// linear model of the objective; the model gradient comes from the inverse of
// the simplex edge matrix, which is maintained incrementally (rank-one column
// updates when a vertex moves, a reflection transform when the base vertex
// changes) and rebuilt periodically for hygiene. Iterations alternate between
// geometry-improving steps (when the simplex is too stretched or too flat at
// the current radius) and steps of length rho against the model gradient; rho
// halves when two consecutive trust-region steps fail to recover at least 10%
// of the predicted reduction, and the run ends when rho reaches rhoend.

namespace qsynth {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Jordan inverse with partial pivoting. Returns false when singular.
bool invert_matrix(std::vector<double> a, int n, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) out[i * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (std::abs(a[piv * n + col]) < 1e-14) return false;
    if (piv != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(a[piv * n + k], a[col * n + k]);
        std::swap(out[piv * n + k], out[col * n + k]);
      }
    }
    const double inv = 1.0 / a[col * n + col];
    for (int k = 0; k < n; ++k) {
      a[col * n + k] *= inv;
      out[col * n + k] *= inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double m = a[r * n + col];
      if (m == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        a[r * n + k] -= m * a[col * n + k];
        out[r * n + k] -= m * out[col * n + k];
      }
    }
  }
  return true;
}

struct Evaluator {
  explicit Evaluator(const ObjectiveSpec& s) : spec(s) {}

  const ObjectiveSpec& spec;
  long evals = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  bool nan = false;

  bool budget_left() const { return evals < spec.budget; }
  bool target_reached() const { return best < spec.target_value; }

  // False when the budget is spent or the objective came back NaN.
  bool operator()(const std::vector<double>& x, double& f) {
    if (!budget_left()) return false;
    f = spec.evaluate(x);
    ++evals;
    if (std::isnan(f)) {
      nan = true;
      return false;
    }
    if (f < best) {
      best = f;
      best_x = x;
    }
    return true;
  }
};

}  // namespace

OptimizeOutcome minimize_cobyla(const ObjectiveSpec& spec,
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

  Evaluator ev(spec);
  auto finish = [&](bool ladder_done) {
    OptimizeOutcome out;
    out.best_value = ev.best;
    out.best_point = ev.best_x;
    out.evaluations_used = ev.evals;
    out.nan_aborts = ev.nan ? 1 : 0;
    out.converged = !ev.nan && (ev.target_reached() || ladder_done);
    return out;
  };

  std::vector<double> x0(n);
  if (seed) {
    x0 = *seed;
  } else {
    for (double& v : x0) v = angle(rng);
  }
  double f0;
  if (!ev(x0, f0)) return finish(false);
  if (ev.target_reached()) return finish(false);

  double rho = options.rhobeg;
  const double rhoend = options.rhoend;

  // verts[j+1] - verts[0] is column j of E; B = E^{-1}.
  std::vector<std::vector<double>> verts(n + 1, x0);
  std::vector<double> fv(n + 1, f0);
  std::vector<double> E(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> B(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    verts[j + 1][j] += rho;
    if (!ev(verts[j + 1], fv[j + 1])) return finish(false);
    E[j * n + j] = rho;
    B[j * n + j] = 1.0 / rho;
  }
  if (ev.target_reached()) return finish(false);

  // Move the base to vertex j (column jc = j-1). The edge matrix transforms
  // by the reflection that negates column jc and subtracts it from the rest;
  // its own inverse applies to B as: row jc of B becomes minus the sum of all
  // rows of B.
  auto recenter = [&](int j) {
    const int jc = j - 1;
    std::vector<double> colsum(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) colsum[k] += B[i * n + k];
    }
    for (int k = 0; k < n; ++k) B[jc * n + k] = -colsum[k];
    for (int i = 0; i < n; ++i) {
      const double ej = E[i * n + jc];
      for (int k = 0; k < n; ++k) E[i * n + k] -= ej;
      E[i * n + jc] = -ej;
    }
    std::swap(verts[0], verts[j]);
    std::swap(fv[0], fv[j]);
  };

  {
    int jbest = 0;
    for (int j = 1; j <= n; ++j) {
      if (fv[j] < fv[jbest]) jbest = j;
    }
    if (jbest != 0) recenter(jbest);
  }

  // Rebuild E from the vertices and invert it afresh. When E is singular the
  // simplex is re-spanned around the base along the axes.
  auto refresh = [&]() -> bool {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) E[i * n + j] = verts[j + 1][i] - verts[0][i];
    }
    if (invert_matrix(E, n, B)) return true;
    std::fill(E.begin(), E.end(), 0.0);
    std::fill(B.begin(), B.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      verts[j + 1] = verts[0];
      verts[j + 1][j] += rho;
      if (!ev(verts[j + 1], fv[j + 1])) return false;
      E[j * n + j] = rho;
      B[j * n + j] = 1.0 / rho;
    }
    int jbest = 0;
    for (int j = 1; j <= n; ++j) {
      if (fv[j] < fv[jbest]) jbest = j;
    }
    if (jbest != 0) recenter(jbest);
    return true;
  };

  // Replace vertex jc+1 by xnew: rank-one column update on E, Sherman-
  // Morrison on B. Falls back to a full refresh when the update is unstable.
  auto replace_vertex = [&](int jc, const std::vector<double>& xnew,
                            double fnew) -> bool {
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = xnew[i] - verts[0][i] - E[i * n + jc];
    std::vector<double> bd(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += B[i * n + k] * d[k];
      bd[i] = acc;
    }
    const double denom = 1.0 + bd[jc];
    verts[jc + 1] = xnew;
    fv[jc + 1] = fnew;
    for (int i = 0; i < n; ++i) E[i * n + jc] = xnew[i] - verts[0][i];
    if (std::abs(denom) < 1e-8) return refresh();
    std::vector<double> rowjc(B.begin() + jc * n, B.begin() + (jc + 1) * n);
    for (int i = 0; i < n; ++i) {
      const double s = bd[i] / denom;
      if (s == 0.0) continue;
      for (int k = 0; k < n; ++k) B[i * n + k] -= s * rowjc[k];
    }
    return true;
  };

  std::vector<double> g(n), veta(n), vsig_inv(n), xnew(n);
  int fails = 0;
  long iter = 0;
  bool ladder_done = false;

  while (ev.budget_left() && !ev.target_reached() && !ev.nan) {
    ++iter;
    if (iter % 120 == 0 && !refresh()) break;

    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += B[k * n + i] * (fv[k + 1] - fv[0]);
      g[i] = acc;
    }
    for (int j = 0; j < n; ++j) {
      double e2 = 0.0, b2 = 0.0;
      for (int i = 0; i < n; ++i) {
        e2 += E[i * n + j] * E[i * n + j];
        b2 += B[j * n + i] * B[j * n + i];
      }
      veta[j] = std::sqrt(e2);
      vsig_inv[j] = std::sqrt(b2);
    }
    int jlong = 0, jflat = 0;
    for (int j = 1; j < n; ++j) {
      if (veta[j] > veta[jlong]) jlong = j;
      if (vsig_inv[j] > vsig_inv[jflat]) jflat = j;
    }
    const bool too_long = veta[jlong] > 2.1 * rho;
    const bool too_flat = vsig_inv[jflat] * 0.25 * rho > 1.0;

    if (too_long || too_flat) {
      const int jbad = too_long ? jlong : jflat;
      const double norm = vsig_inv[jbad];
      if (norm < 1e-300) {
        if (!refresh()) break;
        continue;
      }
      double gdot = 0.0;
      for (int i = 0; i < n; ++i) gdot += g[i] * B[jbad * n + i];
      const double sign = gdot > 0.0 ? -1.0 : 1.0;
      const double scale = sign * 0.5 * rho / norm;
      for (int i = 0; i < n; ++i) xnew[i] = verts[0][i] + scale * B[jbad * n + i];
      double fnew;
      if (!ev(xnew, fnew)) break;
      if (!replace_vertex(jbad, xnew, fnew)) break;
      if (fnew < fv[0]) recenter(jbad + 1);
      continue;
    }

    double gn = 0.0;
    for (int i = 0; i < n; ++i) gn += g[i] * g[i];
    gn = std::sqrt(gn);
    if (gn < 1e-300) {
      if (rho <= rhoend * 1.0000001) {
        ladder_done = true;
        break;
      }
      rho = std::max(0.5 * rho, rhoend);
      continue;
    }

    const double step = rho / gn;
    for (int i = 0; i < n; ++i) xnew[i] = verts[0][i] - step * g[i];
    double fnew;
    if (!ev(xnew, fnew)) break;

    // Drop the vertex with the largest coefficient of the step in the edge
    // basis; that choice keeps the simplex volume from collapsing.
    int jdrop = 0;
    double wmax = -1.0;
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += B[j * n + k] * (xnew[k] - verts[0][k]);
      if (std::abs(acc) > wmax) {
        wmax = std::abs(acc);
        jdrop = j;
      }
    }
    if (!replace_vertex(jdrop, xnew, fnew)) break;
    const bool improved = fnew < fv[0] - 0.1 * rho * gn;
    if (fnew < fv[0]) recenter(jdrop + 1);
    if (improved) {
      fails = 0;
    } else if (++fails >= 2) {
      fails = 0;
      if (rho <= rhoend * 1.0000001) {
        ladder_done = true;
        break;
      }
      rho = std::max(0.5 * rho, rhoend);
    }
  }

  return finish(ladder_done);
}

}  // namespace qsynth
