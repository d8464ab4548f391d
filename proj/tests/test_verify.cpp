#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsynth/fixtures.hpp"
#include "qsynth/gates.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/search.hpp"
#include "qsynth/structure.hpp"
#include "qsynth/topology.hpp"
#include "qsynth/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

using namespace qsynth;

TEST_CASE("random states are normalized and deterministic per stream") {
  std::mt19937_64 rng(3);
  for (std::size_t dim : {1u, 2u, 8u, 16u}) {
    const StateVector psi = random_state(dim, rng);
    REQUIRE(psi.size() == dim);
    double norm2 = 0.0;
    for (const cplx& a : psi) norm2 += std::norm(a);
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  std::mt19937_64 r1(9), r2(9);
  CHECK(random_state(8, r1) == random_state(8, r2));
  CHECK_THROWS_AS(random_state(0, rng), std::invalid_argument);
}

TEST_CASE("measurement distributions are probability vectors") {
  std::mt19937_64 rng(5);
  const Unitary u = haar_random_unitary(8, 17);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector psi = random_state(8, rng);
    const std::vector<double> p = measurement_distribution(u, psi);
    REQUIRE(p.size() == 8);
    double sum = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Identity on a basis state concentrates all mass on that state.
  StateVector basis(4, cplx(0, 0));
  basis[2] = 1.0;
  const std::vector<double> p =
      measurement_distribution(CMatrix::identity(4), basis);
  CHECK(p[2] == doctest::Approx(1.0));
  CHECK(p[0] + p[1] + p[3] <= 1e-30);
  const StateVector short_state(3);
  CHECK_THROWS_AS(measurement_distribution(CMatrix::identity(4), short_state),
                  std::invalid_argument);
}

TEST_CASE("kl divergence behaves like a divergence") {
  // Note q is not a permutation of p: swapping two entries of a pair gives a
  // symmetric KL, which would defeat the asymmetry check below.
  const std::vector<double> p{0.5, 0.3, 0.2};
  const std::vector<double> q{0.7, 0.2, 0.1};
  CHECK(kl_divergence(p, p) <= 1e-15);
  CHECK(kl_divergence(p, q) > 0.0);
  // Asymmetry is expected.
  CHECK(kl_divergence(p, q) != doctest::Approx(kl_divergence(q, p)));
  // Hand-computed value for a simple pair.
  const std::vector<double> a{0.75, 0.25}, b{0.5, 0.5};
  const double want = 0.75 * std::log(0.75 / 0.5) + 0.25 * std::log(0.25 / 0.5);
  CHECK(kl_divergence(a, b) == doctest::Approx(want).epsilon(1e-12));
  // Smoothing keeps exact zeros finite.
  const double with_zero = kl_divergence({1.0, 0.0}, {0.0, 1.0});
  CHECK(std::isfinite(with_zero));
  CHECK(with_zero > 0.0);
  CHECK_THROWS_AS(kl_divergence({0.5, 0.5}, {1.0}), std::invalid_argument);
}

TEST_CASE("haar samples are unitary across dimensions") {
  for (int dim : {1, 2, 3, 4, 8}) {
    for (std::uint64_t seed = 0; seed < (dim == 8 ? 100u : 10u); ++seed) {
      const Unitary u = haar_random_unitary(dim, seed);
      CAPTURE(dim);
      CAPTURE(seed);
      REQUIRE(u.rows() == static_cast<std::size_t>(dim));
      CHECK(is_unitary(u, 1e-10));
    }
  }
  CHECK_THROWS_AS(haar_random_unitary(0, 1), std::invalid_argument);
}

TEST_CASE("haar sampling is deterministic and seed-sensitive") {
  const Unitary a = haar_random_unitary(8, 123);
  const Unitary b = haar_random_unitary(8, 123);
  CHECK(max_abs_diff(a, b) == 0.0);
  const Unitary c = haar_random_unitary(8, 124);
  CHECK(max_abs_diff(a, c) > 1e-3);
}

TEST_CASE("haar columns stay orthonormal at dim 16") {
  const Unitary u = haar_random_unitary(16, 7);
  for (std::size_t j = 0; j < 16; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      cplx dot = 0.0;
      for (std::size_t r = 0; r < 16; ++r) dot += std::conj(u(r, k)) * u(r, j);
      CHECK(std::abs(dot - (j == k ? cplx(1, 0) : cplx(0, 0))) <= 1e-12);
    }
  }
}

TEST_CASE("verifying a unitary against itself yields zero divergence") {
  const Unitary u = haar_random_unitary(8, 31);
  CHECK(verify_unitaries(u, u, 50, 5) <= 1e-20);
  // Far-apart unitaries are flagged loudly.
  const Unitary v = haar_random_unitary(8, 32);
  CHECK(verify_unitaries(u, v, 50, 5) > 1e-3);
  CHECK_THROWS_AS(verify_unitaries(u, haar_random_unitary(4, 1), 10, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_unitaries(u, u, 0, 5), std::invalid_argument);
}

TEST_CASE("a synthesized circuit passes state-level verification") {
  SearchConfig cfg;
  cfg.parallelism = 1;
  cfg.rng_seed = 19;
  const Unitary target = qft(2);
  const SearchResult r =
      synthesize(target, Topology::line(2), GateSet::cnot(), cfg);
  REQUIRE(r.solution.has_value());
  const double worst = verify_circuit(r.solution->structure,
                                      r.solution->params, target, 1000, 77);
  CHECK(worst <= 1e-8);
}

TEST_CASE("threshold study scales distance and divergence together") {
  const KLReport report =
      threshold_study(6, {1e-4, 1e-2, 0.3}, 40, 2024);
  REQUIRE(report.pairs.size() == 18);
  CHECK(report.samples == 18 * 40);
  CHECK(report.max_distance > 0.0);
  CHECK(report.max_kl > 0.0);
  double prev_block_mean = -1.0;
  for (int block = 0; block < 3; ++block) {
    double mean = 0.0;
    for (int p = 0; p < 6; ++p) {
      const KLPoint& pt = report.pairs[static_cast<std::size_t>(block * 6 + p)];
      CHECK(pt.distance >= 0.0);
      CHECK(pt.worst_kl >= 0.0);
      mean += pt.distance;
    }
    mean /= 6;
    // Larger perturbation scales sit at visibly larger distances.
    CHECK(mean > prev_block_mean);
    prev_block_mean = mean;
  }
  // Tiny perturbations keep both metrics tiny.
  for (int p = 0; p < 6; ++p) {
    CHECK(report.pairs[static_cast<std::size_t>(p)].distance < 1e-3);
    CHECK(report.pairs[static_cast<std::size_t>(p)].worst_kl < 1e-3);
  }
  CHECK_THROWS_AS(threshold_study(0, {0.1}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(threshold_study(5, {0.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(threshold_study(5, {0.1}, 0, 1), std::invalid_argument);
}

TEST_CASE("threshold study is reproducible bit for bit") {
  const KLReport a = threshold_study(3, {1e-3, 0.1}, 15, 99);
  const KLReport b = threshold_study(3, {1e-3, 0.1}, 15, 99);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].distance == b.pairs[i].distance);
    CHECK(a.pairs[i].worst_kl == b.pairs[i].worst_kl);
  }
}

TEST_CASE("distance and divergence rank-correlate across the study") {
  // The protocol behind trusting hs_distance as the acceptance metric:
  // across scales from negligible to strong, distance orders pairs the same
  // way worst-case divergence does.
  const KLReport report =
      threshold_study(40, {1e-6, 1e-4, 1e-2, 0.1, 0.5}, 40, 4242);
  REQUIRE(report.pairs.size() == 200);
  std::vector<double> d, k;
  for (const KLPoint& p : report.pairs) {
    d.push_back(p.distance);
    k.push_back(p.worst_kl);
  }
  CHECK(spearman_correlation(d, k) > 0.9);
}

TEST_CASE("spearman correlation on known orderings") {
  CHECK(spearman_correlation({1, 2, 3, 4}, {10, 20, 30, 40}) ==
        doctest::Approx(1.0));
  CHECK(spearman_correlation({1, 2, 3, 4}, {5, 3, 2, 1}) ==
        doctest::Approx(-1.0));
  // Monotone nonlinear maps preserve the rank correlation exactly.
  std::vector<double> x, y;
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int i = 0; i < 60; ++i) {
    const double v = u(rng);
    x.push_back(v);
    y.push_back(std::exp(v));
  }
  CHECK(spearman_correlation(x, y) == doctest::Approx(1.0));
  // Ties get average ranks; a tie on one side damps but keeps the sign.
  const double tied = spearman_correlation({1, 1, 2, 3}, {1, 2, 3, 4});
  CHECK(tied > 0.9);
  CHECK(tied < 1.0);
  CHECK_THROWS_AS(spearman_correlation({1, 1, 1}, {1, 2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(spearman_correlation({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(spearman_correlation({1}, {1}), std::invalid_argument);
}

TEST_CASE("kl report serialization matches the documented layout") {
  KLReport report;
  report.pairs = {{0.5, 0.125}, {1e-12, 3e-9}};
  std::stringstream s;
  write_kl_report(s, report);
  std::string line;
  REQUIRE(std::getline(s, line));
  CHECK(line == "distance,worst_kl");
  REQUIRE(std::getline(s, line));
  CHECK(line == "0.5,0.125");
  REQUIRE(std::getline(s, line));
  const auto comma = line.find(',');
  REQUIRE(comma != std::string::npos);
  CHECK(std::strtod(line.substr(0, comma).c_str(), nullptr) == 1e-12);
  CHECK(std::strtod(line.substr(comma + 1).c_str(), nullptr) == 3e-9);
  CHECK_FALSE(std::getline(s, line));
}
