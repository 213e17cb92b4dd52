#include <doctest.h>

#include <cmath>
#include <random>

#include "chemoflow/transport.hpp"
#include "support.hpp"

using namespace chemoflow;
using namespace testsupport;

namespace {

ProbabilityDensity uniform_density(const Grid1D& g, double a, double b) {
  return density_from_function([a, b](double x) { return (x > a && x < b) ? 1.0 : 0.0; }, g);
}

}  // namespace

TEST_CASE("w2 on uniform blocks: identity, translation, dilation") {
  const Grid1D g = build_grid(4.0, 400);
  const double h = g.spacing();
  const auto u01 = uniform_density(g, 0.0, 1.0);
  const auto u12 = uniform_density(g, 1.0, 2.0);
  const auto u02 = uniform_density(g, 0.0, 2.0);

  CHECK(w2(u01, u01) == 0.0);
  CHECK(w2(u01, u12) == doctest::Approx(1.0).epsilon(2.0 * h));
  // monotone map T(x) = 2x: cost int_0^1 (2x - x)^2 dx = 1/3
  CHECK(w2(u01, u02) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(2.0 * h));
}

TEST_CASE("w2 rejects mismatched grids") {
  const Grid1D a = build_grid(4.0, 400);
  const Grid1D b = build_grid(4.0, 200);
  CHECK_THROWS_AS(w2(gaussian_density(a, 0, 1), gaussian_density(b, 0, 1)),
                  std::invalid_argument);
}

TEST_CASE("north-west-corner oracle on histograms") {
  CHECK(w2_bruteforce({{0.0, 1.0}, {0.5, 0.5}}, {{0.0, 1.0}, {0.5, 0.5}}) == 0.0);
  CHECK(w2_bruteforce({{0.0}, {1.0}}, {{3.0}, {1.0}}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(w2_bruteforce({{0.0}, {1.0}}, {{1.0}, {0.5}}), std::invalid_argument);
}

TEST_CASE("quantile metric agrees with the oracle on random histograms") {
  const Grid1D g = build_grid(4.0, 400);
  const double h = g.spacing();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> nbins(2, 12);
  std::uniform_int_distribution<int> cell(40, 359);
  std::uniform_real_distribution<double> mass(0.1, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    Histogram ha, hb;
    std::vector<double> da(static_cast<size_t>(g.n_cells()), 0.0);
    std::vector<double> db(static_cast<size_t>(g.n_cells()), 0.0);
    for (int b = 0, nb = nbins(rng); b < nb; ++b) {
      const int i = cell(rng);
      const double m = mass(rng);
      ha.positions.push_back(g.center(i));
      ha.masses.push_back(m);
      da[static_cast<size_t>(i)] += m;
    }
    for (int b = 0, nb = nbins(rng); b < nb; ++b) {
      const int i = cell(rng);
      const double m = mass(rng);
      hb.positions.push_back(g.center(i));
      hb.masses.push_back(m);
      db[static_cast<size_t>(i)] += m;
    }
    // normalize both to unit mass so the induced step densities qualify
    double ma = 0, mb = 0;
    for (double m : ha.masses) ma += m;
    for (double m : hb.masses) mb += m;
    for (auto& m : ha.masses) m /= ma;
    for (auto& m : hb.masses) m /= mb;
    for (auto& v : da) v /= ma * h;
    for (auto& v : db) v /= mb * h;

    const double oracle = w2_bruteforce(ha, hb);
    const double quant = w2(ProbabilityDensity::from_values(da, g),
                            ProbabilityDensity::from_values(db, g));
    CHECK(std::abs(oracle - quant) <= 2.0 * h);
  }
}

TEST_CASE("compound distance: parts, metric axioms on sampled triples") {
  const Grid1D g = build_grid(4.0, 160);
  std::mt19937 rng(5);

  const auto u = random_density(g, rng);
  const auto v = random_field(g, rng);
  const SystemState a(u, v);
  CHECK(compound_dist(a, a).total == 0.0);

  // equal u, v differing by a constant c: l2 part is c sqrt(2R)
  std::vector<double> vshift = v.values();
  for (auto& x : vshift) x += 0.3;
  const SystemState b(u, ConcentrationField(vshift, g));
  const auto d = compound_dist(a, b);
  CHECK(d.w2_part == 0.0);
  CHECK(d.l2_part == doctest::Approx(0.3 * std::sqrt(2.0 * g.half_width())).epsilon(1e-12));

  for (int trial = 0; trial < 100; ++trial) {
    const SystemState s1(random_density(g, rng), random_field(g, rng));
    const SystemState s2(random_density(g, rng), random_field(g, rng));
    const SystemState s3(random_density(g, rng), random_field(g, rng));
    const auto d12 = compound_dist(s1, s2), d21 = compound_dist(s2, s1);
    const auto d13 = compound_dist(s1, s3), d23 = compound_dist(s2, s3);
    CHECK(d12.total == d21.total);  // symmetry exact
    CHECK(d13.total <= d12.total + d23.total + 1e-9);
    CHECK(d12.total * d12.total ==
          doctest::Approx(d12.w2_part * d12.w2_part + d12.l2_part * d12.l2_part)
              .epsilon(1e-12));
  }
}

TEST_CASE("pushforward: identity, translation, dilation, monotonicity guard") {
  const Grid1D g = build_grid(6.0, 600);
  const double h = g.spacing();
  const auto u = gaussian_density(g, 0.2, 0.5);

  const auto same = pushforward(u, [](double x) { return x; });
  CHECK(l1_diff(u, same) <= 2.0 * h);

  const auto moved = pushforward(u, [](double x) { return x + 1.0; });
  CHECK(w2(u, moved) == doctest::Approx(1.0).epsilon(2.0 * h));

  const Grid1D g4 = build_grid(4.0, 400);
  const auto u01 = uniform_density(g4, 0.0, 1.0);
  const auto dilated = pushforward(u01, [](double x) { return 2.0 * x; });
  CHECK(l1_diff(dilated, uniform_density(g4, 0.0, 2.0)) <= 4.0 * g4.spacing());

  CHECK_THROWS_AS(pushforward(u, [](double x) { return -x; }), std::invalid_argument);
}

TEST_CASE("translation equivariance of w2") {
  const Grid1D g = build_grid(6.0, 600);
  const double h = g.spacing();
  const auto u = gaussian_density(g, -0.5, 0.4);
  for (double a : {0.25, 0.5, 1.5, 3.0}) {
    const auto shifted = pushforward(u, [a](double x) { return x + a; });
    CHECK(w2(u, shifted) == doctest::Approx(a).epsilon(2.0 * h / a));
  }
}

TEST_CASE("scaling: w2 of dilated pairs scales linearly") {
  const Grid1D g = build_grid(6.0, 600);
  const double h = g.spacing();
  const auto u1 = gaussian_density(g, -0.3, 0.4);
  const auto u2 = gaussian_density(g, 0.4, 0.6);
  const double base = w2(u1, u2);
  const double lambda = 1.7;
  const auto d1 = pushforward(u1, [lambda](double x) { return lambda * x; });
  const auto d2 = pushforward(u2, [lambda](double x) { return lambda * x; });
  CHECK(w2(d1, d2) == doctest::Approx(lambda * base).epsilon(2.0 * h));
}

TEST_CASE("sampled quantile metric is second order on Lipschitz CDFs") {
  // uniform[0,1] vs uniform[0,2]: exact distance 1/sqrt(3); block edges are
  // grid-aligned so the only error is the midpoint sampling of the integrand
  const double exact = 1.0 / std::sqrt(3.0);
  std::vector<double> errs;
  for (int n : {200, 400, 800}) {
    const Grid1D g = build_grid(4.0, n);
    const auto a = uniform_density(g, 0.0, 1.0);
    const auto b = uniform_density(g, 0.0, 2.0);
    errs.push_back(std::abs(w2(a, b) - exact));
  }
  CHECK(errs[0] / errs[1] >= 2.5);  // ~4 for a second-order rule
  CHECK(errs[1] / errs[2] >= 2.5);
}
