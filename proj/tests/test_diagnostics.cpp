#include <doctest.h>

#include <cmath>
#include <random>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/stationary.hpp"
#include "support.hpp"

using namespace chemoflow;
using namespace testsupport;

TEST_CASE("fit_decay_rate is exact on synthetic exponentials") {
  std::vector<double> t, y, c;
  for (int i = 0; i <= 500; ++i) {
    t.push_back(0.01 * i);
    y.push_back(5.0 * std::exp(-3.0 * 0.01 * i));
    c.push_back(2.5);
  }
  const auto fit = fit_series(t, y, 0.0, 5.0, 2.0);
  CHECK(fit.rate == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  const auto flat = fit_series(t, c, 0.0, 5.0, 2.0);
  CHECK(std::abs(flat.rate) <= 1e-12);

  CHECK_THROWS_AS(fit_series(t, y, 4.95, 5.0, 2.0), std::invalid_argument);
}

TEST_CASE("reference rate ignores the coupling strength") {
  CHECK(reference_rate(make_params(0.0, 2.0, 0.5)) == doctest::Approx(0.5));
  CHECK(reference_rate(make_params(0.0, 1.0, 1.0)) == doctest::Approx(1.0));
  CHECK(reference_rate(make_params(0.3, 2.0, 0.5)) == doctest::Approx(0.5));
}

TEST_CASE("explicit constants of the gradient-control estimate") {
  const auto p = make_params(0.05, 1.0, 1.0, "rational");
  const auto c = decay_constants(p, 0.0);
  CHECK(c.y1 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(c.a == doctest::Approx(4.0).epsilon(1e-9));
  // frozen by the closed-form radial integral for ||D H_1||_{L^{6/5}}
  CHECK(c.y65 == doctest::Approx(1.6075646360663642).epsilon(1e-8));
  CHECK(c.m1 == doctest::Approx(10.742754481873423).epsilon(1e-6));
  CHECK(c.t1 == 0.0);  // |v_0| = 0 clamps T_1

  const auto c2 = decay_constants(p, 3.0);
  CHECK(c2.t1 == doctest::Approx(std::log(4.0 * 3.0 / c2.m1) / p.kappa).epsilon(1e-12));
  const auto c3 = decay_constants(p, 1e-9);
  CHECK(c3.t1 == 0.0);
}

TEST_CASE("discrete rate bracket") {
  CHECK(discrete_rate(1.0, 0.1) == doctest::Approx(10.0 * std::log(1.1)).epsilon(1e-12));
  CHECK(discrete_rate(3.0, 1e-7) == doctest::Approx(3.0).epsilon(1e-6));
  double prev = 0.0;
  for (double tau : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    const double r = discrete_rate(2.0, tau);
    CHECK(r < 2.0);
    CHECK(r > prev);
    prev = r;
  }
  CHECK_THROWS_AS(discrete_rate(0.0, 0.1), std::invalid_argument);
}

TEST_CASE("uncoupled signal-only run decays at the discrete-bracket rate") {
  const Grid1D g = build_grid(6.0, 300);
  const auto p = make_params(0.0, 1.0, 1.0, "rational");
  const auto stat = solve_stationary(p, g);
  JkoConfig cfg;
  cfg.tau = 0.01;
  const SystemState init(stat.state.u, gaussian_field(g, 0.5, 0.0, 0.6));
  const auto rec = run_trajectory(init, p, cfg, 400, stat.state, false);
  const auto fit = fit_decay_rate(rec, DecayQuantity::kLv, 0.2, 4.0, p);
  CHECK(fit.rate >= 2.0 * p.kappa * (1.0 - 2e-2));
}

TEST_CASE("gradient control report on decaying and coupled runs") {
  const Grid1D g = build_grid(6.0, 300);
  JkoConfig cfg;
  cfg.tau = 0.01;

  {
    const auto p = make_params(0.0, 1.0, 1.0, "rational");
    const auto stat = solve_stationary(p, g);
    const SystemState init(gaussian_density(g, 0.5, 0.4), ConcentrationField::zero(g));
    const auto rec = run_trajectory(init, p, cfg, 100, stat.state, false);
    const auto consts = decay_constants(p, rec.v0_l65_norm);
    const auto rep = gradient_control_check(rec, consts, p.epsilon, cfg.tau);
    CHECK(rep.time_bound_all_steps);  // zero signal stays under the envelope
    CHECK(rep.control_past_t1);
  }
  {
    const auto p = make_params(0.0, 1.0, 1.0, "rational");
    const auto stat = solve_stationary(p, g);
    const SystemState init(gaussian_density(g, 0.5, 0.4), gaussian_field(g, 0.6, 0.2, 0.5));
    const auto rec = run_trajectory(init, p, cfg, 300, stat.state, false);
    const auto consts = decay_constants(p, rec.v0_l65_norm);
    const auto rep = gradient_control_check(rec, consts, p.epsilon, cfg.tau);
    CHECK(rep.time_bound_all_steps);  // pure decay case
  }
  {
    const auto p = make_params(0.05, 1.0, 1.0, "rational");
    const auto stat = solve_stationary(p, g);
    const SystemState init(gaussian_density(g, 0.5, 0.4), gaussian_field(g, 0.6, 0.2, 0.5));
    const auto rec = run_trajectory(init, p, cfg, 300, stat.state, false);
    const auto consts = decay_constants(p, rec.v0_l65_norm);
    const auto rep = gradient_control_check(rec, consts, p.epsilon, cfg.tau);
    CHECK(rep.control_past_t1);
    CHECK(rep.caveat == "3-D-constant heuristic applied to 1-D run");
  }
}

TEST_CASE("constants expose the exponent and norm families") {
  const auto c = decay_constants(make_params(0.0, 1.0, 1.0), 1.0);
  CHECK(c.exponent_Q(1.0) == doctest::Approx(0.5));
  CHECK(c.exponent_Q(1.2) == doctest::Approx(0.75));
  CHECK(c.y_q(1.0) == doctest::Approx(c.y1).epsilon(1e-12));
  CHECK(c.y_q(1.2) == doctest::Approx(c.y65).epsilon(1e-12));
  CHECK(c.discrete(2.0, 0.01) == doctest::Approx(discrete_rate(2.0, 0.01)));
}
