#include <doctest.h>

#include <cmath>

#include "../support/fields.hpp"
#include "zk/calculus.hpp"
#include "zk/error.hpp"
#include "zk/evolve.hpp"
#include "zk/groundstate.hpp"
#include "zk/linear_group.hpp"
#include "zk/scattering.hpp"
#include "zk/thresholds.hpp"

using namespace zk;
using namespace testing_support;

namespace {

Trajectory linear_traj(const Field& u0, const std::vector<double>& times) {
  Trajectory tr;
  tr.spec = u0.spec();
  for (double t : times) tr.push(t, propagate(u0, t));
  return tr;
}

double h1(const Field& a, const Field& b) {
  Field d = a;
  for (std::size_t i = 0; i < d.samples().size(); ++i) d.mutable_samples()[i] -= b.samples()[i];
  return sobolev_norm(d, 1.0, false);
}

// Small-data run sampled at the scatter checkpoints.
Trajectory small_run(double amp, double T) {
  EvolveConfig cfg;
  cfg.k = 3;
  cfg.dt = 0.02;
  cfg.T_end = T;
  cfg.snapshot_stride = 100;  // every 2 time units
  cfg.boundary_tolerance = 1.0;
  return evolve(gaussian(GridSpec(128, 40.0), 2.0, amp), cfg).trajectory;
}

}  // namespace

TEST_SUITE("scattering") {
  TEST_CASE("config exponents") {
    ScatterConfig c;
    c.k = 3;
    CHECK(std::abs(1.0 / c.p() + 1.0 / c.p_dual() - 1.0) < 1e-15);
    CHECK(c.p() == 8.0);
    CHECK(c.weight_exponent() == doctest::Approx(0.5).epsilon(1e-15));
    c.k = 2;
    CHECK_THROWS_AS(c.validate(), Error);
    c.k = 3;
    c.checkpoints = {4, 2};
    CHECK_THROWS_AS(c.validate(), Error);
  }

  TEST_CASE("interaction picture of a linear trajectory is constant") {
    const GridSpec s(64, 10.0);
    const Field u0 = band_limited(s, 6, 4);
    const auto tr = linear_traj(u0, {0.0, 0.5, 1.7, 3.0});
    const auto v = interaction_picture(tr);
    REQUIRE(v.size() == 4);
    CHECK(max_abs_diff(v.fields[0], tr.fields[0]) == 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(max_abs_diff(v.fields[i], u0) < 1e-12 * u0.max_abs());
      const double a = sobolev_norm(tr.fields[i], 1.0, false);
      CHECK(std::abs(sobolev_norm(v.fields[i], 1.0, false) - a) < 1e-12 * a);
    }
  }

  TEST_CASE("tiny data is linear: negligible tails and f_plus = u0") {
    ScatterConfig cfg;
    const Trajectory tr = small_run(1e-8, 16.0);
    const auto st = asymptotic_state(tr, cfg);
    CHECK(st.negligible);
    CHECK(st.verdict == "linear");
    CHECK(st.cauchy);
    CHECK(rel_l2_diff(st.f_plus, tr.fields.front()) < 1e-12);
  }

  TEST_CASE("a jump in the trajectory breaks the Cauchy verdict") {
    const GridSpec s(64, 20.0);
    const Field u0 = gaussian(s, 2.0, 0.1);
    const Field bump = gaussian(s, 1.0, 0.05, 3.0, 0.0);
    Trajectory tr;
    tr.spec = s;
    for (double t : {2.0, 4.0, 8.0, 16.0}) {
      Field w = u0;
      if (t >= 8.0)
        for (std::size_t i = 0; i < w.samples().size(); ++i) w.mutable_samples()[i] += (t / 8.0) * bump.samples()[i];
      tr.push(t, propagate(w, t));
    }
    ScatterConfig cfg;
    const auto st = asymptotic_state(tr, cfg);
    CHECK_FALSE(st.cauchy);
    CHECK(st.verdict == "no convergence detected");
    CHECK_THROWS_AS(asymptotic_state(linear_traj(u0, {2.0, 4.0}), cfg), Error);
  }

  TEST_CASE("zero data: M(T) = 0 and G = 0") {
    ScatterConfig cfg;
    cfg.horizons = {1, 2};
    std::vector<double> times;
    for (int i = 0; i <= 8; ++i) times.push_back(0.25 * i);
    const auto tr = linear_traj(Field::zeros(GridSpec(32, 8.0)), times);
    const auto ser = scatter_series(tr, cfg);
    for (double g : ser.G) CHECK(g == 0.0);
    const auto w = weighted_decay(ser, cfg);
    for (double m : w.M_T) CHECK(m == 0.0);
    CHECK(w.stable);
    CHECK(smallness(Field::zeros(GridSpec(32, 8.0)), 3) == 0.0);
  }

  TEST_CASE("G(Q) is half the mass of Q") {
    const auto g = solve_ground_state(3, GridSpec(256, 16.0));
    ScatterConfig cfg;
    Trajectory tr;
    tr.spec = g.Q.spec();
    tr.push(0.0, g.Q);
    const auto ser = scatter_series(tr, cfg);
    CHECK(std::abs(ser.G[0] / (g.mass_Q / 2.0) - 1.0) < 1e-6);
  }

  TEST_CASE("k feasibility boundary is strict") {
    const double c = (3.0 + std::sqrt(33.0)) / 4.0;
    CHECK_FALSE(k_feasibility(c).feasible);
    CHECK(k_feasibility(std::nextafter(c, 3.0)).feasible);
    CHECK(k_feasibility(3.0).feasible);
    CHECK_FALSE(k_feasibility(2.0).feasible);
  }

  TEST_CASE("f_plus from T and 2T differ by exactly the last tail") {
    const Trajectory tr = small_run(0.3, 16.0);
    ScatterConfig a, b;
    a.checkpoints = {2, 4, 8};
    b.checkpoints = {2, 4, 8, 16};
    const auto sa = asymptotic_state(tr, a), sb = asymptotic_state(tr, b);
    CHECK(h1(sa.f_plus, sb.f_plus) <= sb.tail_norms.back() * (1.0 + 1e-12));
    for (double x : sb.tail_norms) CHECK(x >= 0.0);
  }

  TEST_CASE("tails scale like amplitude^(k+1)") {
    ScatterConfig cfg;
    std::vector<double> sup;
    for (double amp : {0.2, 0.1}) {
      const auto st = asymptotic_state(small_run(amp, 16.0), cfg);
      sup.push_back(*std::max_element(st.tail_norms.begin(), st.tail_norms.end()));
    }
    const double order = std::log2(sup[0] / sup[1]);
    INFO("order = " << order);
    CHECK(order >= 3.5);
  }

  TEST_CASE("linear flow: M(T) stabilises across T in {10, 20, 40}") {
    ScatterConfig cfg;
    std::vector<double> times;
    for (int i = 0; i <= 80; ++i) times.push_back(0.5 * i);
    const auto tr = linear_traj(gaussian(GridSpec(512, 80.0), 2.0), times);
    const auto w = weighted_decay(scatter_series(tr, cfg), cfg);
    INFO("ratios " << w.ratios[0] << " " << w.ratios[1]);
    CHECK(w.stable);
    CHECK(w.within_window);
    CHECK(w.window == 40.0);
  }

  TEST_CASE("report json fields") {
    ScatterReport r;
    r.state.tail_norms = {1.0, 0.5};
    const std::string js = scatter_json(r);
    for (const char* key : {"k", "delta", "checkpoints", "tail_norms", "M_T", "G_slope", "verdicts"})
      CHECK(js.find(std::string("\"") + key + "\"") != std::string::npos);
  }
}
