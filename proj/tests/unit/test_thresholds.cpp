#include <doctest.h>

#include <cmath>
#include <map>

#include "../support/fields.hpp"
#include "zk/calculus.hpp"
#include "zk/error.hpp"
#include "zk/evolve.hpp"
#include "zk/groundstate.hpp"
#include "zk/initial.hpp"
#include "zk/thresholds.hpp"

using namespace zk;
using namespace testing_support;

namespace {

const GridSpec kGrid(256, 16.0);

const GroundState& gs(int k) {
  static std::map<int, GroundState> memo;
  auto it = memo.find(k);
  if (it == memo.end()) it = memo.emplace(k, solve_ground_state(k, kGrid)).first;
  return it->second;
}

}  // namespace

TEST_SUITE("thresholds") {
  TEST_CASE("critical indices") {
    const auto c8 = critical_indices(8);
    CHECK(c8.s_k == 0.75);
    CHECK(c8.s_k_star == 0.75);
    CHECK(c8.equal);
    CHECK(critical_index(3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const auto c10 = critical_indices(10);
    CHECK(c10.s_k == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(c10.s_k_star == doctest::Approx(0.8125).epsilon(1e-15));
    CHECK(c10.star_above);
    for (int k : {9, 12}) CHECK(critical_indices(k).star_above);
    for (int k : {3, 4, 5, 6, 7}) CHECK_FALSE(critical_indices(k).star_above);
    try {
      critical_indices(2);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Domain);
    }
  }

  TEST_CASE("k feasibility threshold") {
    const auto f = k_feasibility(3.0);
    CHECK(f.threshold == (3.0 + std::sqrt(33.0)) / 4.0);
    CHECK(f.feasible);
    CHECK_FALSE(k_feasibility(2.0).feasible);
    CHECK_THROWS_AS(k_feasibility(-1.0), Error);
  }

  TEST_CASE("0.9 Q passes and lhs_13 is exactly 0.9 rhs_13") {
    const auto& g = gs(3);
    const auto r = threshold_check(g.Q.scaled(0.9), 3, g);
    CHECK(r.cond_12);
    CHECK(r.cond_13);
    CHECK(r.energy_nonneg);
    CHECK(std::abs(r.lhs_13 / r.rhs_13 - 0.9) < 1e-12);
  }

  TEST_CASE("u0 = Q is the equality case") {
    const auto& g = gs(3);
    const auto r = threshold_check(g.Q, 3, g);
    CHECK_FALSE(r.cond_13);
    CHECK_FALSE(r.cond_12);
    const auto c = dichotomy_curve(g.Q, 3, g);
    CHECK(std::abs(c.x0 / g.grad_sq - 1.0) < 1e-10);
    // A = 2E(Q) meets the top of the curve.
    CHECK(std::abs(c.A / c.f_x0 - 1.0) < 1e-6);
    // Both strict inequalities are equalities here; rounding decides c.trapped.
    CHECK(std::abs(c.X0 / c.x0 - 1.0) < 1e-10);
  }

  TEST_CASE("k = 2 mass criterion") {
    const auto& g = gs(2);
    const auto r = threshold_check(g.Q.scaled(0.5), 2, g);
    CHECK(r.cond_12);
    CHECK(r.cond_13);
    CHECK_FALSE(threshold_check(g.Q.scaled(1.01), 2, g).cond_13);
  }

  TEST_CASE("mismatched ground state is rejected") {
    CHECK_THROWS_AS(threshold_check(gs(2).Q, 3, gs(2)), Error);
    CHECK_THROWS_AS(dichotomy_curve(Field::zeros(kGrid), 3, gs(3)), Error);
  }

  TEST_CASE("negative energy fails the energy condition with the flag set") {
    const auto& g = gs(3);
    const auto r = threshold_check(g.Q.scaled(1.5), 3, g);
    CHECK(r.E_u0 < 0.0);
    CHECK_FALSE(r.energy_nonneg);
    CHECK_FALSE(r.cond_12);
    CHECK(r.lhs_12 < 0.0);
  }

  TEST_CASE("curve identity and audit agreement") {
    const auto& g = gs(3);
    for (double a : {0.2, 0.6, 1.0, 1.6}) {
      const auto c = dichotomy_curve(random_smooth_field(kGrid, 9, a), 3, g);
      CHECK(c.curve_identity_gap < 1e-12);
      CHECK(std::abs(dichotomy_f(c, c.x0) - c.f_x0) <= 1e-12 * std::max(1.0, c.f_x0));
      CHECK(c.agrees_with_report);
    }
    const auto audit = dichotomy_audit(g, 20, 1, 0.2, 2.0);
    CHECK(audit.fields == 20);
    CHECK(audit.disagreements == 0);
    CHECK(audit.trapped > 0);
    CHECK(audit.trapped < 20);
    CHECK(audit.max_curve_identity_gap < 1e-12);
  }

  TEST_CASE("functionals are translation invariant and homogeneous") {
    const auto& g = gs(3);
    const Field u = gaussian(kGrid, 1.2, 0.8);
    const auto a = threshold_check(u, 3, g);
    const auto b = threshold_check(translate(u, 1.75, -2.5), 3, g);
    CHECK(std::abs(b.lhs_12 - a.lhs_12) <= 1e-10 * std::abs(a.lhs_12));
    CHECK(std::abs(b.lhs_13 - a.lhs_13) <= 1e-10 * a.lhs_13);
    for (double c : {0.5, 2.0}) CHECK(std::abs(threshold_check(u.scaled(c), 3, g).lhs_13 / a.lhs_13 - c) < 1e-12);
  }

  TEST_CASE("trap monitor: zero trajectory, a short run and a corrupted row") {
    const auto& g = gs(3);
    const auto rep0 = threshold_check(g.Q.scaled(0.5), 3, g);
    ConservedLedger z;
    z.k = 3;
    for (int i = 0; i < 3; ++i) z.push(ledger_row(i, Field::zeros(kGrid), 3));
    const auto vz = trap_monitor(z, rep0);
    CHECK(vz.pass);
    CHECK(vz.min_margin == doctest::Approx(rep0.rhs_13).epsilon(1e-15));

    EvolveConfig cfg;
    cfg.k = 3;
    cfg.dt = 2e-3;
    cfg.T_end = 1.0;
    cfg.snapshot_stride = 50;
    cfg.boundary_tolerance = 1.0;
    cfg.keep_snapshots = false;
    const Field u0 = g.Q.scaled(0.5);
    const auto run = evolve(u0, cfg);
    const auto curve = dichotomy_curve(u0, 3, g);
    const auto v = trap_monitor(run.ledger, rep0, &curve);
    CHECK(v.pass);
    CHECK(v.min_margin > 0.0);
    CHECK(v.apriori_checked);
    CHECK(v.apriori_min_slack >= -kAprioriTolerance);
    CHECK(v.rows == run.ledger.rows.size());

    ConservedLedger bad = run.ledger;
    bad.rows[3].trap_lhs = rep0.rhs_13 * 1.01;
    const auto vb = trap_monitor(bad, rep0);
    CHECK_FALSE(vb.pass);
    REQUIRE(vb.first_violation_time);
    CHECK(*vb.first_violation_time == bad.rows[3].t);
  }

  TEST_CASE("report json keys") {
    const std::string js = threshold_json(threshold_check(gs(3).Q.scaled(0.5), 3, gs(3)));
    for (const char* key : {"k", "s_k", "E_u0", "M_u0", "lhs_12", "rhs_12", "lhs_13", "rhs_13", "cond_12", "cond_13",
                            "energy_nonneg"})
      CHECK(js.find(std::string("\"") + key + "\"") != std::string::npos);
  }
}
