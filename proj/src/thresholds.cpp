#include "zk/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "zk/calculus.hpp"
#include "zk/error.hpp"
#include "zk/initial.hpp"

namespace zk {

double critical_index(int k) {
  require(k >= 1, "s_k needs k >= 1");
  return 1.0 - 2.0 / k;
}

double critical_index_star(int k) {
  if (k < 3) fail(ErrorCode::Domain, "s_k^* = 1 - 3/(2k-4) is undefined for k = " + std::to_string(k) + " (needs k >= 3)");
  return 1.0 - 3.0 / (2.0 * k - 4.0);
}

CriticalIndices critical_indices(int k) {
  CriticalIndices c;
  c.k = k;
  c.s_k_star = critical_index_star(k);
  c.s_k = critical_index(k);
  c.equal = c.s_k == c.s_k_star;
  c.star_above = c.s_k_star > c.s_k;
  return c;
}

Feasibility k_feasibility(double k) {
  require(std::isfinite(k) && k > 0.0, "k must be positive");
  Feasibility f;
  f.threshold = (3.0 + std::sqrt(33.0)) / 4.0;
  f.feasible = k > f.threshold;
  return f;
}

namespace {

// sign(a) |a|^s b^{1-s}, with 0^s = 0 for s > 0 and 0^0 = 1.
double interp(double a, double b, double s) {
  const double mag = (a == 0.0 && s == 0.0) ? 1.0 : std::pow(std::abs(a), s);
  return std::copysign(mag, a == 0.0 ? 1.0 : a) * std::pow(b, 1.0 - s);
}

}  // namespace

ThresholdReport threshold_check(const Field& u0, int k, const GroundState& g) {
  require(k >= 2, "threshold check needs k >= 2 (k = 2 uses the mass criterion)");
  require(g.k == k, "ground state was computed for k = " + std::to_string(g.k) + ", not " + std::to_string(k));
  require(u0.spec() == g.Q.spec(), "initial data and ground state must share a grid");
  ThresholdReport r;
  r.k = k;
  r.s_k = critical_index(k);
  r.E_u0 = energy(u0, k);
  r.M_u0 = mass(u0);
  r.energy_nonneg = r.E_u0 >= 0.0;
  const double grad_u = gradient_l2_squared(u0);

  if (k == 2) {
    // Both conditions collapse to |u0|_2 < |Q|_2.
    r.lhs_12 = r.M_u0;
    r.rhs_12 = g.mass_Q;
    r.lhs_13 = std::sqrt(r.M_u0);
    r.rhs_13 = std::sqrt(g.mass_Q);
    r.cond_12 = r.cond_13 = r.M_u0 < g.mass_Q;
    return r;
  }

  const double EQ = energy(g.Q, k);
  r.lhs_12 = interp(r.E_u0, r.M_u0, r.s_k);
  r.rhs_12 = interp(EQ, g.mass_Q, r.s_k);
  r.lhs_13 = interp(std::sqrt(grad_u), std::sqrt(r.M_u0), r.s_k);
  r.rhs_13 = interp(std::sqrt(g.grad_sq), std::sqrt(g.mass_Q), r.s_k);
  r.cond_12 = r.energy_nonneg && r.lhs_12 < r.rhs_12;
  r.cond_13 = r.lhs_13 < r.rhs_13;
  return r;
}

std::string threshold_json(const ThresholdReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["s_k"] = r.s_k;
  j["E_u0"] = r.E_u0;
  j["M_u0"] = r.M_u0;
  j["lhs_12"] = r.lhs_12;
  j["rhs_12"] = r.rhs_12;
  j["lhs_13"] = r.lhs_13;
  j["rhs_13"] = r.rhs_13;
  j["cond_12"] = r.cond_12;
  j["cond_13"] = r.cond_13;
  j["energy_nonneg"] = r.energy_nonneg;
  return j.dump(2);
}

double dichotomy_f(const DichotomyCurve& c, double x) { return x - c.B * std::pow(x, 0.5 * c.k); }

DichotomyCurve dichotomy_curve(const Field& u0, int k, const GroundState& g) {
  require(k >= 3, "the dichotomy curve needs k >= 3");
  require(g.k == k, "ground state was computed for a different k");
  const double m = mass(u0);
  require(m > 0.0, "the dichotomy curve needs nonzero data");
  DichotomyCurve c;
  c.k = k;
  c.A = 2.0 * energy(u0, k);
  c.B = std::pow(2.0 / k, 0.5 * k) * m / std::pow(std::sqrt(g.mass_Q), k);
  c.x0 = std::pow(2.0 / (k * c.B), 2.0 / (k - 2.0));
  c.f_x0 = (k - 2.0) / k * c.x0;
  c.X0 = gradient_l2_squared(u0);
  c.curve_identity_gap = std::abs(c.f_x0 - dichotomy_f(c, c.x0)) / std::max(1.0, std::abs(c.f_x0));
  c.trapped = c.A < c.f_x0 && c.X0 < c.x0;
  const ThresholdReport r = threshold_check(u0, k, g);
  c.agrees_with_report = c.trapped == (r.cond_12 && r.cond_13);
  return c;
}

DichotomyAudit dichotomy_audit(const GroundState& g, int fields, std::uint64_t seed, double amp_min, double amp_max) {
  require(fields >= 1, "audit needs at least one field");
  require(amp_min > 0.0 && amp_max >= amp_min, "audit amplitudes must satisfy 0 < amp_min <= amp_max");
  DichotomyAudit a;
  a.fields = fields;
  for (int i = 0; i < fields; ++i) {
    const double amp = fields == 1 ? amp_min : amp_min + (amp_max - amp_min) * i / (fields - 1);
    const Field u = random_smooth_field(g.Q.spec(), seed + static_cast<std::uint64_t>(i), amp);
    const DichotomyCurve c = dichotomy_curve(u, g.k, g);
    a.trapped += c.trapped;
    a.disagreements += !c.agrees_with_report;
    a.max_curve_identity_gap = std::max(a.max_curve_identity_gap, c.curve_identity_gap);
  }
  return a;
}

TrapVerdict trap_monitor(const ConservedLedger& ledger, const ThresholdReport& report, const DichotomyCurve* curve) {
  TrapVerdict v;
  v.rows = ledger.rows.size();
  v.min_margin = report.rhs_13;
  for (const auto& row : ledger.rows) {
    const double margin = report.rhs_13 - row.trap_lhs;
    v.min_margin = std::min(v.min_margin, margin);
    if (!(margin > 0.0) && !v.first_violation_time) v.first_violation_time = row.t;
  }
  if (curve) {
    v.apriori_checked = true;
    v.apriori_min_slack = kInf;
    for (const auto& row : ledger.rows) {
      const double X = row.grad_l2 * row.grad_l2;
      const double slack = curve->A - dichotomy_f(*curve, X);
      v.apriori_min_slack = std::min(v.apriori_min_slack, slack);
      if (slack < -kAprioriTolerance && !v.first_apriori_violation_time) v.first_apriori_violation_time = row.t;
    }
    if (ledger.rows.empty()) v.apriori_min_slack = 0.0;
  }
  v.pass = !v.first_violation_time && !v.first_apriori_violation_time;
  return v;
}

}  // namespace zk
