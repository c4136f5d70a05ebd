#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "zk/evolve.hpp"
#include "zk/groundstate.hpp"
#include "zk/grid.hpp"

namespace zk {

// s_k = 1 - 2/k (k >= 1).
double critical_index(int k);
// s_k^* = 1 - 3/(2k - 4); undefined below k = 3.
double critical_index_star(int k);

struct CriticalIndices {
  int k = 0;
  double s_k = 0.0;
  double s_k_star = 0.0;
  bool equal = false;       // s_k == s_k^*
  bool star_above = false;  // s_k^* > s_k
};

// Requires k >= 3.
CriticalIndices critical_indices(int k);

// Feasible when k > (3 + sqrt 33)/4.
struct Feasibility {
  bool feasible = false;
  double threshold = 0.0;
};
Feasibility k_feasibility(double k);

struct ThresholdReport {
  int k = 0;
  double s_k = 0.0;
  double E_u0 = 0.0;
  double M_u0 = 0.0;
  double lhs_12 = 0.0;  // E(u0)^{s_k} M(u0)^{1-s_k}
  double rhs_12 = 0.0;  // E(Q)^{s_k} M(Q)^{1-s_k}
  double lhs_13 = 0.0;  // |grad u0|^{s_k} |u0|^{1-s_k}
  double rhs_13 = 0.0;  // |grad Q|^{s_k} |Q|^{1-s_k}
  bool cond_12 = false;
  bool cond_13 = false;
  bool energy_nonneg = false;
};

// k >= 3, or k = 2 where both conditions become |u0|_2 < |Q|_2.
ThresholdReport threshold_check(const Field& u0, int k, const GroundState& g);
std::string threshold_json(const ThresholdReport& r);

struct DichotomyCurve {
  int k = 0;
  double A = 0.0;   // 2 E(u0)
  double B = 0.0;   // (2/k)^{k/2} |u0|^2 / |Q|^k
  double x0 = 0.0;  // (2/(kB))^{2/(k-2)}
  double f_x0 = 0.0;  // ((k-2)/k) x0
  double X0 = 0.0;    // |grad u0|^2
  double curve_identity_gap = 0.0;  // |f_x0 - (x0 - B x0^{k/2})| / max(1, f_x0)
  bool trapped = false;             // A < f(x0) and X0 < x0
  bool agrees_with_report = false;  // trapped == (cond_12 && cond_13)
};

DichotomyCurve dichotomy_curve(const Field& u0, int k, const GroundState& g);

// Equivalence audit over random_smooth_field samples with amplitudes spread
// evenly over [amp_min, amp_max].
struct DichotomyAudit {
  int fields = 0;
  int trapped = 0;
  int disagreements = 0;
  double max_curve_identity_gap = 0.0;
};
DichotomyAudit dichotomy_audit(const GroundState& g, int fields, std::uint64_t seed, double amp_min, double amp_max);

// f(x) = x - B x^{k/2}
double dichotomy_f(const DichotomyCurve& c, double x);

struct TrapVerdict {
  bool pass = true;
  double min_margin = 0.0;  // min over rows of rhs_13 - trap_lhs
  std::optional<double> first_violation_time;
  // A-priori bound X - B X^{k/2} <= A, checked when a curve is supplied.
  bool apriori_checked = false;
  double apriori_min_slack = 0.0;  // min of A - (X - B X^{k/2})
  std::optional<double> first_apriori_violation_time;
  std::size_t rows = 0;
};

inline constexpr double kAprioriTolerance = 1e-6;

TrapVerdict trap_monitor(const ConservedLedger& ledger, const ThresholdReport& report,
                         const DichotomyCurve* curve = nullptr);

}  // namespace zk
