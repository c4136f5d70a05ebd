#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zk/calculus.hpp"
#include "zk/grid.hpp"

namespace zk {

enum class DealiasMode {
  Padded,     // power formed on a grid enlarged by the pad ratio
  TwoThirds,  // truncate to |index| <= n/3 before and after the power
};

struct EvolveConfig {
  int k = 3;
  double dt = 1e-3;
  double T_end = 1.0;
  std::optional<Rational> dealias_pad;  // default ceil((k+2)/2)
  DealiasMode dealias_mode = DealiasMode::Padded;
  int snapshot_stride = 100;            // steps between snapshots
  double boundary_tolerance = 1e-6;
  double growth_factor = 1e6;           // stop when |grad u|^2 exceeds this multiple of the initial value
  bool keep_snapshots = true;           // store fields in the trajectory
  bool check_step_budget = true;

  Rational pad() const;
  void validate() const;
};

struct LedgerRow {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_l2 = 0.0;
  double linf = 0.0;
  double trap_lhs = 0.0;  // |grad u|^{s_k} |u|^{1 - s_k}
  double boundary_fraction = 0.0;
};

struct ConservedLedger {
  int k = 0;
  std::vector<LedgerRow> rows;

  void push(const LedgerRow& row);
  std::string csv() const;
  static ConservedLedger parse_csv(const std::string& text, int k);
  double max_mass_drift() const;    // relative to rows[0]
  double max_energy_drift() const;  // relative to max(|E(0)|, 1e-10)
};

LedgerRow ledger_row(double t, const Field& u, int k);

enum class EvolveStatus { Completed, BoundaryStop, GrowthStop, NonFiniteStop };
std::string to_string(EvolveStatus s);

struct EvolveResult {
  Trajectory trajectory;
  ConservedLedger ledger;
  Field final_state;  // last valid state
  EvolveStatus status = EvolveStatus::Completed;
  double t_reached = 0.0;
  long steps = 0;
  double dt_used = 0.0;
  std::string message;
};

// -d_x(u^{k+1}), de-aliased according to pad / mode.
Field rhs_nonlinear(const Field& u, int k, Rational pad, DealiasMode mode = DealiasMode::Padded);

// Largest step allowed by dt <= dx / ((k+1) max|u|^k).
double step_budget(const Field& u, int k);

// One integrating-factor RK4 step; negative dt integrates backwards.
Field step(const Field& u, double dt, const EvolveConfig& cfg);

using SnapshotObserver = std::function<void(double t, const Field& u)>;

// Integrates to T_end with a step that divides T_end exactly (dt is shrunk
// if necessary). Snapshots every snapshot_stride steps plus the end point.
EvolveResult evolve(const Field& u0, const EvolveConfig& cfg, const SnapshotObserver& observer = nullptr);

struct EquivarianceReport {
  double gap = 0.0;        // relative L2 distance in the frame of u
  double mass_gap = 0.0;   // |M(u_lambda(t)) - lambda^{4/k-2} M(u(lambda^3 t))| / M(u_lambda(t))
  bool resolution_flag = false;
};

// Compares u(lambda^3 t_bar) with the inverse rescaling of the solution from
// rescale(u0, lambda) at t_bar. Both runs take the same number of steps.
EquivarianceReport scaling_equivariance_check(const Field& u0, double lambda, double t_bar, const EvolveConfig& cfg);

}  // namespace zk
