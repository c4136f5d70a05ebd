#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zk/grid.hpp"

namespace zk {

// Positive radial solution of Laplacian Q - Q + Q^{k+1} = 0, centred in the box.
struct GroundState {
  int k = 0;
  Field Q;
  double mass_Q = 0.0;        // integral of Q^2
  double grad_sq = 0.0;       // integral of |grad Q|^2
  double pk2_integral = 0.0;  // integral of Q^{k+2}
  double residual = 0.0;      // |Lap Q - Q + Q^{k+1}|_2 / |Q|_2
  int iterations = 0;
  double stabilizer = 1.0;    // last Petviashvili factor
  std::vector<double> residual_history;
};

struct SolveOptions {
  double tol = 1e-12;
  int max_iters = 5000;
  int burn_in = 50;
  // Form Q^{k+1} alias-free on a padded grid (Galerkin); otherwise pointwise.
  bool dealiased = true;
  std::optional<Field> seed;  // default: unit Gaussian at the box centre
};

GroundState solve_ground_state(int k, const GridSpec& spec, const SolveOptions& opts = {});

// Rebuilds the diagnostics for a stored profile (e.g. a cached ZKF1 file).
GroundState ground_state_from_field(int k, Field Q, bool dealiased = true);

// |coeff Lap u - u + u^{k+1}|_2 / |u|_2.
double elliptic_residual(const Field& u, int k, double laplacian_coeff, bool dealiased = true);

// psi solves (k/2) Laplacian psi - psi + psi^{k+1} = 0; Q(x) = psi(sqrt(k/2) x).
struct PsiSolution {
  Field psi;
  Field Q;
  double psi_mass = 0.0;
  double Q_mass = 0.0;
  double mass_relation_gap = 0.0;  // | |Q|^2 - (2/k)|psi|^2 | / |Q|^2
  double residual = 0.0;
  int iterations = 0;
};

PsiSolution solve_psi_and_rescale(int k, const GridSpec& spec, const SolveOptions& opts = {});

struct PohozaevResiduals {
  // Each |lhs - rhs| divided by the integral of Q^{k+2}:
  double multiply_by_Q = 0.0;        // int Q^{k+2} = |Q|^2 + |grad Q|^2
  double multiply_by_x_grad = 0.0;   // int Q^{k+2} = (k+2)/2 |Q|^2
  double mass_gradient = 0.0;        // (k/2)|Q|^2 = |grad Q|^2
};

PohozaevResiduals pohozaev_check(const GroundState& g);

// Verdict tolerances.
inline constexpr double kPohozaevTol = 1e-6;
inline constexpr double kSolverResidualTol = 1e-10;
inline constexpr double kEnergyIdentityTol = 1e-6;
inline constexpr double kGNFormulaTol = 1e-6;
inline constexpr double kGNViolationTol = 1e-8;
inline constexpr double kGNEqualityTol = 1e-6;

struct GroundStateEnergy {
  double numeric = 0.0;       // energy(Q, k)
  double closed_form = 0.0;   // (k-2)/4 |Q|^2
  double relative_gap = 0.0;  // |numeric - closed| / |Q|^2
};

GroundStateEnergy ground_state_energy(const GroundState& g);

struct GNReport {
  int k = 0;
  double K_opt_pow = 0.0;         // from |Q|:   2^{(k-2)/2}(k+2) / (k^{k/2} |Q|^k)
  double K_opt_pow_psi = 0.0;     // from |psi|: (k+2) / (2 |psi|^k)
  double formula_gap = 0.0;       // relative difference of the two
  double equality_ratio_at_Q = 0.0;
  double equality_gap_at_Q = 0.0; // |ratio - 1|
  double worst_ratio = 0.0;       // over the audited family
  double worst_violation = 0.0;   // max(0, ratio - 1)
  int family_size = 0;
};

// psi_mass: |psi|^2 from an independent psi solve; when absent the relation
// |psi|^2 = (k/2)|Q|^2 is used.
GNReport sharp_constant(const GroundState& g, std::optional<double> psi_mass = {},
                        const std::vector<Field>& family = {});

// |u|_{k+2}^{k+2} / (K^{k+2} |grad u|^k |u|^2).
double gn_ratio(const Field& u, int k, double K_opt_pow);

std::string ground_state_sidecar_json(const GroundState& g);

}  // namespace zk
