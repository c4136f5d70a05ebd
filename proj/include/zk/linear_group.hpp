#pragma once

#include <span>
#include <string>
#include <vector>

#include "zk/calculus.hpp"
#include "zk/grid.hpp"
#include "zk/spectral.hpp"

namespace zk {

// Free flow u_t + d_x Laplacian u = 0: multiplier exp(i t (xi^3 + xi eta^2)).
Field propagate(const Field& f, double t);
void apply_propagator(HalfSpectrum& h, const Wavenumbers& w, double t);

// Copies f into the centre of a box twice as large at the same resolution.
Field embed_doubled(const Field& f);

// Largest t for which the fastest significant group velocity (3 xi^2 + eta^2)
// keeps the wave within distance L. Spectral content below `energy_tail` of the
// total is ignored.
double group_speed_horizon(const Field& f, double energy_tail = 1e-6);

struct DecayProbeConfig {
  double theta = 1.0;  // p = 2/(1 - theta), p' = 2/(1 + theta)
  double eps = 0.0;
  double t_min = 5.0;
  double t_max = 40.0;
  int samples = 16;
  // Re-run on a doubled box and compare; wraparound shows up as a deviation.
  bool box_doubling_check = true;
  double validity_tol = 0.05;

  double p() const;
  double p_dual() const;
  void validate() const;
};

struct ProbeRow {
  int family_index = 0;
  double param = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct DecayProbeResult {
  std::vector<ProbeRow> rows;  // param = t, lhs = |U(t) f|_p, rhs = |f|_p', ratio = lhs t^{2 theta/3} / rhs
  double slope = 0.0;          // least-squares d log lhs / d log t
  double intercept = 0.0;
  double constant = 0.0;       // sup of ratio over the samples
  double max_boundary_fraction = 0.0;
  bool boundary_contaminated = false;  // mass within 10% of the edge above 1e-8 of total
  double torus_deviation = 0.0;
  bool torus_valid = true;
  double horizon = 0.0;  // group_speed_horizon of the data, informational
};

DecayProbeResult decay_probe(const Field& f, const DecayProbeConfig& cfg);

// Allowed distance between the fitted slope and -2 theta / 3.
inline constexpr double kDecaySlopeTol = 0.05;

struct ProbeWindow {
  double T = 1.0;
  int time_samples = 401;
  bool box_doubling_check = true;
  double validity_tol = 0.05;
};

struct ProbeStats {
  std::vector<ProbeRow> rows;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double spread = 0.0;          // max / min
  bool increasing = false;      // ratios strictly increase with row order
  double torus_deviation = 0.0; // worst relative lhs change on the doubled box
  bool torus_valid = true;
};

// |d_x^order U(t) u0|_{L^inf_x L^2_yT} / |u0|_{L^2}.
ProbeStats smoothing_probe(std::span<const Field> family, std::span<const double> params, const ProbeWindow& win,
                           int derivative_order = 1);
// |U(t) f|_{L^4_x L^inf_yT} / |f|_{H^s}.
ProbeStats maximal_probe(std::span<const Field> family, std::span<const double> params, double s,
                         const ProbeWindow& win);
// |D_x^{theta eps/2} U(t) f|_{L^q_T L^p_xy} / |f|_{L^2}, p = 2/(1-theta), 2/q = theta(2+eps)/3.
ProbeStats strichartz_probe(std::span<const Field> family, std::span<const double> params, double theta, double eps,
                            const ProbeWindow& win);

// Sharp-index estimates available for k > 8.
enum class IndexEstimate {
  MaximalKHalf,    // |U f|_{L^{k/2}_x L^inf_yT} vs |f|_{H^{s_k + eps}}
  TimeSupremum,    // |U f|_{L^{3k/2+eps}_T L^inf_xy} vs |f|_{H^{s_k + eps}}
  DerivativeTime,  // |d_x U f|_{L^{3k/(k+2)}_T L^inf_xy} vs |D_x^{s_k} f|_{L^2}
};
ProbeStats index_probe(std::span<const Field> family, std::span<const double> params, int k, IndexEstimate which,
                       double eps, const ProbeWindow& win);

std::string probe_csv(const std::vector<ProbeRow>& rows);

}  // namespace zk
