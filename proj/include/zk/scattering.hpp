#pragma once

#include <string>
#include <vector>

#include "zk/calculus.hpp"
#include "zk/grid.hpp"

namespace zk {

struct ScatterConfig {
  int k = 3;
  double delta = 0.05;                            // smallness target for |u0|_{L^p'} + |u0|_{H^1}
  std::vector<double> checkpoints{2, 4, 8, 16};   // Cauchy test times (successive doublings)
  std::vector<double> horizons{10, 20, 40};       // T values for M(T)
  double fit_t_min = 2.0;                         // window for the G(u(t)) fit
  double fit_t_max = 16.0;
  double window_boundary_tol = 0.05;              // torus validity: edge-band mass fraction allowed
  double tail_ratio_max = 0.9;
  double decay_ratio_max = 1.1;
  double slope_margin = 0.3;

  double p() const { return 2.0 * (k + 1); }
  double p_dual() const { return 2.0 * (k + 1) / (2.0 * k + 1); }
  double theta() const { return static_cast<double>(k) / (k + 1); }
  double weight_exponent() const { return 2.0 * theta() / 3.0; }
  void validate() const;
};

// |u0|_{L^p'} + |u0|_{H^1}
double smallness(const Field& u0, int k);

// Normalised runs rescale the data to this fraction of delta.
inline constexpr double kSmallnessFraction = 0.99;

// v(t) = U(-t) u(t) for every snapshot.
Trajectory interaction_picture(const Trajectory& traj);

// Scalar diagnostics of every snapshot of a run.
struct ScatterSeries {
  std::vector<double> t;
  std::vector<double> lp;        // |u(t)|_{L^p}
  std::vector<double> G;         // int u^{k+2} / (k+2)
  std::vector<double> boundary;  // boundary_fraction(u(t))
};

// Streaming observer for evolve(): fills the series and keeps the fields at
// the checkpoint times only.
class ScatterRecorder {
 public:
  explicit ScatterRecorder(ScatterConfig cfg);
  void operator()(double t, const Field& u);
  const ScatterSeries& series() const { return series_; }
  const Trajectory& checkpoints() const { return kept_; }

 private:
  ScatterConfig cfg_;
  ScatterSeries series_;
  Trajectory kept_;
};

ScatterSeries scatter_series(const Trajectory& traj, const ScatterConfig& cfg);

struct ScatterState {
  Field f_plus;                     // v at the last checkpoint
  std::vector<double> checkpoints;
  std::vector<double> tail_norms;   // |v(t_{i+1}) - v(t_i)|_{H^1}
  std::vector<double> tail_ratios;
  bool negligible = false;          // every tail below 1e-12 |f_plus|_{H^1}: linear regime
  bool cauchy = false;
  std::string verdict;              // "cauchy", "linear", "no convergence detected"
  double window = 0.0;              // last checkpoint inside the torus validity window
  bool within_window = true;
};

// Requires a snapshot at every checkpoint time.
ScatterState asymptotic_state(const Trajectory& traj, const ScatterConfig& cfg);

struct WeightedDecay {
  std::vector<double> horizons;
  std::vector<double> M_T;     // sup_{t <= T} (1+t)^{2 theta/3} |u(t)|_{L^p}
  std::vector<double> ratios;  // M(T_{i+1}) / M(T_i)
  bool stable = false;
  double window = 0.0;
  bool within_window = true;
};

WeightedDecay weighted_decay(const ScatterSeries& s, const ScatterConfig& cfg);

struct HamiltonianTail {
  std::vector<double> t;
  std::vector<double> G;
  double slope = 0.0;  // least squares d log|G| / d log t over the fit window
  double target = 0.0; // -2k/3
  bool pass = false;
  int fitted_points = 0;
};

HamiltonianTail hamiltonian_tail(const ScatterSeries& s, const ScatterConfig& cfg);

struct ScatterReport {
  ScatterConfig cfg;
  ScatterState state;
  WeightedDecay decay;
  HamiltonianTail tail;
};

std::string scatter_json(const ScatterReport& r);

}  // namespace zk
