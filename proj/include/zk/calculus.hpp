#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "zk/grid.hpp"

namespace zk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Axis { X, Y, T };

// Exponent triple for a mixed space-time Lebesgue norm. exponents[i] applies to
// order[i]; order runs from the outermost integration to the innermost.
struct NormTriple {
  std::array<double, 3> exponents{2.0, 2.0, 2.0};
  std::array<Axis, 3> order{Axis::X, Axis::Y, Axis::T};

  void validate() const;
  std::string str() const;  // e.g. "L^4_x L^inf_y L^2_T"
};

// Ordered snapshots on one grid with strictly increasing times.
struct Trajectory {
  GridSpec spec;
  std::vector<double> times;
  std::vector<Field> fields;

  void push(double t, Field f);
  std::size_t size() const { return times.size(); }
};

// Streaming evaluation of a mixed norm: snapshots are added one at a time in
// increasing time; the time axis uses the trapezoid rule, space uses dx weights.
class MixedNormAccumulator {
 public:
  MixedNormAccumulator(GridSpec spec, NormTriple norm);
  void add(double t, const Field& f);
  double value() const;
  std::size_t count() const { return count_; }

 private:
  std::vector<double> reduce_inner(const Field& f) const;

  GridSpec spec_;
  NormTriple norm_;
  int time_pos_;
  std::size_t count_ = 0;
  double last_t_ = 0.0;
  std::vector<double> last_;  // |R|^p (or |R|) of the previous snapshot
  std::vector<double> acc_;
};

double mass(const Field& f);
// Integral of |grad u|^2 via spectral multipliers.
double gradient_l2_squared(const Field& f);

enum class PowerIntegral { Quadrature, Spectral };
// Integral of u^p. Spectral forms the power alias-free and integrates the
// band-limited result exactly.
double power_integral(const Field& f, int p, PowerIntegral method = PowerIntegral::Quadrature);

double energy(const Field& f, int k, PowerIntegral method = PowerIntegral::Quadrature);

// H^s (or homogeneous H^s) norm, s in [-2, 4]. The homogeneous norm gives the
// zero mode weight 0 and rejects s <= 0 when the mean is nonzero.
double sobolev_norm(const Field& f, double s, bool homogeneous);

Field fractional_dx(const Field& f, double s);
Field fractional_dy(const Field& f, double s);
Field partial_x(const Field& f);
Field partial_y(const Field& f);
Field laplacian(const Field& f);

// Spatial L^p norm (p = kInf gives the grid maximum).
double lp_norm(const Field& f, double p);

double mixed_norm(const Trajectory& traj, const NormTriple& norm);

// The seven trajectory norms of the local theory at regularity s and power k.
struct ResolutionNorms {
  static constexpr int kCount = 7;
  std::array<std::string, kCount> names;
  std::array<double, kCount> values{};
  std::array<bool, kCount> finite{};
  double time_exponent_u = 0.0;   // 3k/2 + eps
  double time_exponent_ux = 0.0;  // 3k/(k+2)
  double space_exponent = 0.0;    // k/2
};

ResolutionNorms resolution_norms(const Trajectory& traj, double s, int k, double eps = 0.01);

struct Rescaled {
  Field field;
  bool boundary_warning = false;
};

// u_lambda = lambda^{2/k} f(lambda x, lambda y), sampled on the same grid.
Rescaled rescale(const Field& f, double lambda, int k);

}  // namespace zk
