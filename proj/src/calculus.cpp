#include "zk/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zk/error.hpp"
#include "zk/spectral.hpp"

namespace zk {

void NormTriple::validate() const {
  for (double p : exponents) require(p == kInf || (std::isfinite(p) && p >= 1.0), "norm exponents must lie in [1, inf]");
  std::array<int, 3> seen{};
  for (Axis a : order) ++seen[static_cast<int>(a)];
  require(seen == std::array<int, 3>{1, 1, 1}, "norm order must be a permutation of (x, y, T)");
}

std::string NormTriple::str() const {
  std::ostringstream os;
  for (int i = 0; i < 3; ++i) {
    if (i) os << ' ';
    os << "L^";
    if (exponents[i] == kInf)
      os << "inf";
    else
      os << exponents[i];
    os << '_' << (order[i] == Axis::X ? "x" : order[i] == Axis::Y ? "y" : "T");
  }
  return os.str();
}

void Trajectory::push(double t, Field f) {
  if (fields.empty() && spec.n == 0) spec = f.spec();
  require(f.spec() == spec, "trajectory snapshots must share one grid");
  require(times.empty() || t > times.back(), "trajectory times must be strictly increasing");
  times.push_back(t);
  fields.push_back(std::move(f));
}

namespace {

double accumulate_power(double acc, double v, double p) { return p == kInf ? std::max(acc, v) : acc + std::pow(v, p); }

double finish_power(double acc, double p, double weight) { return p == kInf ? acc : std::pow(acc * weight, 1.0 / p); }

// Reduces axis `axis` (X or Y) of an n x n array stored [iy][ix].
std::vector<double> reduce_plane(const std::vector<double>& a, int n, Axis axis, double p, double w) {
  std::vector<double> out(n, 0.0);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double v = std::abs(a[static_cast<std::size_t>(iy) * n + ix]);
      double& slot = axis == Axis::X ? out[iy] : out[ix];
      slot = accumulate_power(slot, v, p);
    }
  for (double& v : out) v = finish_power(v, p, w);
  return out;
}

double reduce_line(const std::vector<double>& a, double p, double w) {
  double acc = 0.0;
  for (double v : a) acc = accumulate_power(acc, std::abs(v), p);
  return finish_power(acc, p, w);
}

}  // namespace

MixedNormAccumulator::MixedNormAccumulator(GridSpec spec, NormTriple norm) : spec_(spec), norm_(norm) {
  norm_.validate();
  time_pos_ = static_cast<int>(std::find(norm_.order.begin(), norm_.order.end(), Axis::T) - norm_.order.begin());
}

std::vector<double> MixedNormAccumulator::reduce_inner(const Field& f) const {
  const int n = spec_.n;
  const double dx = spec_.dx();
  std::vector<double> a(f.samples().begin(), f.samples().end());
  for (double& v : a) v = std::abs(v);
  if (time_pos_ == 2) return a;
  if (time_pos_ == 1) return reduce_plane(a, n, norm_.order[2], norm_.exponents[2], dx);
  auto line = reduce_plane(a, n, norm_.order[2], norm_.exponents[2], dx);
  return {reduce_line(line, norm_.exponents[1], dx)};
}

void MixedNormAccumulator::add(double t, const Field& f) {
  require(f.spec() == spec_, "snapshot grid does not match accumulator grid");
  require(count_ == 0 || t > last_t_, "snapshot times must be strictly increasing");
  const double p = norm_.exponents[time_pos_];
  std::vector<double> cur = reduce_inner(f);
  if (p != kInf)
    for (double& v : cur) v = std::pow(v, p);
  if (acc_.empty()) acc_.assign(cur.size(), 0.0);
  if (p == kInf) {
    for (std::size_t i = 0; i < cur.size(); ++i) acc_[i] = std::max(acc_[i], cur[i]);
  } else if (count_ > 0) {
    const double half = 0.5 * (t - last_t_);
    for (std::size_t i = 0; i < cur.size(); ++i) acc_[i] += half * (last_[i] + cur[i]);
  }
  last_ = std::move(cur);
  last_t_ = t;
  ++count_;
}

double MixedNormAccumulator::value() const {
  const double p = norm_.exponents[time_pos_];
  require(count_ >= 1, "mixed norm needs at least one snapshot");
  if (p != kInf && count_ < 2) fail(ErrorCode::InvalidArgument, "a time-integrated norm needs at least 2 snapshots");
  std::vector<double> r = acc_;
  if (p != kInf)
    for (double& v : r) v = std::pow(v, 1.0 / p);
  const int n = spec_.n;
  const double dx = spec_.dx();
  if (time_pos_ == 0) return r[0];
  if (time_pos_ == 1) return reduce_line(r, norm_.exponents[0], dx);
  auto line = reduce_plane(r, n, norm_.order[1], norm_.exponents[1], dx);
  return reduce_line(line, norm_.exponents[0], dx);
}

double mass(const Field& f) {
  const double dx = f.spec().dx();
  CompensatedSum acc;
  for (double v : f.samples()) acc.add(v * v);
  return acc.value() * dx * dx;
}

double gradient_l2_squared(const Field& f) {
  const HalfSpectrum h = to_half(f);
  const Wavenumbers w(f.spec());
  return half_to_l2sq(f.spec(), weighted_energy(h, w, [](double kx, double ky) { return kx * kx + ky * ky; }));
}

double power_integral(const Field& f, int p, PowerIntegral method) {
  require(p >= 1, "power must be positive");
  const double dx = f.spec().dx();
  if (method == PowerIntegral::Quadrature) {
    CompensatedSum acc;
    for (double v : f.samples()) {
      double r = v;
      for (int i = 1; i < p; ++i) r *= v;
      acc.add(r);
    }
    return acc.value() * dx * dx;
  }
  const HalfSpectrum prod = padded_power(to_half(f), p, exact_pad(f.spec().n, p));
  return prod(0, 0).real() * dx * dx;
}

double energy(const Field& f, int k, PowerIntegral method) {
  require(k >= 1, "nonlinearity power k must be >= 1");
  return 0.5 * gradient_l2_squared(f) - power_integral(f, k + 2, method) / (k + 2);
}

double sobolev_norm(const Field& f, double s, bool homogeneous) {
  require(s >= -2.0 && s <= 4.0, "Sobolev index must lie in [-2, 4]");
  const HalfSpectrum h = to_half(f);
  const Wavenumbers w(f.spec());
  if (homogeneous && s <= 0.0) {
    double scale = 0.0;
    for (const auto& c : h.c) scale = std::max(scale, std::abs(c));
    if (std::abs(h(0, 0)) > 1e-12 * scale)
      fail(ErrorCode::Domain, "homogeneous norm with s <= 0 requires a zero-mean field");
  }
  const double e = weighted_energy(h, w, [&](double kx, double ky) {
    const double r2 = kx * kx + ky * ky;
    if (homogeneous) return r2 == 0.0 ? 0.0 : std::pow(r2, s);
    return std::pow(1.0 + r2, s);
  });
  return std::sqrt(half_to_l2sq(f.spec(), e));
}

namespace {

template <class Fn>
Field multiply(const Field& f, bool odd, Fn&& mult) {
  HalfSpectrum h = to_half(f);
  apply_multiplier(h, Wavenumbers(f.spec()), odd, std::forward<Fn>(mult));
  return from_half(h);
}

double abs_pow(double k, double s) { return s == 0.0 ? 1.0 : std::pow(std::abs(k), s); }

}  // namespace

Field fractional_dx(const Field& f, double s) {
  require(s >= 0.0 && s <= 2.0, "fractional order must lie in [0, 2]");
  return multiply(f, false, [s](double kx, double) { return Complex(abs_pow(kx, s), 0.0); });
}

Field fractional_dy(const Field& f, double s) {
  require(s >= 0.0 && s <= 2.0, "fractional order must lie in [0, 2]");
  return multiply(f, false, [s](double, double ky) { return Complex(abs_pow(ky, s), 0.0); });
}

Field partial_x(const Field& f) {
  return multiply(f, true, [](double kx, double) { return Complex(0.0, kx); });
}

Field partial_y(const Field& f) {
  return multiply(f, true, [](double, double ky) { return Complex(0.0, ky); });
}

Field laplacian(const Field& f) {
  return multiply(f, false, [](double kx, double ky) { return Complex(-(kx * kx + ky * ky), 0.0); });
}

double lp_norm(const Field& f, double p) {
  require(p == kInf || p >= 1.0, "L^p exponent must be >= 1");
  if (p == kInf) return f.max_abs();
  const double dx = f.spec().dx();
  CompensatedSum acc;
  for (double v : f.samples()) acc.add(std::pow(std::abs(v), p));
  return std::pow(acc.value() * dx * dx, 1.0 / p);
}

double mixed_norm(const Trajectory& traj, const NormTriple& norm) {
  require(traj.size() >= 1, "mixed norm of an empty trajectory");
  MixedNormAccumulator acc(traj.spec, norm);
  for (std::size_t i = 0; i < traj.size(); ++i) acc.add(traj.times[i], traj.fields[i]);
  return acc.value();
}

ResolutionNorms resolution_norms(const Trajectory& traj, double s, int k, double eps) {
  require(k >= 2, "resolution norms need k >= 2 so that k/2 >= 1");
  require(traj.size() >= 2, "resolution norms need at least 2 snapshots");
  ResolutionNorms r;
  r.time_exponent_u = 1.5 * k + eps;
  r.time_exponent_ux = 3.0 * k / (k + 2.0);
  r.space_exponent = 0.5 * k;

  const NormTriple tu{{r.time_exponent_u, kInf, kInf}, {Axis::T, Axis::X, Axis::Y}};
  const NormTriple xu{{r.space_exponent, kInf, kInf}, {Axis::X, Axis::Y, Axis::T}};
  const NormTriple tux{{r.time_exponent_ux, kInf, kInf}, {Axis::T, Axis::X, Axis::Y}};
  const NormTriple smooth{{kInf, 2.0, 2.0}, {Axis::X, Axis::Y, Axis::T}};

  MixedNormAccumulator a1(traj.spec, tu), a2(traj.spec, xu), a3(traj.spec, tux), a4(traj.spec, smooth),
      a5(traj.spec, smooth), a6(traj.spec, smooth);
  double hs_max = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const Field& u = traj.fields[i];
    hs_max = std::max(hs_max, sobolev_norm(u, s, false));
    const Field ux = partial_x(u);
    a1.add(t, u);
    a2.add(t, u);
    a3.add(t, ux);
    a4.add(t, ux);
    a5.add(t, fractional_dx(ux, s));
    a6.add(t, fractional_dy(ux, s));
  }
  std::ostringstream e1, e2, e3;
  e1 << r.time_exponent_u;
  e2 << r.space_exponent;
  e3 << r.time_exponent_ux;
  r.names = {"u in L^inf_T H^s",
             "u in L^" + e1.str() + "_T L^inf_xy",
             "u in L^" + e2.str() + "_x L^inf_yT",
             "u_x in L^" + e3.str() + "_T L^inf_xy",
             "u_x in L^inf_x L^2_yT",
             "D_x^s u_x in L^inf_x L^2_yT",
             "D_y^s u_x in L^inf_x L^2_yT"};
  r.values = {hs_max, a1.value(), a2.value(), a3.value(), a4.value(), a5.value(), a6.value()};
  for (int i = 0; i < ResolutionNorms::kCount; ++i) r.finite[i] = std::isfinite(r.values[i]);
  return r;
}

namespace {
double edge_max(const Field& f) {
  const int n = f.spec().n;
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    m = std::max({m, std::abs(f.at(i, 0)), std::abs(f.at(i, n - 1)), std::abs(f.at(0, i)), std::abs(f.at(n - 1, i))});
  return m;
}
}  // namespace

Rescaled rescale(const Field& f, double lambda, int k) {
  require(std::isfinite(lambda) && lambda > 0.0, "scaling parameter must be positive");
  require(k >= 1, "nonlinearity power k must be >= 1");
  if (lambda == 1.0) return {f, edge_max(f) > 1e-8 * f.max_abs()};
  Rescaled out{resample_scaled(f, lambda).scaled(std::pow(lambda, 2.0 / k)), false};
  const double top = out.field.max_abs();
  out.boundary_warning = edge_max(out.field) > 1e-8 * top || edge_max(f) > 1e-8 * f.max_abs();
  return out;
}

}  // namespace zk
