#pragma once

// Slow, independent reference computations used only by the tests.

#include <cmath>
#include <algorithm>
#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "zk/calculus.hpp"
#include "zk/grid.hpp"

namespace oracle {

using C = std::complex<double>;

// O(n^4) DFT with the unitary convention of zk::forward_transform.
inline std::vector<C> direct_spectrum(const zk::Field& f) {
  const auto& s = f.spec();
  const int n = s.n;
  const double dx = s.dx(), dk = s.dk();
  std::vector<C> out(s.size());
  for (int im = 0; im < n; ++im)
    for (int ij = 0; ij < n; ++ij) {
      const double xi = s.freq_index(ij) * dk, eta = s.freq_index(im) * dk;
      C acc = 0.0;
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) acc += f.at(ix, iy) * std::polar(1.0, -(xi * s.x(ix) + eta * s.x(iy)));
      out[static_cast<std::size_t>(im) * n + ij] = acc * dx * dx / (2.0 * M_PI);
    }
  return out;
}

// Triple-loop mixed norm for a trajectory; order is outermost first.
inline double triple_loop_norm(const zk::Trajectory& tr, const zk::NormTriple& nt) {
  const int n = tr.spec.n;
  const int nt_ = static_cast<int>(tr.size());
  const double dx = tr.spec.dx();
  auto val = [&](int a, int b, int c) {
    // a, b, c index the axes in `nt.order`
    int idx[3];
    idx[static_cast<int>(nt.order[0])] = a;
    idx[static_cast<int>(nt.order[1])] = b;
    idx[static_cast<int>(nt.order[2])] = c;
    return std::abs(tr.fields[idx[2]].at(idx[0], idx[1]));
  };
  auto extent = [&](zk::Axis ax) { return ax == zk::Axis::T ? nt_ : n; };
  auto weight = [&](zk::Axis ax, int i) {
    if (ax != zk::Axis::T) return dx;
    if (nt_ == 1) return 1.0;
    double w = 0.0;
    if (i > 0) w += 0.5 * (tr.times[i] - tr.times[i - 1]);
    if (i + 1 < nt_) w += 0.5 * (tr.times[i + 1] - tr.times[i]);
    return w;
  };
  auto reduce = [&](zk::Axis ax, double p, const std::function<double(int)>& g) {
    double acc = 0.0;
    for (int i = 0; i < extent(ax); ++i) {
      const double v = g(i);
      acc = p == zk::kInf ? std::max(acc, v) : acc + weight(ax, i) * std::pow(v, p);
    }
    return p == zk::kInf ? acc : std::pow(acc, 1.0 / p);
  };
  return reduce(nt.order[0], nt.exponents[0], [&](int a) {
    return reduce(nt.order[1], nt.exponents[1], [&](int b) {
      return reduce(nt.order[2], nt.exponents[2], [&](int c) { return val(a, b, c); });
    });
  });
}

// Radial shooting for Q'' + Q'/r - Q + Q^{k+1} = 0, Q'(0) = 0, Q -> 0.
struct RadialProfile {
  double q0 = 0.0;
  double mass = 0.0;       // 2 pi int Q^2 r dr
  double grad_sq = 0.0;    // 2 pi int Q'^2 r dr
  std::vector<double> r, q;
};

namespace detail {

// Dormand-Prince 5(4) with step control on y = (Q, Q', m, g).
// Returns +1 when Q crosses zero (q0 too big), -1 when Q' turns positive
// (too small), 0 if r_max is reached first.
inline int shoot(double q0, int k, double r_max, RadialProfile* keep) {
  using V = std::array<double, 4>;
  auto f = [k](double r, const V& y) {
    const double q = y[0], p = y[1];
    V d;
    d[0] = p;
    d[1] = q - std::pow(std::abs(q), k) * q - p / r;
    d[2] = 2.0 * M_PI * q * q * r;
    d[3] = 2.0 * M_PI * p * p * r;
    return d;
  };
  // Series start away from the singular point.
  const double r0 = 1e-4;
  const double q2 = 0.5 * (q0 - std::pow(q0, k + 1));
  V y{q0 + 0.5 * q2 * r0 * r0, q2 * r0, M_PI * q0 * q0 * r0 * r0, 0.0};
  double r = r0, h = 1e-3;
  static const double a[7][6] = {{0, 0, 0, 0, 0, 0},
                                 {1.0 / 5, 0, 0, 0, 0, 0},
                                 {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
                                 {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
                                 {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
                                 {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
                                 {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double c[7] = {0, 0.2, 0.3, 0.8, 8.0 / 9, 1.0, 1.0};
  static const double b5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
  static const double b4[7] = {5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
  if (keep) {
    keep->r.assign(1, r);
    keep->q.assign(1, y[0]);
  }
  while (r < r_max) {
    h = std::min(h, r_max - r);
    std::array<V, 7> K;
    for (int s = 0; s < 7; ++s) {
      V ys = y;
      for (int j = 0; j < s; ++j)
        for (int i = 0; i < 4; ++i) ys[i] += h * a[s][j] * K[j][i];
      K[s] = f(r + c[s] * h, ys);
    }
    V y5 = y, y4 = y;
    for (int s = 0; s < 7; ++s)
      for (int i = 0; i < 4; ++i) {
        y5[i] += h * b5[s] * K[s][i];
        y4[i] += h * b4[s] * K[s][i];
      }
    double err = 0.0;
    for (int i = 0; i < 2; ++i) err = std::max(err, std::abs(y5[i] - y4[i]) / (1e-13 + 1e-11 * std::abs(y5[i])));
    if (err <= 1.0) {
      r += h;
      y = y5;
      if (keep) {
        keep->r.push_back(r);
        keep->q.push_back(y[0]);
        keep->mass = y[2];
        keep->grad_sq = y[3];
      }
      if (y[0] < 0.0) return +1;
      if (y[1] > 0.0) return -1;
    }
    h *= std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
  }
  return 0;
}

}  // namespace detail

inline RadialProfile radial_ground_state(int k, double r_max = 30.0) {
  double lo = 1.0, hi = 1.0;
  while (detail::shoot(hi, k, r_max, nullptr) <= 0) hi *= 1.5;
  while (detail::shoot(lo, k, r_max, nullptr) >= 0) lo /= 1.5;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (detail::shoot(mid, k, r_max, nullptr) > 0 ? hi : lo) = mid;
  }
  RadialProfile out;
  out.q0 = lo;
  detail::shoot(lo, k, r_max, &out);
  return out;
}

}  // namespace oracle
