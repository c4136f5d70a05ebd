#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "zk/grid.hpp"

namespace testing_support {

inline zk::Field gaussian(const zk::GridSpec& s, double width, double amp = 1.0, double x0 = 0.0, double y0 = 0.0) {
  return zk::Field::from_function(s, [=](double x, double y) {
    return amp * std::exp(-((x - x0) * (x - x0) + (y - y0) * (y - y0)) / (2.0 * width * width));
  });
}

// White noise samples; not band-limited.
inline zk::Field noise(const zk::GridSpec& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(s.size());
  for (auto& x : v) x = d(rng);
  return zk::Field(s, std::move(v));
}

// Random trigonometric polynomial with |j|, |m| <= band.
inline zk::Field band_limited(const zk::GridSpec& s, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  struct Mode {
    int j, m;
    double a, b;
  };
  std::vector<Mode> modes;
  for (int j = 0; j <= band; ++j)
    for (int m = -band; m <= band; ++m) modes.push_back({j, m, d(rng), d(rng)});
  const double kk = s.dk();
  return zk::Field::from_function(s, [&](double x, double y) {
    double v = 0.0;
    for (const auto& md : modes) {
      const double ph = kk * (md.j * x + md.m * y);
      v += md.a * std::cos(ph) + md.b * std::sin(ph);
    }
    return v;
  });
}

inline double max_abs_diff(const zk::Field& a, const zk::Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) m = std::max(m, std::abs(a.samples()[i] - b.samples()[i]));
  return m;
}

inline double rel_l2_diff(const zk::Field& a, const zk::Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) {
    const double d = a.samples()[i] - b.samples()[i];
    num += d * d;
    den += b.samples()[i] * b.samples()[i];
  }
  return std::sqrt(num / den);
}

}  // namespace testing_support
