#pragma once

// Half-plane spectral workspace shared by the time integrator, the linear group
// and the ground-state solver. Coefficients follow the FFTW r2c layout and are
// unnormalised: c = DFT(u), u = IDFT(c) / n^2.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "zk/grid.hpp"

namespace zk {

// Neumaier-compensated running sum. Plain accumulation over ~10^5 small terms
// drifts by ~1e-13 relative, enough to mask conservation errors.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct HalfSpectrum {
  GridSpec spec;
  std::vector<Complex> c;  // n rows (y frequency, FFT order) x (n/2 + 1) columns

  int cols() const { return spec.n / 2 + 1; }
  Complex& operator()(int row, int col) { return c[static_cast<std::size_t>(row) * cols() + col]; }
  Complex operator()(int row, int col) const { return c[static_cast<std::size_t>(row) * cols() + col]; }
};

// Wavenumber tables for the half layout. The "odd" tables zero the Nyquist
// entry so that odd symbols (i xi, xi^3 + xi eta^2) keep real fields real.
struct Wavenumbers {
  std::vector<double> kx;      // n/2 + 1, true magnitude
  std::vector<double> kx_odd;  // Nyquist zeroed
  std::vector<double> ky;      // n, signed, Nyquist = -n/2 pi/L
  std::vector<double> ky_odd;

  explicit Wavenumbers(const GridSpec& spec);
};

HalfSpectrum to_half(const Field& f);
Field from_half(const HalfSpectrum& h);

// Applies m(xi, eta) to every coefficient in place.
template <class Fn>
void apply_multiplier(HalfSpectrum& h, const Wavenumbers& w, bool odd, Fn&& mult) {
  const int n = h.spec.n;
  const int nc = h.cols();
  const auto& kx = odd ? w.kx_odd : w.kx;
  const auto& ky = odd ? w.ky_odd : w.ky;
  for (int r = 0; r < n; ++r) {
    Complex* row = &h.c[static_cast<std::size_t>(r) * nc];
    for (int j = 0; j < nc; ++j) row[j] *= mult(kx[j], ky[r]);
  }
}

// sum over the full plane of weight(xi, eta) |c|^2, using the conjugate twin of
// every interior column. Weight is evaluated on the even tables.
template <class Fn>
double weighted_energy(const HalfSpectrum& h, const Wavenumbers& w, Fn&& weight) {
  const int n = h.spec.n;
  const int nc = h.cols();
  CompensatedSum acc;
  for (int r = 0; r < n; ++r) {
    const Complex* row = &h.c[static_cast<std::size_t>(r) * nc];
    for (int j = 0; j < nc; ++j) {
      const double mult = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      acc.add(mult * weight(w.kx[j], w.ky[r]) * std::norm(row[j]));
    }
  }
  return acc.value();
}

// Converts a weighted_energy sum into the continuum integral of |.|^2.
inline double half_to_l2sq(const GridSpec& spec, double energy) {
  const double dx = spec.dx();
  const double nn = static_cast<double>(spec.n) * spec.n;
  return energy * dx * dx / nn;
}

// Spectrum of u^power on the same grid computed on a grid enlarged by pad.
// The input is the half spectrum of u; returns the half spectrum of the
// truncated product (Nyquist row and column zeroed).
HalfSpectrum padded_power(const HalfSpectrum& u, int power, Rational pad);
// Same, writing into `out` (resized as needed) to avoid allocation in loops.
void padded_power_into(const HalfSpectrum& u, int power, Rational pad, HalfSpectrum& out);
// Smallest pad M/n with M even and M >= n (degree + 1) / 2.
Rational exact_pad(int n, int degree);
// 2/3-rule variant: truncate u to |index| <= n/3, form the power on the grid.
HalfSpectrum truncated_power(const HalfSpectrum& u, int power);
void truncated_power_into(const HalfSpectrum& u, int power, HalfSpectrum& out);

}  // namespace zk
