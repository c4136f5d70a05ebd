#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace zk {

using Complex = std::complex<double>;

// Square periodic box [-L, L)^2 sampled with n points per axis.
struct GridSpec {
  int n = 0;
  double box = 0.0;  // half-length L

  GridSpec() = default;
  GridSpec(int n_, double box_);

  double dx() const { return 2.0 * box / n; }
  double dk() const;  // pi / L
  double x(int i) const { return -box + i * dx(); }
  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
  // Signed frequency index of storage slot i (FFT order): [-n/2, n/2).
  int freq_index(int i) const { return i < n / 2 ? i : i - n; }

  bool operator==(const GridSpec& o) const { return n == o.n && box == o.box; }
};

// Exact positive ratio used for zero-padding factors such as 3/2.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t num_, std::int64_t den_ = 1);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // Smallest ratio that de-aliases a product of `degree` band-limited factors.
  static Rational exact_for_degree(int degree);
  static Rational parse(const std::string& text);
  std::string str() const;
};

// Real samples u(x_ix, y_iy), row-major with the y index outermost.
class Field {
 public:
  Field() = default;
  Field(GridSpec spec, std::vector<double> samples);

  static Field zeros(GridSpec spec);
  static Field from_function(GridSpec spec, const std::function<double(double, double)>& fn);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> samples() const { return samples_; }
  std::vector<double>& mutable_samples() { return samples_; }
  double at(int ix, int iy) const { return samples_[static_cast<std::size_t>(iy) * spec_.n + ix]; }

  Field scaled(double c) const;
  double max_abs() const;

 private:
  GridSpec spec_;
  std::vector<double> samples_;
};

// Unitary Fourier coefficients of a field. Slot (im, ij) in FFT order holds the
// coefficient at (xi, eta) = (pi/L)(freq_index(ij), freq_index(im)), normalised
// so that sum |u|^2 dx^2 == sum |c|^2 (pi/L)^2 and the phase is referred to the
// box centre (continuum transform with 1/(2 pi) in front).
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(GridSpec spec, std::vector<Complex> coeffs);

  static Spectrum zeros(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::vector<Complex>& mutable_coeffs() { return coeffs_; }
  Complex at(int j, int m) const;  // signed frequency indices
  Complex& at(int j, int m);

  // max |c(-j,-m) - conj(c(j,m))| relative to max |c|.
  double symmetry_defect() const;

 private:
  std::size_t slot(int j, int m) const;
  GridSpec spec_;
  std::vector<Complex> coeffs_;
};

Spectrum forward_transform(const Field& f);
// Throws when the coefficients are not conjugate-symmetric (relative defect above 1e-12).
Field inverse_transform(const Spectrum& s);
// Zeroes every coefficient with max(|j|, |m|) > n / (2 pad_ratio).
Spectrum dealias(const Spectrum& s, Rational pad_ratio);

// Band-limited projection of u^power onto the grid, with the product formed on a
// grid enlarged by pad_ratio. Alias-free whenever pad_ratio >= (power+1)/2.
Field power_dealiased(const Field& u, int power, Rational pad_ratio);

// Samples g(x, y) = f(a x, a y) from the trigonometric interpolant of f; points
// mapped outside [-L, L)^2 are set to zero.
Field resample_scaled(const Field& f, double a);

// Shifts f by (sx, sy) length units using the interpolant: g(x, y) = f(x - sx, y - sy).
Field translate(const Field& f, double sx, double sy);

// Fraction of sum u^2 carried by points with max(|x|, |y|) > (1 - band) L.
double boundary_fraction(const Field& f, double band = 0.1);

}  // namespace zk
