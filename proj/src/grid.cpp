#include "zk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "zk/error.hpp"
#include "zk/spectral.hpp"

namespace zk {

GridSpec::GridSpec(int n_, double box_) : n(n_), box(box_) {
  require(n >= 8 && n % 2 == 0, "grid size must be an even integer >= 8, got " + std::to_string(n));
  require(std::isfinite(box) && box > 0.0, "box half-length must be positive");
}

double GridSpec::dk() const { return std::numbers::pi / box; }

Rational::Rational(std::int64_t num_, std::int64_t den_) : num(num_), den(den_) {
  require(den > 0 && num > 0, "rational must be positive");
  const auto g = std::gcd(num, den);
  num /= g;
  den /= g;
}

Rational Rational::exact_for_degree(int degree) { return Rational(degree + 1, 2); }

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text), 1);
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    fail(ErrorCode::InvalidArgument, "cannot parse rational '" + text + "'");
  }
}

std::string Rational::str() const {
  std::ostringstream os;
  os << num;
  if (den != 1) os << '/' << den;
  return os.str();
}

Field::Field(GridSpec spec, std::vector<double> samples) : spec_(spec), samples_(std::move(samples)) {
  require(samples_.size() == spec_.size(), "field sample count does not match n^2");
  for (double v : samples_)
    if (!std::isfinite(v)) fail(ErrorCode::Numeric, "field contains a non-finite sample");
}

Field Field::zeros(GridSpec spec) { return Field(spec, std::vector<double>(spec.size(), 0.0)); }

Field Field::from_function(GridSpec spec, const std::function<double(double, double)>& fn) {
  std::vector<double> s(spec.size());
  for (int iy = 0; iy < spec.n; ++iy)
    for (int ix = 0; ix < spec.n; ++ix) s[static_cast<std::size_t>(iy) * spec.n + ix] = fn(spec.x(ix), spec.x(iy));
  return Field(spec, std::move(s));
}

Field Field::scaled(double c) const {
  std::vector<double> s(samples_);
  for (double& v : s) v *= c;
  return Field(spec_, std::move(s));
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

Spectrum::Spectrum(GridSpec spec, std::vector<Complex> coeffs) : spec_(spec), coeffs_(std::move(coeffs)) {
  require(coeffs_.size() == spec_.size(), "spectrum coefficient count does not match n^2");
}

Spectrum Spectrum::zeros(GridSpec spec) { return Spectrum(spec, std::vector<Complex>(spec.size())); }

std::size_t Spectrum::slot(int j, int m) const {
  const int n = spec_.n;
  require(j >= -n / 2 && j < n / 2 && m >= -n / 2 && m < n / 2, "frequency index out of range");
  return static_cast<std::size_t>((m + n) % n) * n + static_cast<std::size_t>((j + n) % n);
}

Complex Spectrum::at(int j, int m) const { return coeffs_[slot(j, m)]; }
Complex& Spectrum::at(int j, int m) { return coeffs_[slot(j, m)]; }

double Spectrum::symmetry_defect() const {
  const int n = spec_.n;
  double scale = 0.0, defect = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  for (int im = 0; im < n; ++im)
    for (int ij = 0; ij < n; ++ij) {
      const Complex a = coeffs_[static_cast<std::size_t>(im) * n + ij];
      const Complex b = coeffs_[static_cast<std::size_t>((n - im) % n) * n + (n - ij) % n];
      defect = std::max(defect, std::abs(a - std::conj(b)));
    }
  return defect / scale;
}

namespace {
// Unitary scale and centre phase: c_unitary = dx^2 / (2 pi) (-1)^(j+m) DFT.
double unitary_scale(const GridSpec& spec) { return spec.dx() * spec.dx() / (2.0 * std::numbers::pi); }
double parity(int a, int b) { return ((a + b) & 1) ? -1.0 : 1.0; }
}  // namespace

Spectrum forward_transform(const Field& f) {
  const GridSpec& spec = f.spec();
  const int n = spec.n;
  const HalfSpectrum h = to_half(f);
  const double scale = unitary_scale(spec);
  std::vector<Complex> full(spec.size());
  for (int im = 0; im < n; ++im)
    for (int ij = 0; ij < n; ++ij) {
      Complex c = ij <= n / 2 ? h(im, ij) : std::conj(h((n - im) % n, n - ij));
      full[static_cast<std::size_t>(im) * n + ij] = scale * parity(im, ij) * c;
    }
  return Spectrum(spec, std::move(full));
}

Field inverse_transform(const Spectrum& s) {
  const double defect = s.symmetry_defect();
  if (defect > 1e-12)
    fail(ErrorCode::InvalidArgument,
         "spectrum is not conjugate-symmetric (relative defect " + std::to_string(defect) + ")");
  const GridSpec& spec = s.spec();
  const int n = spec.n;
  HalfSpectrum h{spec, std::vector<Complex>(static_cast<std::size_t>(n) * (n / 2 + 1))};
  const double inv = 1.0 / unitary_scale(spec);
  const auto coeffs = s.coeffs();
  for (int im = 0; im < n; ++im)
    for (int ij = 0; ij <= n / 2; ++ij) h(im, ij) = inv * parity(im, ij) * coeffs[static_cast<std::size_t>(im) * n + ij];
  return from_half(h);
}

Spectrum dealias(const Spectrum& s, Rational pad_ratio) {
  const GridSpec& spec = s.spec();
  const int n = spec.n;
  Spectrum out = s;
  auto& c = out.mutable_coeffs();
  for (int im = 0; im < n; ++im)
    for (int ij = 0; ij < n; ++ij) {
      const std::int64_t mag = std::max(std::abs(spec.freq_index(ij)), std::abs(spec.freq_index(im)));
      if (2 * mag * pad_ratio.num > static_cast<std::int64_t>(n) * pad_ratio.den) c[static_cast<std::size_t>(im) * n + ij] = 0.0;
    }
  return out;
}

Field power_dealiased(const Field& u, int power, Rational pad_ratio) {
  require(power >= 1, "power must be positive");
  return from_half(padded_power(to_half(u), power, pad_ratio));
}

Field resample_scaled(const Field& f, double a) {
  require(std::isfinite(a) && a > 0.0, "scale factor must be positive");
  const GridSpec& spec = f.spec();
  const int n = spec.n;
  const int nc = n / 2 + 1;
  const double L = spec.box;
  const double dk = spec.dk();
  const HalfSpectrum h = to_half(f);

  // Columns of points that land inside the box.
  std::vector<int> inside;
  std::vector<double> arg(n);  // a x + L
  for (int i = 0; i < n; ++i) {
    const double ax = a * spec.x(i);
    arg[i] = ax + L;
    if (ax >= -L && ax < L) inside.push_back(i);
  }

  // Stage 1: along x. A[r][i] = sum_j wt_j c(r, j) E_x(j, a x_i).
  std::vector<Complex> ex(static_cast<std::size_t>(nc) * n);
  for (int j = 0; j < nc; ++j)
    for (int i : inside) {
      const double ph = j * dk * arg[i];
      ex[static_cast<std::size_t>(j) * n + i] =
          j == n / 2 ? Complex(std::cos(ph), 0.0) : (j == 0 ? Complex(1.0, 0.0) : 2.0 * Complex(std::cos(ph), std::sin(ph)));
    }
  std::vector<Complex> A(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    Complex* arow = &A[static_cast<std::size_t>(r) * n];
    for (int j = 0; j < nc; ++j) {
      const Complex c = h(r, j);
      if (c == Complex(0.0)) continue;
      const Complex* erow = &ex[static_cast<std::size_t>(j) * n];
      for (int i : inside) arow[i] += c * erow[i];
    }
  }
  // Stage 2: along y, real part.
  std::vector<double> out(spec.size(), 0.0);
  const double norm = 1.0 / (static_cast<double>(n) * n);
  std::vector<Complex> ey(n);
  for (int l : inside) {
    for (int r = 0; r < n; ++r) {
      const int m = spec.freq_index(r);
      const double ph = m * dk * arg[l];
      ey[r] = r == n / 2 ? Complex(std::cos(ph), 0.0) : Complex(std::cos(ph), std::sin(ph));
    }
    double* orow = &out[static_cast<std::size_t>(l) * n];
    for (int r = 0; r < n; ++r) {
      const Complex e = ey[r];
      const Complex* arow = &A[static_cast<std::size_t>(r) * n];
      for (int i : inside) orow[i] += (e * arow[i]).real();
    }
    for (int i : inside) orow[i] *= norm;
  }
  return Field(spec, std::move(out));
}

Field translate(const Field& f, double sx, double sy) {
  HalfSpectrum h = to_half(f);
  const Wavenumbers w(f.spec());
  apply_multiplier(h, w, true, [&](double kx, double ky) {
    const double ph = -(kx * sx + ky * sy);
    return Complex(std::cos(ph), std::sin(ph));
  });
  return from_half(h);
}

double boundary_fraction(const Field& f, double band) {
  const GridSpec& spec = f.spec();
  const double edge = (1.0 - band) * spec.box;
  double total = 0.0, outer = 0.0;
  for (int iy = 0; iy < spec.n; ++iy) {
    const bool yout = std::abs(spec.x(iy)) > edge;
    for (int ix = 0; ix < spec.n; ++ix) {
      const double v = f.at(ix, iy);
      total += v * v;
      if (yout || std::abs(spec.x(ix)) > edge) outer += v * v;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace zk
