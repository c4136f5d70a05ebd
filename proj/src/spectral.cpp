#include "zk/spectral.hpp"

#include <cmath>

#include "fft.hpp"
#include "zk/error.hpp"

namespace zk {

Wavenumbers::Wavenumbers(const GridSpec& spec) {
  const int n = spec.n;
  const double dk = spec.dk();
  kx.resize(n / 2 + 1);
  kx_odd.resize(n / 2 + 1);
  for (int j = 0; j <= n / 2; ++j) {
    kx[j] = j * dk;
    kx_odd[j] = j == n / 2 ? 0.0 : j * dk;
  }
  ky.resize(n);
  ky_odd.resize(n);
  for (int r = 0; r < n; ++r) {
    ky[r] = spec.freq_index(r) * dk;
    ky_odd[r] = r == n / 2 ? 0.0 : ky[r];
  }
}

HalfSpectrum to_half(const Field& f) {
  const int n = f.spec().n;
  HalfSpectrum h{f.spec(), std::vector<Complex>(static_cast<std::size_t>(n) * (n / 2 + 1))};
  detail::real_fft(n).forward(f.samples(), h.c);
  return h;
}

Field from_half(const HalfSpectrum& h) {
  const int n = h.spec.n;
  std::vector<double> out(h.spec.size());
  detail::real_fft(n).backward(h.c, out);
  const double norm = 1.0 / (static_cast<double>(n) * n);
  for (double& v : out) v *= norm;
  return Field(h.spec, std::move(out));
}

namespace {

int padded_size(int n, Rational pad) {
  const std::int64_t scaled = static_cast<std::int64_t>(n) * pad.num;
  require(scaled % pad.den == 0, "pad ratio " + pad.str() + " does not give an integer grid for n = " + std::to_string(n));
  const auto m = static_cast<int>(scaled / pad.den);
  require(m >= n && m % 2 == 0, "padded grid must be even and at least n");
  return m;
}

// v <- (scale v)^power
void scale_raise(double* v, std::size_t len, double scale, int power) {
  for (std::size_t i = 0; i < len; ++i) {
    const double b = v[i] * scale;
    double r = b;
    for (int p = 1; p < power; ++p) r *= b;
    v[i] = r;
  }
}

void ensure_shape(HalfSpectrum& out, const GridSpec& spec) {
  out.spec = spec;
  out.c.resize(static_cast<std::size_t>(spec.n) * (spec.n / 2 + 1));
}

}  // namespace

void padded_power_into(const HalfSpectrum& u, int power, Rational pad, HalfSpectrum& out) {
  const int n = u.spec.n;
  const int M = padded_size(n, pad);
  const int nc = n / 2 + 1;
  const int mc = M / 2 + 1;
  const int N = n / 2;
  auto& fft = detail::real_fft(M);
  Complex* big = fft.half_buffer();
  ensure_shape(out, u.spec);

  if (M == n) {
    // Plain collocation; only the Nyquist row and column are dropped.
    for (int r = 0; r < n; ++r) {
      const Complex* src = &u.c[static_cast<std::size_t>(r) * nc];
      Complex* dst = big + static_cast<std::size_t>(r) * nc;
      if (r == N) {
        std::fill(dst, dst + nc, Complex(0.0));
        continue;
      }
      std::copy(src, src + N, dst);
      dst[N] = 0.0;
    }
    fft.execute_backward();
    scale_raise(fft.real_buffer(), static_cast<std::size_t>(n) * n, 1.0 / (static_cast<double>(n) * n), power);
    fft.execute_forward();
    for (int r = 0; r < n; ++r) {
      Complex* dst = &out.c[static_cast<std::size_t>(r) * nc];
      if (r == N) {
        std::fill(dst, dst + nc, Complex(0.0));
        continue;
      }
      const Complex* src = big + static_cast<std::size_t>(r) * nc;
      std::copy(src, src + N, dst);
      dst[N] = 0.0;
    }
    return;
  }

  // Embed. The value scale M^2/n^2 keeps the represented function unchanged.
  const double up = (static_cast<double>(M) * M) / (static_cast<double>(n) * n);
  std::fill(big, big + static_cast<std::size_t>(M) * mc, Complex(0.0));
  for (int r = 0; r < n; ++r) {
    const int m = r < N ? r : r - n;
    for (int j = 0; j < nc; ++j) {
      Complex c = u(r, j) * up;
      if (j == N) c *= 0.5;
      if (r == N) {
        c *= 0.5;
        big[static_cast<std::size_t>(N) * mc + j] += c;
        big[static_cast<std::size_t>(M - N) * mc + j] += c;
      } else {
        const int target = m >= 0 ? m : M + m;
        big[static_cast<std::size_t>(target) * mc + j] += c;
      }
    }
  }
  fft.execute_backward();
  scale_raise(fft.real_buffer(), static_cast<std::size_t>(M) * M, 1.0 / (static_cast<double>(M) * M), power);
  fft.execute_forward();

  const double down = 1.0 / up;
  for (int r = 0; r < n; ++r) {
    Complex* dst = &out.c[static_cast<std::size_t>(r) * nc];
    if (r == N) {
      std::fill(dst, dst + nc, Complex(0.0));
      continue;
    }
    const int m = r < N ? r : r - n;
    const int src = m >= 0 ? m : M + m;
    for (int j = 0; j < N; ++j) dst[j] = big[static_cast<std::size_t>(src) * mc + j] * down;
    dst[N] = 0.0;
  }
}

HalfSpectrum padded_power(const HalfSpectrum& u, int power, Rational pad) {
  HalfSpectrum out;
  padded_power_into(u, power, pad, out);
  return out;
}

Rational exact_pad(int n, int degree) {
  int m = (n * (degree + 1) + 1) / 2;
  if (m % 2) ++m;
  return Rational(m, n);
}

void truncated_power_into(const HalfSpectrum& u, int power, HalfSpectrum& out) {
  const int n = u.spec.n;
  const int nc = n / 2 + 1;
  auto& fft = detail::real_fft(n);
  Complex* buf = fft.half_buffer();
  for (int r = 0; r < n; ++r) {
    const int m = std::abs(u.spec.freq_index(r));
    for (int j = 0; j < nc; ++j) {
      const std::size_t i = static_cast<std::size_t>(r) * nc + j;
      buf[i] = 3 * std::max(m, j) > n ? Complex(0.0) : u.c[i];
    }
  }
  fft.execute_backward();
  scale_raise(fft.real_buffer(), static_cast<std::size_t>(n) * n, 1.0 / (static_cast<double>(n) * n), power);
  fft.execute_forward();
  ensure_shape(out, u.spec);
  for (int r = 0; r < n; ++r) {
    const int m = std::abs(u.spec.freq_index(r));
    for (int j = 0; j < nc; ++j) {
      const std::size_t i = static_cast<std::size_t>(r) * nc + j;
      out.c[i] = 3 * std::max(m, j) > n ? Complex(0.0) : buf[i];
    }
  }
}

HalfSpectrum truncated_power(const HalfSpectrum& u, int power) {
  HalfSpectrum out;
  truncated_power_into(u, power, out);
  return out;
}

}  // namespace zk
