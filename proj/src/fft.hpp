#pragma once

#include <fftw3.h>

#include <complex>
#include <span>

namespace zk::detail {

// n x n real-to-half-complex transform pair with its own aligned buffers.
// Planned with FFTW_ESTIMATE so that results are reproducible run to run.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int n() const { return n_; }
  // Unnormalised forward DFT: out has n * (n/2 + 1) entries.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalised inverse: out = n^2 * u.
  void backward(std::span<const std::complex<double>> in, std::span<double> out);

  // Direct access for callers that fill the buffers themselves. The inverse
  // transform overwrites the half buffer.
  double* real_buffer() { return real_; }
  std::complex<double>* half_buffer() { return reinterpret_cast<std::complex<double>*>(half_); }
  void execute_forward() { fftw_execute(fwd_); }
  void execute_backward() { fftw_execute(bwd_); }

 private:
  int n_;
  double* real_;
  fftw_complex* half_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

// Per-thread cache; plan creation is serialised internally.
RealFft& real_fft(int n);

}  // namespace zk::detail
