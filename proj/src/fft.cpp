#include "fft.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace zk::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(int n) : n_(n) {
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const std::size_t nh = static_cast<std::size_t>(n) * (n / 2 + 1);
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(nn);
  half_ = fftw_alloc_complex(nh);
  fwd_ = fftw_plan_dft_r2c_2d(n, n, real_, half_, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_2d(n, n, half_, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_free(real_);
  fftw_free(half_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(fwd_);
  std::memcpy(static_cast<void*>(out.data()), half_, out.size() * sizeof(fftw_complex));
}

void RealFft::backward(std::span<const std::complex<double>> in, std::span<double> out) {
  std::memcpy(half_, in.data(), in.size() * sizeof(fftw_complex));
  fftw_execute(bwd_);
  std::copy(real_, real_ + out.size(), out.begin());
}

RealFft& real_fft(int n) {
  thread_local std::map<int, std::unique_ptr<RealFft>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<RealFft>(n)).first;
  return *it->second;
}

}  // namespace zk::detail
