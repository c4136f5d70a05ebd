#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zk/grid.hpp"

namespace zk {

// Supplies Q for a given k (solve or cache load) when a descriptor needs it.
using GroundStateProvider = std::function<Field(int k)>;

// Descriptors:
//   gauss:amp=A,width=W[,x0=X,y0=Y]   A exp(-((x-X)^2 + (y-Y)^2) / (2 W^2))
//   cosine:amp=A[,mx=M,my=N]          A cos(M pi x / L) cos(N pi y / L)
//   qmul:c=C,k=K                      C Q_K
//   file:PATH                         ZKF1 snapshot on the same grid
//   random:seed=S[,amp=A]             random_smooth_field
Field make_initial(const std::string& descriptor, const GridSpec& spec, int k,
                   const GroundStateProvider& ground_state = nullptr);

const std::vector<std::string>& initial_kinds();

// Sum of one to four Gaussian bumps with random signs, centres in the middle
// half of the box and widths in [0.6, 2.5]. Deterministic in `seed`.
Field random_smooth_field(const GridSpec& spec, std::uint64_t seed, double amplitude = 1.0);

// cos(lambda x) g(x, y), g a Gaussian of width w, used by the smoothing probe.
Field modulated_gaussian(const GridSpec& spec, double lambda, double width);
// cos(lambda x) exp(-x^2/(2 w^2) - lambda^2 y^2/(2 w^2)): concentrates in y as
// lambda grows, used by the maximal-function probe.
Field anisotropic_packet(const GridSpec& spec, double lambda, double width);

}  // namespace zk
