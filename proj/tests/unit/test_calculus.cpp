#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "../support/fields.hpp"
#include "zk/calculus.hpp"
#include "zk/error.hpp"
#include "zk/linear_group.hpp"

using namespace zk;
using namespace testing_support;

TEST_SUITE("calculus") {
  TEST_CASE("mass") {
    const GridSpec s(256, 20.0);
    CHECK(mass(Field::zeros(s)) == 0.0);
    const Field g = Field::from_function(s, [](double x, double y) { return std::exp(-(x * x + y * y) / 2.0); });
    CHECK(std::abs(mass(g) - M_PI) < 1e-8);
  }

  TEST_CASE("rescale changes mass by lambda^(4/k - 2)") {
    const GridSpec s(256, 20.0);
    const Field g = gaussian(s, 2.0);
    const Rescaled r = rescale(g, 2.0, 4);
    CHECK_FALSE(r.boundary_warning);
    CHECK(std::abs(mass(r.field) / mass(g) - std::pow(2.0, 4.0 / 4 - 2.0)) < 1e-8);
    CHECK(max_abs_diff(rescale(g, 1.0, 4).field, g) < 1e-13);
  }

  TEST_CASE("energy: zero field, and quadrature against the spectral power") {
    const GridSpec s(64, 4.0);
    CHECK(energy(Field::zeros(s), 3) == 0.0);
    const Field f = Field::from_function(s, [&](double x, double) { return std::sin(M_PI * x / s.box); });
    const double a = power_integral(f, 5, PowerIntegral::Quadrature);
    const double b = power_integral(f, 5, PowerIntegral::Spectral);
    CHECK(std::abs(a - b) < 1e-10);
    const Field g = gaussian(GridSpec(128, 12.0), 1.5, 0.7);
    CHECK(std::abs(power_integral(g, 5, PowerIntegral::Quadrature) - power_integral(g, 5, PowerIntegral::Spectral)) <
          1e-10);
    CHECK(std::abs(energy(g, 3) - energy(g, 3, PowerIntegral::Spectral)) < 1e-10);
  }

  TEST_CASE("sobolev norms") {
    const GridSpec s(128, 6.0);
    const Field g = gaussian(s, 1.0, 0.8);
    CHECK(std::abs(sobolev_norm(g, 0.0, false) - std::sqrt(mass(g))) < 1e-12 * std::sqrt(mass(g)));
    const Field c = Field::from_function(s, [&](double x, double) { return std::cos(M_PI * x / s.box); });
    CHECK(std::abs(sobolev_norm(c, 1.0, true) / sobolev_norm(c, 0.0, false) - M_PI / s.box) < 1e-12);
    CHECK_THROWS_AS(sobolev_norm(g, -1.0, true), Error);
    CHECK_THROWS_AS(sobolev_norm(g, 5.0, false), Error);
  }

  // Nonzero-mean data leave a cusp of |xi|^2s at the origin that the lattice
  // sum resolves only to ~1e-4; an odd profile removes it.
  TEST_CASE("homogeneous norm scaling law and scale invariance at s_k") {
    const GridSpec s(512, 60.0);
    auto odd = [&](double w) {
      return Field::from_function(s, [w](double x, double y) { return x * std::exp(-(x * x + y * y) / (2 * w * w)); });
    };
    const Field g = odd(2.0);
    const int k = 5;
    const double lam = 2.0, sv = 0.7;
    const double ratio = sobolev_norm(rescale(g, lam, k).field, sv, true) / sobolev_norm(g, sv, true);
    CHECK(std::abs(ratio / std::pow(lam, 2.0 / k + sv - 1.0) - 1.0) < 1e-6);
    const double sk = 1.0 - 2.0 / k;
    const Field h = odd(1.5);
    const double base = sobolev_norm(h, sk, true);
    for (double l : {0.5, 2.0})
      CHECK(std::abs(sobolev_norm(rescale(h, l, k).field, sk, true) - base) <= 1e-6 * base);
  }

  TEST_CASE("fractional derivatives") {
    const GridSpec s(64, 5.0);
    const Field c = Field::from_function(s, [&](double x, double) { return std::cos(M_PI * x / s.box); });
    CHECK(max_abs_diff(fractional_dx(c, 0.0), c) < 1e-13);
    CHECK(max_abs_diff(fractional_dx(c, 1.0), c.scaled(M_PI / s.box)) < 1e-12);
    const Field r = band_limited(s, 6, 3);
    CHECK(max_abs_diff(fractional_dx(fractional_dx(r, 0.5), 0.5), fractional_dx(r, 1.0)) < 1e-12 * r.max_abs() * 10);
    CHECK(max_abs_diff(fractional_dy(fractional_dy(r, 0.5), 0.5), fractional_dy(r, 1.0)) < 1e-12 * r.max_abs() * 10);
    CHECK_THROWS_AS(fractional_dx(c, 2.5), Error);
  }

  TEST_CASE("partial derivatives and laplacian") {
    const GridSpec s(64, 5.0);
    CHECK(partial_x(Field::from_function(s, [](double, double) { return 3.0; })).max_abs() < 1e-13);
    const Field c = Field::from_function(s, [&](double x, double) { return std::cos(M_PI * x / s.box); });
    const Field want = Field::from_function(s, [&](double x, double) { return -(M_PI / s.box) * std::sin(M_PI * x / s.box); });
    CHECK(max_abs_diff(partial_x(c), want) < 1e-12);
    const GridSpec g(256, 20.0);
    const Field e = Field::from_function(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 2.0); });
    const Field lap = Field::from_function(g, [](double x, double y) {
      const double r2 = x * x + y * y;
      return (r2 - 2.0) * std::exp(-r2 / 2.0);
    });
    CHECK(max_abs_diff(laplacian(e), lap) < 1e-8);
    const Field cy = Field::from_function(s, [&](double, double y) { return std::sin(2.0 * M_PI * y / s.box); });
    const Field dy = Field::from_function(s, [&](double, double y) { return (2.0 * M_PI / s.box) * std::cos(2.0 * M_PI * y / s.box); });
    CHECK(max_abs_diff(partial_y(cy), dy) < 1e-12);
  }

  TEST_CASE("lp norms") {
    const GridSpec s(64, 5.0);
    const Field f = noise(s, 1);
    CHECK(lp_norm(f, kInf) == f.max_abs());
    CHECK(std::abs(lp_norm(f, 2.0) - std::sqrt(mass(f))) < 1e-13);
    CHECK_THROWS_AS(lp_norm(f, 0.5), Error);
  }

  TEST_CASE("mixed norm: constant trajectory, sup norm and the triple-loop oracle") {
    const GridSpec s(8, 1.0);
    const Field f = noise(s, 2);
    Trajectory tr;
    tr.spec = s;
    const double T = 2.5;
    for (int i = 0; i <= 10; ++i) tr.push(T * i / 10.0, f);
    NormTriple nt;
    nt.exponents = {3.0, 4.0, 2.0};
    nt.order = {Axis::X, Axis::Y, Axis::T};
    NormTriple spatial = nt;
    spatial.order = {Axis::T, Axis::X, Axis::Y};
    spatial.exponents = {kInf, 3.0, 4.0};
    CHECK(std::abs(mixed_norm(tr, nt) - std::sqrt(T) * mixed_norm(tr, spatial)) < 1e-10);

    Trajectory rnd;
    rnd.spec = s;
    for (int i = 0; i < 8; ++i) rnd.push(0.1 * i + 0.01 * i * i, noise(s, 100 + i));
    NormTriple all_inf;
    all_inf.exponents = {kInf, kInf, kInf};
    double mx = 0.0;
    for (const auto& fld : rnd.fields) mx = std::max(mx, fld.max_abs());
    CHECK(mixed_norm(rnd, all_inf) == mx);

    NormTriple t;
    t.exponents = {4.0, kInf, 2.0};
    t.order = {Axis::X, Axis::Y, Axis::T};
    const double ref = oracle::triple_loop_norm(rnd, t);
    CHECK(std::abs(mixed_norm(rnd, t) - ref) < 1e-12 * ref);
    for (auto order : {std::array<Axis, 3>{Axis::T, Axis::X, Axis::Y}, std::array<Axis, 3>{Axis::Y, Axis::T, Axis::X}}) {
      NormTriple u;
      u.exponents = {2.0, 3.0, 6.0};
      u.order = order;
      const double r = oracle::triple_loop_norm(rnd, u);
      CHECK(std::abs(mixed_norm(rnd, u) - r) < 1e-12 * r);
    }
  }

  TEST_CASE("mixed norm with equal exponents is the flat norm") {
    const GridSpec s(8, 1.0);
    Trajectory tr;
    tr.spec = s;
    for (int i = 0; i < 5; ++i) tr.push(i * 0.5, noise(s, 40 + i));
    NormTriple a, b;
    a.exponents = b.exponents = {3.0, 3.0, 3.0};
    a.order = {Axis::X, Axis::Y, Axis::T};
    b.order = {Axis::T, Axis::Y, Axis::X};
    const double va = mixed_norm(tr, a);
    CHECK(std::abs(va - mixed_norm(tr, b)) < 1e-12 * va);
    CHECK(std::abs(va - oracle::triple_loop_norm(tr, a)) < 1e-12 * va);
  }

  TEST_CASE("time-integrated norm needs two snapshots") {
    Trajectory tr;
    tr.spec = GridSpec(8, 1.0);
    tr.push(0.0, noise(tr.spec, 1));
    NormTriple nt;
    CHECK_THROWS_AS(mixed_norm(tr, nt), Error);
    CHECK_THROWS_AS(tr.push(0.0, noise(tr.spec, 2)), Error);
  }

  TEST_CASE("streaming accumulator equals the batch norm") {
    const GridSpec s(8, 1.0);
    Trajectory tr;
    tr.spec = s;
    NormTriple nt;
    nt.exponents = {4.0, kInf, 2.0};
    MixedNormAccumulator acc(s, nt);
    for (int i = 0; i < 6; ++i) {
      tr.push(0.3 * i, noise(s, 60 + i));
      acc.add(0.3 * i, tr.fields.back());
    }
    CHECK(acc.value() == doctest::Approx(mixed_norm(tr, nt)).epsilon(1e-13));
  }

  TEST_CASE("resolution norms") {
    const GridSpec s(64, 12.0);
    Trajectory zero;
    zero.spec = s;
    for (int i = 0; i < 4; ++i) zero.push(0.1 * i, Field::zeros(s));
    const ResolutionNorms z = resolution_norms(zero, 0.9, 9);
    for (double v : z.values) CHECK(v == 0.0);
    CHECK(z.time_exponent_u == doctest::Approx(13.51));
    CHECK(z.time_exponent_ux == doctest::Approx(27.0 / 11.0));
    CHECK(z.space_exponent == doctest::Approx(4.5));

    Trajectory lin;
    lin.spec = s;
    const Field g = gaussian(s, 1.5);
    for (int i = 0; i <= 20; ++i) lin.push(0.05 * i, propagate(g, 0.05 * i));
    const ResolutionNorms r = resolution_norms(lin, 0.9, 9);
    for (int i = 0; i < ResolutionNorms::kCount; ++i) {
      CHECK(r.finite[i]);
      CHECK(r.values[i] > 0.0);
    }
  }

  TEST_CASE("energy and mass are stable under grid refinement") {
    const Field a = gaussian(GridSpec(128, 12.0), 1.5, 0.9);
    const Field b = gaussian(GridSpec(256, 12.0), 1.5, 0.9);
    CHECK(std::abs(mass(a) - mass(b)) < 1e-10);
    CHECK(std::abs(energy(a, 3) - energy(b, 3)) < 1e-10);
  }
}
