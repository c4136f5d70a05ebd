#include "zk/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "zk/calculus.hpp"
#include "zk/error.hpp"
#include "zk/spectral.hpp"

namespace zk {

namespace {

void raise_in_place(std::vector<double>& v, int power) {
  for (double& x : v) {
    const double b = x;
    double r = b;
    for (int p = 1; p < power; ++p) r *= b;
    x = r;
  }
}

// Half spectrum of u^{k+1}: alias-free projection, or plain collocation.
HalfSpectrum power_half(const HalfSpectrum& h, int power, bool dealiased) {
  if (dealiased) return padded_power(h, power, exact_pad(h.spec.n, power));
  Field u = from_half(h);
  raise_in_place(u.mutable_samples(), power);
  return to_half(u);
}

// |coeff Lap u - u + u^{k+1}|_2 / |u|_2 from half spectra.
double residual_of(const HalfSpectrum& u, const HalfSpectrum& nl, const Wavenumbers& w, double coeff) {
  const int n = u.spec.n, nc = u.cols();
  double num = 0.0, den = 0.0;
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < nc; ++j) {
      const double mult = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      const double sym = 1.0 + coeff * (w.kx[j] * w.kx[j] + w.ky[r] * w.ky[r]);
      num += mult * std::norm(nl(r, j) - sym * u(r, j));
      den += mult * std::norm(u(r, j));
    }
  return den > 0.0 ? std::sqrt(num / den) : kInf;
}

// Shift u so that the circular centroid of u^2 sits at the origin.
Field recenter(const Field& u) {
  const GridSpec& s = u.spec();
  const double kk = s.dk();
  Complex cx(0.0), cy(0.0);
  for (int iy = 0; iy < s.n; ++iy)
    for (int ix = 0; ix < s.n; ++ix) {
      const double m = u.at(ix, iy) * u.at(ix, iy);
      cx += m * std::polar(1.0, kk * s.x(ix));
      cy += m * std::polar(1.0, kk * s.x(iy));
    }
  const double x0 = std::arg(cx) / kk, y0 = std::arg(cy) / kk;
  return translate(u, -x0, -y0);
}

struct Iterate {
  Field u;
  int iterations = 0;
  double residual = 0.0;
  double stabilizer = 1.0;
  std::vector<double> history;
};

// Petviashvili iteration for coeff Lap u - u + u^{k+1} = 0.
Iterate petviashvili(int k, const GridSpec& spec, double coeff, const SolveOptions& opts) {
  require(k >= 1, "ground states need k >= 1");
  require(opts.tol > 0.0 && opts.max_iters > 0, "tolerance and iteration cap must be positive");
  Field seed = opts.seed ? *opts.seed
                         : Field::from_function(spec, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); });
  require(seed.spec() == spec, "seed must live on the solver grid");
  require(seed.max_abs() > 0.0, "seed must be nonzero");

  const Wavenumbers w(spec);
  const int n = spec.n, nc = n / 2 + 1;
  const double gamma = (k + 1.0) / k;
  std::vector<double> sym(static_cast<std::size_t>(n) * nc);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < nc; ++j) sym[static_cast<std::size_t>(r) * nc + j] = 1.0 + coeff * (w.kx[j] * w.kx[j] + w.ky[r] * w.ky[r]);

  Iterate it;
  HalfSpectrum h = to_half(seed);
  double best = kInf;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    const HalfSpectrum nl = power_half(h, k + 1, opts.dealiased);
    double top = 0.0, bot = 0.0;
    for (std::size_t i = 0; i < h.c.size(); ++i) {
      const int j = static_cast<int>(i % nc);
      const double mult = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      top += mult * sym[i] * std::norm(h.c[i]);
      bot += mult * std::real(nl.c[i] * std::conj(h.c[i]));
    }
    const double res = residual_of(h, nl, w, coeff);
    it.history.push_back(res);
    if (!std::isfinite(top) || !std::isfinite(bot) || bot <= 0.0 || top == 0.0)
      fail(ErrorCode::NotConverged, "Petviashvili iteration collapsed at iteration " + std::to_string(iter));
    const double M = top / bot;
    it.stabilizer = M;
    if (res <= opts.tol && std::abs(M - 1.0) <= std::max(opts.tol, 1e-10)) {
      it.iterations = iter - 1;
      it.residual = res;
      it.u = from_half(h);
      return it;
    }
    if (iter > opts.burn_in && res > 2.0 * best && res > 100.0 * opts.tol)
      fail(ErrorCode::NotConverged, "Petviashvili residual stopped decreasing after burn-in (" + std::to_string(res) +
                                        " at iteration " + std::to_string(iter) + ")");
    best = std::min(best, res);
    const double Mg = std::pow(M, gamma);
    for (std::size_t i = 0; i < h.c.size(); ++i) h.c[i] = Mg * nl.c[i] / sym[i];
    if (!(std::sqrt(weighted_energy(h, w, [](double, double) { return 1.0; })) > 1e-200))
      fail(ErrorCode::NotConverged, "Petviashvili iteration collapsed to zero");
  }
  std::ostringstream msg;
  msg << "Petviashvili iteration did not reach tolerance " << opts.tol << " in " << opts.max_iters
      << " iterations (residual " << it.history.back() << ")";
  fail(ErrorCode::NotConverged, msg.str());
}

}  // namespace

double elliptic_residual(const Field& u, int k, double laplacian_coeff, bool dealiased) {
  const HalfSpectrum h = to_half(u);
  return residual_of(h, power_half(h, k + 1, dealiased), Wavenumbers(u.spec()), laplacian_coeff);
}

GroundState ground_state_from_field(int k, Field Q, bool dealiased) {
  require(k >= 1, "ground states need k >= 1");
  GroundState g;
  g.k = k;
  g.mass_Q = mass(Q);
  require(g.mass_Q > 0.0, "ground state profile is zero");
  g.grad_sq = gradient_l2_squared(Q);
  g.pk2_integral = power_integral(Q, k + 2, dealiased ? PowerIntegral::Spectral : PowerIntegral::Quadrature);
  g.residual = elliptic_residual(Q, k, 1.0, dealiased);
  g.Q = std::move(Q);
  return g;
}

GroundState solve_ground_state(int k, const GridSpec& spec, const SolveOptions& opts) {
  Iterate it = petviashvili(k, spec, 1.0, opts);
  GroundState g = ground_state_from_field(k, recenter(it.u), opts.dealiased);
  g.iterations = it.iterations;
  g.stabilizer = it.stabilizer;
  g.residual_history = std::move(it.history);
  return g;
}

PsiSolution solve_psi_and_rescale(int k, const GridSpec& spec, const SolveOptions& opts) {
  Iterate it = petviashvili(k, spec, 0.5 * k, opts);
  PsiSolution out;
  out.psi = recenter(it.u);
  out.iterations = it.iterations;
  out.residual = elliptic_residual(out.psi, k, 0.5 * k, opts.dealiased);
  out.psi_mass = mass(out.psi);
  out.Q = resample_scaled(out.psi, std::sqrt(0.5 * k));
  out.Q_mass = mass(out.Q);
  out.mass_relation_gap = std::abs(out.Q_mass - (2.0 / k) * out.psi_mass) / out.Q_mass;
  return out;
}

PohozaevResiduals pohozaev_check(const GroundState& g) {
  require(g.mass_Q > 0.0 && g.pk2_integral != 0.0, "Pohozaev check needs a nonzero profile");
  const double scale = std::abs(g.pk2_integral);
  const double k = g.k;
  PohozaevResiduals r;
  r.multiply_by_Q = std::abs(g.pk2_integral - (g.mass_Q + g.grad_sq)) / scale;
  r.multiply_by_x_grad = std::abs(g.pk2_integral - 0.5 * (k + 2.0) * g.mass_Q) / scale;
  r.mass_gradient = std::abs(0.5 * k * g.mass_Q - g.grad_sq) / scale;
  return r;
}

GroundStateEnergy ground_state_energy(const GroundState& g) {
  require(g.mass_Q > 0.0, "energy check needs a nonzero profile");
  GroundStateEnergy e;
  e.numeric = energy(g.Q, g.k);
  e.closed_form = 0.25 * (g.k - 2.0) * g.mass_Q;
  e.relative_gap = std::abs(e.numeric - e.closed_form) / g.mass_Q;
  return e;
}

double gn_ratio(const Field& u, int k, double K_opt_pow) {
  const double m = mass(u);
  const double g2 = gradient_l2_squared(u);
  require(m > 0.0 && g2 > 0.0, "Gagliardo-Nirenberg ratio needs a nonconstant, nonzero field");
  double lp = 0.0;
  for (double v : u.samples()) lp += std::pow(std::abs(v), k + 2);
  lp *= u.spec().dx() * u.spec().dx();
  return lp / (K_opt_pow * std::pow(g2, 0.5 * k) * m);
}

GNReport sharp_constant(const GroundState& g, std::optional<double> psi_mass, const std::vector<Field>& family) {
  require(g.mass_Q > 0.0, "sharp constant needs a nonzero ground state");
  const double k = g.k;
  GNReport r;
  r.k = g.k;
  const double qn = std::sqrt(g.mass_Q);
  r.K_opt_pow = std::pow(2.0, 0.5 * (k - 2.0)) * (k + 2.0) / (std::pow(k, 0.5 * k) * std::pow(qn, k));
  const double pm = psi_mass ? *psi_mass : 0.5 * k * g.mass_Q;
  r.K_opt_pow_psi = (k + 2.0) / (2.0 * std::pow(std::sqrt(pm), k));
  r.formula_gap = std::abs(r.K_opt_pow - r.K_opt_pow_psi) / r.K_opt_pow;
  r.equality_ratio_at_Q = gn_ratio(g.Q, g.k, r.K_opt_pow);
  r.equality_gap_at_Q = std::abs(r.equality_ratio_at_Q - 1.0);
  r.family_size = static_cast<int>(family.size());
  for (const Field& f : family) {
    const double q = gn_ratio(f, g.k, r.K_opt_pow);
    r.worst_ratio = std::max(r.worst_ratio, q);
  }
  r.worst_violation = std::max(0.0, r.worst_ratio - 1.0);
  return r;
}

std::string ground_state_sidecar_json(const GroundState& g) {
  nlohmann::ordered_json j;
  j["k"] = g.k;
  j["mass"] = g.mass_Q;
  j["grad_sq"] = g.grad_sq;
  j["pk2"] = g.pk2_integral;
  j["residual"] = g.residual;
  j["iterations"] = g.iterations;
  j["K_opt_pow"] = sharp_constant(g).K_opt_pow;
  return j.dump(2);
}

}  // namespace zk
