#include "zk/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "zk/error.hpp"
#include "zk/spectral.hpp"

namespace zk {

Rational EvolveConfig::pad() const {
  if (dealias_pad) return *dealias_pad;
  return Rational((k + 3) / 2);  // ceil((k+2)/2)
}

void EvolveConfig::validate() const {
  require(k >= 1, "k must be at least 1");
  require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
  require(std::isfinite(T_end) && T_end > 0.0, "T_end must be positive");
  require(pad().value() >= 1.0, "dealias pad must be at least 1");
  require(snapshot_stride >= 1, "snapshot_stride must be at least 1");
  require(boundary_tolerance >= 0.0, "boundary_tolerance must be nonnegative");
  require(growth_factor > 1.0, "growth_factor must exceed 1");
}

void ConservedLedger::push(const LedgerRow& row) {
  require(rows.empty() || row.t > rows.back().t, "ledger times must be strictly increasing");
  rows.push_back(row);
}

std::string ConservedLedger::csv() const {
  std::string out = "t,mass,energy,grad_l2,linf_u,trap_lhs,boundary_fraction\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n", r.t, r.mass, r.energy, r.grad_l2, r.linf,
                  r.trap_lhs, r.boundary_fraction);
    out += buf;
  }
  return out;
}

ConservedLedger ConservedLedger::parse_csv(const std::string& text, int k) {
  std::istringstream in(text);
  std::string line;
  ConservedLedger led;
  led.k = k;
  if (!std::getline(in, line) || line != "t,mass,energy,grad_l2,linf_u,trap_lhs,boundary_fraction")
    fail(ErrorCode::Io, "ledger CSV header not recognised");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[7];
    std::istringstream ls(line);
    std::string cell;
    int i = 0;
    while (std::getline(ls, cell, ',')) {
      if (i >= 7) break;
      try {
        std::size_t used = 0;
        v[i] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(ErrorCode::Io, "ledger CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      ++i;
    }
    if (i != 7) fail(ErrorCode::Io, "ledger CSV line " + std::to_string(lineno) + ": expected 7 columns");
    try {
      led.push({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
    } catch (const Error& e) {
      fail(ErrorCode::Io, "ledger CSV line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return led;
}

double ConservedLedger::max_mass_drift() const {
  double d = 0.0;
  if (rows.empty() || rows[0].mass == 0.0) return d;
  for (const auto& r : rows) d = std::max(d, std::abs(r.mass - rows[0].mass) / rows[0].mass);
  return d;
}

double ConservedLedger::max_energy_drift() const {
  double d = 0.0;
  if (rows.empty()) return d;
  const double scale = std::max(std::abs(rows[0].energy), 1e-10);
  for (const auto& r : rows) d = std::max(d, std::abs(r.energy - rows[0].energy) / scale);
  return d;
}

LedgerRow ledger_row(double t, const Field& u, int k) {
  LedgerRow r;
  r.t = t;
  r.mass = mass(u);
  r.energy = energy(u, k);
  r.grad_l2 = std::sqrt(gradient_l2_squared(u));
  r.linf = u.max_abs();
  const double sk = 1.0 - 2.0 / k;
  r.trap_lhs = std::pow(r.grad_l2, sk) * std::pow(std::sqrt(r.mass), 1.0 - sk);
  r.boundary_fraction = boundary_fraction(u);
  return r;
}

std::string to_string(EvolveStatus s) {
  switch (s) {
    case EvolveStatus::Completed: return "completed";
    case EvolveStatus::BoundaryStop: return "boundary";
    case EvolveStatus::GrowthStop: return "growth";
    case EvolveStatus::NonFiniteStop: return "nonfinite";
  }
  return "unknown";
}

namespace {

bool all_finite(const std::vector<Complex>& c) {
  for (const Complex& z : c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

// Integrating-factor RK4 on the half spectrum with precomputed phases.
class Stepper {
 public:
  Stepper(const GridSpec& spec, int k, Rational pad, DealiasMode mode, double dt)
      : spec_(spec), k_(k), pad_(pad), mode_(mode), dt_(dt), w_(spec) {
    const int n = spec.n, nc = n / 2 + 1;
    E_.resize(static_cast<std::size_t>(n) * nc);
    E2_.resize(E_.size());
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < nc; ++j) {
        const double kx = w_.kx_odd[j], ky = w_.ky_odd[r];
        const double ph = kx * (kx * kx + ky * ky);
        E_[static_cast<std::size_t>(r) * nc + j] = Complex(std::cos(dt * ph), std::sin(dt * ph));
        E2_[static_cast<std::size_t>(r) * nc + j] = Complex(std::cos(0.5 * dt * ph), std::sin(0.5 * dt * ph));
      }
  }

  // out = -i xi P(u^{k+1})
  void nonlinear(const HalfSpectrum& u, HalfSpectrum& out) const {
    if (mode_ == DealiasMode::TwoThirds)
      truncated_power_into(u, k_ + 1, out);
    else
      padded_power_into(u, k_ + 1, pad_, out);
    if (!all_finite(out.c)) {
      const double m = from_half(u).max_abs();
      char buf[160];
      std::snprintf(buf, sizeof buf, "overflow forming u^%d (max|u| = %.6e)", k_ + 1, m);
      fail(ErrorCode::Numeric, buf);
    }
    const int n = spec_.n, nc = n / 2 + 1;
    for (int r = 0; r < n; ++r) {
      Complex* row = &out.c[static_cast<std::size_t>(r) * nc];
      for (int j = 0; j < nc; ++j) row[j] = Complex(row[j].imag() * w_.kx_odd[j], -row[j].real() * w_.kx_odd[j]);
    }
  }

  // Advances u by dt; u is left untouched when the step fails.
  void advance(HalfSpectrum& u) {
    const std::size_t N = u.c.size();
    const double h = dt_, h2 = 0.5 * dt_;
    a_.spec = u.spec;
    a_.c.resize(N);
    Complex* a = a_.c.data();
    const Complex* uc = u.c.data();
    nonlinear(u, k1_);
    for (std::size_t i = 0; i < N; ++i) a[i] = E2_[i] * (uc[i] + h2 * k1_.c[i]);
    nonlinear(a_, k2_);
    for (std::size_t i = 0; i < N; ++i) a[i] = E2_[i] * uc[i] + h2 * k2_.c[i];
    nonlinear(a_, k3_);
    for (std::size_t i = 0; i < N; ++i) a[i] = E_[i] * uc[i] + h * E2_[i] * k3_.c[i];
    nonlinear(a_, k4_);
    const double h6 = h / 6.0;
    for (std::size_t i = 0; i < N; ++i)
      a[i] = E_[i] * uc[i] + h6 * (E_[i] * k1_.c[i] + 2.0 * E2_[i] * (k2_.c[i] + k3_.c[i]) + k4_.c[i]);
    if (!all_finite(a_.c)) fail(ErrorCode::Numeric, "non-finite value after time step");
    std::swap(u.c, a_.c);
  }

 private:
  GridSpec spec_;
  int k_;
  Rational pad_;
  DealiasMode mode_;
  double dt_;
  Wavenumbers w_;
  std::vector<Complex> E_, E2_;
  HalfSpectrum a_, k1_, k2_, k3_, k4_;
};

}  // namespace

Field rhs_nonlinear(const Field& u, int k, Rational pad, DealiasMode mode) {
  require(k >= 1, "k must be at least 1");
  require(pad.value() >= 1.0, "dealias pad must be at least 1");
  const Stepper s(u.spec(), k, pad, mode, 0.0);
  HalfSpectrum out;
  s.nonlinear(to_half(u), out);
  return from_half(out);
}

double step_budget(const Field& u, int k) {
  const double m = u.max_abs();
  if (m == 0.0) return kInf;
  return u.spec().dx() / ((k + 1.0) * std::pow(m, k));
}

Field step(const Field& u, double dt, const EvolveConfig& cfg) {
  require(cfg.k >= 1, "k must be at least 1");
  require(std::isfinite(dt) && dt != 0.0, "dt must be finite and nonzero");
  if (cfg.check_step_budget)
    require(std::abs(dt) <= step_budget(u, cfg.k), "dt exceeds the stability budget dx/((k+1) max|u|^k)");
  Stepper s(u.spec(), cfg.k, cfg.pad(), cfg.dealias_mode, dt);
  HalfSpectrum h = to_half(u);
  s.advance(h);
  return from_half(h);
}

EvolveResult evolve(const Field& u0, const EvolveConfig& cfg, const SnapshotObserver& observer) {
  cfg.validate();
  const double bf0 = boundary_fraction(u0);
  const auto num = [](double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  };
  require(bf0 <= cfg.boundary_tolerance, "initial data violates the boundary tolerance (fraction " + num(bf0) + ")");
  if (cfg.check_step_budget)
    require(cfg.dt <= step_budget(u0, cfg.k),
            "dt exceeds the stability budget dx/((k+1) max|u|^k) = " + num(step_budget(u0, cfg.k)));

  EvolveResult res;
  res.ledger.k = cfg.k;
  const long nsteps = std::max(1L, static_cast<long>(std::ceil(cfg.T_end / cfg.dt - 1e-9)));
  res.dt_used = cfg.T_end / static_cast<double>(nsteps);
  Stepper stepper(u0.spec(), cfg.k, cfg.pad(), cfg.dealias_mode, res.dt_used);

  double grad0 = 0.0;
  auto record = [&](double t, const Field& u) {
    const LedgerRow row = ledger_row(t, u, cfg.k);
    res.ledger.push(row);
    if (cfg.keep_snapshots) res.trajectory.push(t, u);
    if (observer) observer(t, u);
    res.t_reached = t;
    return row;
  };

  grad0 = record(0.0, u0).grad_l2;
  res.final_state = u0;
  if (!cfg.keep_snapshots) res.trajectory.spec = u0.spec();
  HalfSpectrum h = to_half(u0);
  for (long s = 1; s <= nsteps; ++s) {
    try {
      stepper.advance(h);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Numeric) throw;
      res.status = EvolveStatus::NonFiniteStop;
      res.message = std::string(e.what()) + " at step " + std::to_string(s);
      res.final_state = from_half(h);
      return res;
    }
    res.steps = s;
    if (s % cfg.snapshot_stride != 0 && s != nsteps) continue;
    const double t = s * res.dt_used;
    Field u = from_half(h);
    const LedgerRow row = record(t, u);
    res.final_state = std::move(u);
    if (row.boundary_fraction > cfg.boundary_tolerance) {
      res.status = EvolveStatus::BoundaryStop;
      std::ostringstream msg;
      msg << "boundary fraction " << row.boundary_fraction << " exceeds tolerance at t = " << t;
      res.message = msg.str();
      return res;
    }
    if (grad0 > 0.0 && row.grad_l2 * row.grad_l2 > cfg.growth_factor * grad0 * grad0) {
      res.status = EvolveStatus::GrowthStop;
      res.message = "growth observed: |grad u|^2 grew beyond " + std::to_string(cfg.growth_factor) + "x at t = " +
                    std::to_string(t);
      return res;
    }
  }
  res.final_state = from_half(h);
  return res;
}

EquivarianceReport scaling_equivariance_check(const Field& u0, double lambda, double t_bar, const EvolveConfig& cfg) {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
  require(std::isfinite(t_bar) && t_bar > 0.0, "t_bar must be positive");
  const int k = cfg.k;
  EquivarianceReport rep;

  EvolveConfig cb = cfg;
  cb.T_end = t_bar;
  cb.keep_snapshots = false;
  EvolveConfig ca = cb;
  ca.T_end = lambda * lambda * lambda * t_bar;
  ca.dt = lambda * lambda * lambda * cfg.dt;

  const EvolveResult ra = evolve(u0, ca);
  const Rescaled scaled = rescale(u0, lambda, k);
  const EvolveResult rb = evolve(scaled.field, cb);
  const Rescaled back = rescale(rb.final_state, 1.0 / lambda, k);
  rep.resolution_flag = scaled.boundary_warning || back.boundary_warning || ra.status != EvolveStatus::Completed ||
                        rb.status != EvolveStatus::Completed;

  const Field& ua = ra.final_state;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ua.samples().size(); ++i) {
    const double d = back.field.samples()[i] - ua.samples()[i];
    num += d * d;
    den += ua.samples()[i] * ua.samples()[i];
  }
  rep.gap = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  const double mb = mass(rb.final_state);
  const double ma = std::pow(lambda, 4.0 / k - 2.0) * mass(ua);
  rep.mass_gap = mb > 0.0 ? std::abs(mb - ma) / mb : std::abs(ma);
  return rep;
}

}  // namespace zk
