#include "zk/linear_group.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "zk/error.hpp"

namespace zk {

void apply_propagator(HalfSpectrum& h, const Wavenumbers& w, double t) {
  if (t == 0.0) return;
  apply_multiplier(h, w, true, [t](double kx, double ky) {
    const double ph = t * kx * (kx * kx + ky * ky);
    return Complex(std::cos(ph), std::sin(ph));
  });
}

Field propagate(const Field& f, double t) {
  require(std::isfinite(t), "propagation time must be finite");
  if (t == 0.0) return f;
  HalfSpectrum h = to_half(f);
  apply_propagator(h, Wavenumbers(f.spec()), t);
  return from_half(h);
}

Field embed_doubled(const Field& f) {
  const GridSpec& s = f.spec();
  const GridSpec big(2 * s.n, 2.0 * s.box);
  std::vector<double> out(big.size(), 0.0);
  const int off = s.n / 2;
  for (int iy = 0; iy < s.n; ++iy)
    for (int ix = 0; ix < s.n; ++ix) out[static_cast<std::size_t>(iy + off) * big.n + ix + off] = f.at(ix, iy);
  return Field(big, std::move(out));
}

double group_speed_horizon(const Field& f, double energy_tail) {
  const GridSpec& spec = f.spec();
  const HalfSpectrum h = to_half(f);
  const Wavenumbers w(spec);
  const int n = spec.n;
  // Energy per |xi| and per |eta| bin.
  std::vector<double> ex(n / 2 + 1, 0.0), ey(n / 2 + 1, 0.0);
  double total = 0.0;
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= n / 2; ++j) {
      const double e = ((j == 0 || j == n / 2) ? 1.0 : 2.0) * std::norm(h(r, j));
      ex[j] += e;
      ey[std::abs(spec.freq_index(r))] += e;
      total += e;
    }
  if (total == 0.0) return kInf;
  auto radius = [&](const std::vector<double>& bins) {
    double tail = 0.0;
    for (int j = n / 2; j >= 0; --j) {
      tail += bins[j];
      if (tail > energy_tail * total) return j * spec.dk();
    }
    return 0.0;
  };
  const double kx = radius(ex), ky = radius(ey);
  const double speed = 3.0 * kx * kx + ky * ky;
  return speed > 0.0 ? spec.box / speed : kInf;
}

double DecayProbeConfig::p() const { return theta >= 1.0 ? kInf : 2.0 / (1.0 - theta); }
double DecayProbeConfig::p_dual() const { return 2.0 / (1.0 + theta); }

void DecayProbeConfig::validate() const {
  require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
  require(eps >= 0.0 && eps < 0.5, "eps must lie in [0, 1/2)");
  require(t_min > 0.0 && t_max > t_min, "need 0 < t_min < t_max");
  require(samples >= 8, "decay probe needs at least 8 samples");
}

DecayProbeResult decay_probe(const Field& f, const DecayProbeConfig& cfg) {
  cfg.validate();
  require(f.max_abs() > 0.0, "decay probe needs nonzero data");
  DecayProbeResult res;
  const double p = cfg.p();
  const double rhs = lp_norm(f, cfg.p_dual());
  const double rate = 2.0 * cfg.theta / 3.0;

  std::vector<double> times(cfg.samples);
  for (int i = 0; i < cfg.samples; ++i)
    times[i] = cfg.t_min * std::pow(cfg.t_max / cfg.t_min, static_cast<double>(i) / (cfg.samples - 1));

  auto run = [&](const Field& data, bool record) {
    HalfSpectrum h0 = to_half(data);
    const Wavenumbers w(data.spec());
    std::vector<double> lhs;
    for (double t : times) {
      HalfSpectrum h = h0;
      apply_propagator(h, w, t);
      const Field u = from_half(h);
      lhs.push_back(lp_norm(u, p));
      if (record) {
        const double bf = boundary_fraction(u);
        res.max_boundary_fraction = std::max(res.max_boundary_fraction, bf);
      }
    }
    return lhs;
  };

  const std::vector<double> lhs = run(f, true);
  res.boundary_contaminated = res.max_boundary_fraction > 1e-8;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    const double ratio = lhs[i] * std::pow(times[i], rate) / rhs;
    res.rows.push_back({0, times[i], lhs[i], rhs, ratio});
    res.constant = std::max(res.constant, ratio);
    const double lx = std::log(times[i]), ly = std::log(lhs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = cfg.samples;
  res.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  res.intercept = (sy - res.slope * sx) / m;
  res.horizon = group_speed_horizon(f);

  if (cfg.box_doubling_check) {
    const std::vector<double> big = run(embed_doubled(f), false);
    for (int i = 0; i < cfg.samples; ++i)
      res.torus_deviation = std::max(res.torus_deviation, std::abs(big[i] - lhs[i]) / big[i]);
    res.torus_valid = res.torus_deviation <= cfg.validity_tol;
  }
  return res;
}

namespace {

using PreOp = std::function<void(HalfSpectrum&, const Wavenumbers&)>;

double flow_norm(const Field& f, const NormTriple& norm, const PreOp& pre, const ProbeWindow& win) {
  HalfSpectrum h0 = to_half(f);
  const Wavenumbers w(f.spec());
  if (pre) pre(h0, w);
  MixedNormAccumulator acc(f.spec(), norm);
  for (int i = 0; i < win.time_samples; ++i) {
    const double t = win.T * i / (win.time_samples - 1);
    HalfSpectrum h = h0;
    apply_propagator(h, w, t);
    acc.add(t, from_half(h));
  }
  return acc.value();
}

ProbeStats run_family(std::span<const Field> family, std::span<const double> params, const NormTriple& norm,
                      const PreOp& pre, const std::function<double(const Field&)>& rhs_of, const ProbeWindow& win) {
  require(!family.empty(), "probe family is empty");
  require(params.size() == family.size(), "one parameter per family member is required");
  require(win.T > 0.0 && win.time_samples >= 2, "probe window needs T > 0 and at least 2 time samples");
  ProbeStats st;
  st.min_ratio = kInf;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double lhs = flow_norm(family[i], norm, pre, win);
    const double rhs = rhs_of(family[i]);
    require(rhs > 0.0, "probe right-hand side vanished");
    const double ratio = lhs / rhs;
    st.rows.push_back({static_cast<int>(i), params[i], lhs, rhs, ratio});
    st.max_ratio = std::max(st.max_ratio, ratio);
    st.min_ratio = std::min(st.min_ratio, ratio);
    if (win.box_doubling_check) {
      const double big = flow_norm(embed_doubled(family[i]), norm, pre, win);
      st.torus_deviation = std::max(st.torus_deviation, std::abs(big - lhs) / big);
    }
  }
  st.spread = st.max_ratio / st.min_ratio;
  st.increasing = st.rows.size() > 1;
  for (std::size_t i = 1; i < st.rows.size(); ++i)
    if (!(st.rows[i].ratio > st.rows[i - 1].ratio)) st.increasing = false;
  st.torus_valid = st.torus_deviation <= win.validity_tol;
  return st;
}

PreOp dx_power(int order) {
  return [order](HalfSpectrum& h, const Wavenumbers& w) {
    apply_multiplier(h, w, order % 2 == 1, [order](double kx, double) {
      Complex m(1.0, 0.0);
      for (int i = 0; i < order; ++i) m *= Complex(0.0, kx);
      return m;
    });
  };
}

PreOp abs_dx(double s) {
  return [s](HalfSpectrum& h, const Wavenumbers& w) {
    if (s == 0.0) return;
    apply_multiplier(h, w, false, [s](double kx, double) { return Complex(std::pow(std::abs(kx), s), 0.0); });
  };
}

}  // namespace

ProbeStats smoothing_probe(std::span<const Field> family, std::span<const double> params, const ProbeWindow& win,
                           int derivative_order) {
  require(derivative_order >= 0, "derivative order must be nonnegative");
  const NormTriple norm{{kInf, 2.0, 2.0}, {Axis::X, Axis::Y, Axis::T}};
  return run_family(family, params, norm, dx_power(derivative_order), [](const Field& f) { return std::sqrt(mass(f)); },
                    win);
}

ProbeStats maximal_probe(std::span<const Field> family, std::span<const double> params, double s,
                         const ProbeWindow& win) {
  const NormTriple norm{{4.0, kInf, kInf}, {Axis::X, Axis::Y, Axis::T}};
  return run_family(family, params, norm, nullptr, [s](const Field& f) { return sobolev_norm(f, s, false); }, win);
}

ProbeStats strichartz_probe(std::span<const Field> family, std::span<const double> params, double theta, double eps,
                            const ProbeWindow& win) {
  require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
  require(eps >= 0.0 && eps < 0.5, "eps must lie in [0, 1/2)");
  const double p = theta >= 1.0 ? kInf : 2.0 / (1.0 - theta);
  const double inv_q = theta * (2.0 + eps) / 6.0;
  const double q = inv_q == 0.0 ? kInf : 1.0 / inv_q;
  const NormTriple norm{{q, p, p}, {Axis::T, Axis::X, Axis::Y}};
  return run_family(family, params, norm, abs_dx(theta * eps / 2.0), [](const Field& f) { return std::sqrt(mass(f)); },
                    win);
}

ProbeStats index_probe(std::span<const Field> family, std::span<const double> params, int k, IndexEstimate which,
                       double eps, const ProbeWindow& win) {
  require(k >= 2, "index probes need k >= 2");
  const double sk = 1.0 - 2.0 / k;
  switch (which) {
    case IndexEstimate::MaximalKHalf: {
      const NormTriple norm{{0.5 * k, kInf, kInf}, {Axis::X, Axis::Y, Axis::T}};
      return run_family(family, params, norm, nullptr, [&](const Field& f) { return sobolev_norm(f, sk + eps, false); },
                        win);
    }
    case IndexEstimate::TimeSupremum: {
      const NormTriple norm{{1.5 * k + eps, kInf, kInf}, {Axis::T, Axis::X, Axis::Y}};
      return run_family(family, params, norm, nullptr, [&](const Field& f) { return sobolev_norm(f, sk + eps, false); },
                        win);
    }
    case IndexEstimate::DerivativeTime: {
      const NormTriple norm{{3.0 * k / (k + 2.0), kInf, kInf}, {Axis::T, Axis::X, Axis::Y}};
      return run_family(family, params, norm, dx_power(1),
                        [&](const Field& f) { return std::sqrt(mass(fractional_dx(f, sk))); }, win);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown index estimate");
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
  std::ostringstream os;
  os << "family_index,param,lhs,rhs,ratio\n";
  os << std::scientific << std::setprecision(12);
  for (const auto& r : rows) os << r.family_index << ',' << r.param << ',' << r.lhs << ',' << r.rhs << ',' << r.ratio << '\n';
  return os.str();
}

}  // namespace zk
