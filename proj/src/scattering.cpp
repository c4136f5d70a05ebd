#include "zk/scattering.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "zk/error.hpp"
#include "zk/linear_group.hpp"

namespace zk {

void ScatterConfig::validate() const {
  require(k >= 3, "scattering diagnostics need k >= 3");
  require(delta > 0.0, "delta must be positive");
  require(checkpoints.size() >= 2, "need at least two checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i)
    require(checkpoints[i] > 0.0 && (i == 0 || checkpoints[i] > checkpoints[i - 1]),
            "checkpoints must be positive and increasing");
  for (std::size_t i = 0; i < horizons.size(); ++i)
    require(horizons[i] > 0.0 && (i == 0 || horizons[i] > horizons[i - 1]), "horizons must be positive and increasing");
  require(fit_t_min > 0.0 && fit_t_max > fit_t_min, "fit window must satisfy 0 < t_min < t_max");
}

double smallness(const Field& u0, int k) {
  require(k >= 1, "k must be positive");
  const double pd = 2.0 * (k + 1) / (2.0 * k + 1);
  return lp_norm(u0, pd) + sobolev_norm(u0, 1.0, false);
}

Trajectory interaction_picture(const Trajectory& traj) {
  Trajectory out;
  out.spec = traj.spec;
  for (std::size_t i = 0; i < traj.size(); ++i) out.push(traj.times[i], propagate(traj.fields[i], -traj.times[i]));
  return out;
}

ScatterRecorder::ScatterRecorder(ScatterConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

void ScatterRecorder::operator()(double t, const Field& u) {
  series_.t.push_back(t);
  series_.lp.push_back(lp_norm(u, cfg_.p()));
  series_.G.push_back(power_integral(u, cfg_.k + 2) / (cfg_.k + 2));
  series_.boundary.push_back(boundary_fraction(u));
  for (double c : cfg_.checkpoints)
    if (std::abs(t - c) <= 1e-9 * std::max(1.0, c)) kept_.push(t, u);
}

ScatterSeries scatter_series(const Trajectory& traj, const ScatterConfig& cfg) {
  ScatterRecorder rec(cfg);
  for (std::size_t i = 0; i < traj.size(); ++i) rec(traj.times[i], traj.fields[i]);
  return rec.series();
}

namespace {

const Field& snapshot_at(const Trajectory& traj, double t) {
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (std::abs(traj.times[i] - t) <= 1e-9 * std::max(1.0, t)) return traj.fields[i];
  fail(ErrorCode::InvalidArgument, "trajectory has no snapshot at checkpoint t = " + std::to_string(t));
}

double h1_distance(const Field& a, const Field& b) {
  std::vector<double> d(a.samples().begin(), a.samples().end());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b.samples()[i];
  return sobolev_norm(Field(a.spec(), std::move(d)), 1.0, false);
}

}  // namespace

ScatterState asymptotic_state(const Trajectory& traj, const ScatterConfig& cfg) {
  cfg.validate();
  ScatterState st;
  st.checkpoints = cfg.checkpoints;
  std::vector<Field> v;
  for (double t : cfg.checkpoints) {
    const Field& u = snapshot_at(traj, t);
    if (boundary_fraction(u) <= cfg.window_boundary_tol)
      st.window = t;
    else
      st.within_window = false;
    v.push_back(propagate(u, -t));
  }
  for (std::size_t i = 0; i + 1 < v.size(); ++i) st.tail_norms.push_back(h1_distance(v[i + 1], v[i]));
  for (std::size_t i = 0; i + 1 < st.tail_norms.size(); ++i)
    st.tail_ratios.push_back(st.tail_norms[i] > 0.0 ? st.tail_norms[i + 1] / st.tail_norms[i] : kInf);
  st.f_plus = v.back();

  const double scale = std::max(1.0, sobolev_norm(st.f_plus, 1.0, false));
  st.negligible = std::all_of(st.tail_norms.begin(), st.tail_norms.end(), [&](double x) { return x < 1e-12 * scale; });
  bool decreasing = true;
  for (double r : st.tail_ratios)
    if (!(r <= cfg.tail_ratio_max)) decreasing = false;
  st.cauchy = st.negligible || decreasing;
  st.verdict = st.negligible ? "linear" : decreasing ? "cauchy" : "no convergence detected";
  return st;
}

WeightedDecay weighted_decay(const ScatterSeries& s, const ScatterConfig& cfg) {
  cfg.validate();
  WeightedDecay w;
  w.horizons = cfg.horizons;
  const double a = cfg.weight_exponent();
  for (double T : cfg.horizons) {
    require(!s.t.empty() && s.t.back() >= T - 1e-9 * T, "run does not reach horizon T = " + std::to_string(T));
    double M = 0.0;
    bool inside = true;
    for (std::size_t i = 0; i < s.t.size() && s.t[i] <= T + 1e-9 * T; ++i) {
      M = std::max(M, std::pow(1.0 + s.t[i], a) * s.lp[i]);
      if (s.boundary[i] > cfg.window_boundary_tol) inside = false;
    }
    w.M_T.push_back(M);
    if (inside)
      w.window = T;
    else
      w.within_window = false;
  }
  w.stable = true;
  for (std::size_t i = 0; i + 1 < w.M_T.size(); ++i) {
    const double r = w.M_T[i] > 0.0 ? w.M_T[i + 1] / w.M_T[i] : (w.M_T[i + 1] > 0.0 ? kInf : 1.0);
    w.ratios.push_back(r);
    if (!(r <= cfg.decay_ratio_max)) w.stable = false;
  }
  return w;
}

HamiltonianTail hamiltonian_tail(const ScatterSeries& s, const ScatterConfig& cfg) {
  cfg.validate();
  HamiltonianTail h;
  h.t = s.t;
  h.G = s.G;
  h.target = -2.0 * cfg.k / 3.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    const double t = s.t[i];
    if (t < cfg.fit_t_min - 1e-12 || t > cfg.fit_t_max + 1e-12 || s.G[i] == 0.0) continue;
    const double lx = std::log(t), ly = std::log(std::abs(s.G[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  h.fitted_points = m;
  if (m >= 2) {
    h.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    h.pass = h.slope <= h.target + cfg.slope_margin;
  }
  return h;
}

std::string scatter_json(const ScatterReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.cfg.k;
  j["delta"] = r.cfg.delta;
  j["checkpoints"] = r.state.checkpoints;
  j["tail_norms"] = r.state.tail_norms;
  j["M_T"] = r.decay.M_T;
  j["G_slope"] = r.tail.slope;
  nlohmann::ordered_json v;
  v["asymptotic_state"] = r.state.verdict;
  v["tail_ratios"] = r.state.tail_ratios;
  v["weighted_decay_stable"] = r.decay.stable;
  v["weighted_decay_ratios"] = r.decay.ratios;
  v["hamiltonian_tail_pass"] = r.tail.pass;
  v["validity_window"] = std::min(r.state.window, r.decay.window);
  v["within_window"] = r.state.within_window && r.decay.within_window;
  j["verdicts"] = v;
  return j.dump(2);
}

}  // namespace zk
