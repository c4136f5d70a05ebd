#include "zk/zk.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>

#include <json.hpp>

#include "zk/calculus.hpp"
#include "zk/error.hpp"
#include "zk/evolve.hpp"
#include "zk/groundstate.hpp"
#include "zk/initial.hpp"
#include "zk/io.hpp"
#include "zk/linear_group.hpp"
#include "zk/probes.hpp"
#include "zk/scattering.hpp"
#include "zk/thresholds.hpp"

using json = nlohmann::ordered_json;

struct zk_field {
  zk::Field f;
};
struct zk_ground_state {
  zk::GroundState g;
};
struct zk_run {
  zk::EvolveResult r;
};

namespace {

thread_local std::string g_last_error;

zk_status to_status(zk::ErrorCode c) {
  switch (c) {
    case zk::ErrorCode::InvalidArgument: return ZK_ERR_INVALID_ARGUMENT;
    case zk::ErrorCode::NotConverged: return ZK_ERR_NOT_CONVERGED;
    case zk::ErrorCode::Numeric: return ZK_ERR_NUMERIC;
    case zk::ErrorCode::Io: return ZK_ERR_IO;
    case zk::ErrorCode::Domain: return ZK_ERR_DOMAIN;
  }
  return ZK_ERR_INTERNAL;
}

template <class Fn>
zk_status guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return ZK_OK;
  } catch (const zk::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("config: ") + e.what();
    return ZK_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ZK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ZK_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) zk::fail(zk::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Config reader that rejects keys nobody asked for.
class Config {
 public:
  explicit Config(const char* text) {
    if (text && *text) j_ = json::parse(text);
    if (j_.is_null()) j_ = json::object();
    zk::require(j_.is_object(), "config must be a JSON object");
  }
  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      zk::fail(zk::ErrorCode::InvalidArgument, "config key '" + key + "' has the wrong type");
    }
  }
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }
  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) zk::fail(zk::ErrorCode::InvalidArgument, "unknown config key '" + k + "'");
  }

 private:
  json j_;
  std::set<std::string> seen_;
};

zk::Rational read_pad(Config& c, zk::Rational fallback) {
  if (!c.has("pad")) return fallback;
  const json& v = c.raw("pad");
  if (v.is_string()) return zk::Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return zk::Rational(v.get<std::int64_t>());
  zk::fail(zk::ErrorCode::InvalidArgument, "config key 'pad' must be an integer or a ratio string like \"3/2\"");
}

json stats_json(const zk::ProbeStats& st) { return json::parse(zk::probe_stats_json(st)); }

json null_or(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

extern "C" {

const char* zk_last_error(void) { return g_last_error.c_str(); }
const char* zk_version(void) { return "0.1.0"; }

const char* zk_status_name(zk_status s) {
  switch (s) {
    case ZK_OK: return "ok";
    case ZK_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ZK_ERR_NOT_CONVERGED: return "not converged";
    case ZK_ERR_NUMERIC: return "numeric failure";
    case ZK_ERR_IO: return "i/o error";
    case ZK_ERR_DOMAIN: return "outside domain";
    case ZK_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void zk_string_free(char* s) { std::free(s); }

zk_status zk_field_create(int n, double box, const double* samples, zk_field** out) {
  return guard([&] {
    need(samples, "samples");
    need(out, "out");
    zk::GridSpec spec(n, box);
    std::vector<double> v(samples, samples + spec.size());
    *out = new zk_field{zk::Field(spec, std::move(v))};
  });
}

zk_status zk_field_from_descriptor(const char* descriptor, int n, double box, int k, const zk_ground_state* g,
                                   zk_field** out) {
  return guard([&] {
    need(descriptor, "descriptor");
    need(out, "out");
    zk::GridSpec spec(n, box);
    zk::GroundStateProvider provider = [g](int kq) -> zk::Field {
      if (!g) zk::fail(zk::ErrorCode::InvalidArgument, "qmul needs a ground state");
      if (g->g.k != kq)
        zk::fail(zk::ErrorCode::InvalidArgument,
                 "ground state is for k = " + std::to_string(g->g.k) + ", descriptor asks for k = " + std::to_string(kq));
      return g->g.Q;
    };
    *out = new zk_field{zk::make_initial(descriptor, spec, k, provider)};
  });
}

zk_status zk_field_load(const char* path, zk_field** out, int* k, double* time) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    zk::Snapshot s = zk::load_zkf(path);
    if (k) *k = s.header.k;
    if (time) *time = s.header.time;
    *out = new zk_field{std::move(s.field)};
  });
}

zk_status zk_field_save(const zk_field* f, const char* path, int k, double time) {
  return guard([&] {
    need(f, "field");
    need(path, "path");
    zk::save_zkf(path, f->f, k, time);
  });
}

zk_status zk_field_grid(const zk_field* f, int* n, double* box) {
  return guard([&] {
    need(f, "field");
    if (n) *n = f->f.spec().n;
    if (box) *box = f->f.spec().box;
  });
}

zk_status zk_field_samples(const zk_field* f, const double** data, size_t* len) {
  return guard([&] {
    need(f, "field");
    need(data, "data");
    *data = f->f.samples().data();
    if (len) *len = f->f.samples().size();
  });
}

zk_status zk_field_scale(zk_field* f, double c) {
  return guard([&] {
    need(f, "field");
    zk::require(std::isfinite(c), "scale factor must be finite");
    for (double& v : f->f.mutable_samples()) v *= c;
  });
}

zk_status zk_field_summary(const zk_field* f, int k, char** out) {
  return guard([&] {
    need(f, "field");
    need(out, "out");
    json j;
    j["mass"] = zk::mass(f->f);
    j["energy"] = zk::energy(f->f, k);
    j["grad_sq"] = zk::gradient_l2_squared(f->f);
    j["linf"] = f->f.max_abs();
    j["boundary_fraction"] = zk::boundary_fraction(f->f);
    *out = dup(j.dump(2));
  });
}

void zk_field_free(zk_field* f) { delete f; }

zk_status zk_groundstate_solve(const char* config_json, zk_ground_state** out) {
  return guard([&] {
    need(out, "out");
    Config c(config_json);
    const int k = c.get<int>("k", 3);
    const int n = c.get<int>("n", 256);
    const double box = c.get<double>("box", 16.0);
    zk::SolveOptions o;
    o.tol = c.get<double>("tol", o.tol);
    o.max_iters = c.get<int>("max_iters", o.max_iters);
    o.burn_in = c.get<int>("burn_in", o.burn_in);
    o.dealiased = c.get<bool>("dealiased", o.dealiased);
    c.finish();
    *out = new zk_ground_state{zk::solve_ground_state(k, zk::GridSpec(n, box), o)};
  });
}

zk_status zk_groundstate_from_field(int k, const zk_field* Q, int dealiased, zk_ground_state** out) {
  return guard([&] {
    need(Q, "field");
    need(out, "out");
    *out = new zk_ground_state{zk::ground_state_from_field(k, Q->f, dealiased != 0)};
  });
}

zk_status zk_groundstate_field(const zk_ground_state* g, zk_field** out) {
  return guard([&] {
    need(g, "ground state");
    need(out, "out");
    *out = new zk_field{g->g.Q};
  });
}

int zk_groundstate_k(const zk_ground_state* g) { return g ? g->g.k : 0; }

zk_status zk_groundstate_report(const zk_ground_state* g, char** out) {
  return guard([&] {
    need(g, "ground state");
    need(out, "out");
    json j = json::parse(zk::ground_state_sidecar_json(g->g));
    const auto p = zk::pohozaev_check(g->g);
    j["pohozaev"] = {{"multiply_by_Q", p.multiply_by_Q},
                     {"multiply_by_x_grad", p.multiply_by_x_grad},
                     {"mass_gradient", p.mass_gradient}};
    const auto e = zk::ground_state_energy(g->g);
    j["energy"] = {{"numeric", e.numeric}, {"closed_form", e.closed_form}, {"relative_gap", e.relative_gap}};
    const double worst = std::max({p.multiply_by_Q, p.multiply_by_x_grad, p.mass_gradient});
    j["pass"] = worst <= zk::kPohozaevTol && g->g.residual <= zk::kSolverResidualTol &&
                e.relative_gap <= zk::kEnergyIdentityTol;
    *out = dup(j.dump(2));
  });
}

void zk_groundstate_free(zk_ground_state* g) { delete g; }

zk_status zk_gn_constant(const zk_ground_state* g, const char* config_json, char** out) {
  return guard([&] {
    need(g, "ground state");
    need(out, "out");
    Config c(config_json);
    const int count = c.get<int>("random_fields", 50);
    const double amp = c.get<double>("amplitude", 1.0);
    const auto seed = c.get<std::uint64_t>("seed", 1);
    const bool psi = c.get<bool>("psi_solve", true);
    zk::SolveOptions o;
    o.tol = c.get<double>("tol", o.tol);
    c.finish();
    zk::require(count >= 0, "random_fields must be nonnegative");

    std::vector<zk::Field> family;
    for (int i = 0; i < count; ++i)
      family.push_back(zk::random_smooth_field(g->g.Q.spec(), seed + static_cast<std::uint64_t>(i), amp));
    std::optional<double> psi_mass;
    if (psi) psi_mass = zk::solve_psi_and_rescale(g->g.k, g->g.Q.spec(), o).psi_mass;
    const zk::GNReport r = zk::sharp_constant(g->g, psi_mass, family);

    json j;
    j["k"] = r.k;
    j["K_opt_pow"] = r.K_opt_pow;
    j["K_opt_pow_psi"] = r.K_opt_pow_psi;
    j["psi_solved"] = psi;
    j["formula_gap"] = r.formula_gap;
    j["equality_ratio_at_Q"] = r.equality_ratio_at_Q;
    j["equality_gap_at_Q"] = r.equality_gap_at_Q;
    j["worst_ratio"] = r.worst_ratio;
    j["worst_violation"] = r.worst_violation;
    j["family_size"] = r.family_size;
    j["pass"] = r.formula_gap <= zk::kGNFormulaTol && r.worst_violation <= zk::kGNViolationTol &&
                r.equality_ratio_at_Q >= 1.0 - zk::kGNEqualityTol;
    *out = dup(j.dump(2));
  });
}

zk_status zk_threshold_report(const zk_field* u0, const zk_ground_state* g, char** out) {
  return guard([&] {
    need(u0, "field");
    need(g, "ground state");
    need(out, "out");
    *out = dup(zk::threshold_json(zk::threshold_check(u0->f, g->g.k, g->g)));
  });
}

zk_status zk_dichotomy_report(const zk_field* u0, const zk_ground_state* g, char** out) {
  return guard([&] {
    need(u0, "field");
    need(g, "ground state");
    need(out, "out");
    const zk::DichotomyCurve c = zk::dichotomy_curve(u0->f, g->g.k, g->g);
    json j;
    j["k"] = c.k;
    j["A"] = c.A;
    j["B"] = c.B;
    j["x0"] = c.x0;
    j["f_x0"] = c.f_x0;
    j["X0"] = c.X0;
    j["curve_identity_gap"] = c.curve_identity_gap;
    j["trapped"] = c.trapped;
    j["agrees_with_report"] = c.agrees_with_report;
    *out = dup(j.dump(2));
  });
}

zk_status zk_dichotomy_audit(const zk_ground_state* g, const char* config_json, char** out) {
  return guard([&] {
    need(g, "ground state");
    need(out, "out");
    Config c(config_json);
    const int fields = c.get<int>("fields", 20);
    const auto seed = c.get<std::uint64_t>("seed", 1);
    const double lo = c.get<double>("amp_min", 0.2);
    const double hi = c.get<double>("amp_max", 2.0);
    c.finish();
    const zk::DichotomyAudit a = zk::dichotomy_audit(g->g, fields, seed, lo, hi);
    json j;
    j["fields"] = a.fields;
    j["trapped"] = a.trapped;
    j["disagreements"] = a.disagreements;
    j["max_curve_identity_gap"] = a.max_curve_identity_gap;
    j["pass"] = a.disagreements == 0;
    *out = dup(j.dump(2));
  });
}

zk_status zk_evolve(const zk_field* u0, const char* config_json, zk_snapshot_fn cb, void* user, zk_run** out) {
  return guard([&] {
    need(u0, "field");
    need(out, "out");
    Config c(config_json);
    zk::EvolveConfig e;
    e.k = c.get<int>("k", e.k);
    e.dt = c.get<double>("dt", e.dt);
    e.T_end = c.get<double>("T", e.T_end);
    if (c.has("pad")) e.dealias_pad = read_pad(c, zk::Rational(1));
    const std::string mode = c.get<std::string>("dealias", "padded");
    if (mode == "padded")
      e.dealias_mode = zk::DealiasMode::Padded;
    else if (mode == "two_thirds")
      e.dealias_mode = zk::DealiasMode::TwoThirds;
    else
      zk::fail(zk::ErrorCode::InvalidArgument, "dealias must be \"padded\" or \"two_thirds\"");
    e.snapshot_stride = c.get<int>("snapshot_stride", e.snapshot_stride);
    e.boundary_tolerance = c.get<double>("boundary_tolerance", e.boundary_tolerance);
    e.growth_factor = c.get<double>("growth_factor", e.growth_factor);
    e.check_step_budget = c.get<bool>("check_step_budget", e.check_step_budget);
    e.keep_snapshots = c.get<bool>("keep_snapshots", false);
    c.finish();

    zk::SnapshotObserver obs;
    if (cb)
      obs = [&](double t, const zk::Field& u) {
        zk_field view{u};
        if (cb(t, &view, user) != 0) throw std::runtime_error("run aborted by snapshot callback");
      };
    *out = new zk_run{zk::evolve(u0->f, e, obs)};
  });
}

zk_status zk_run_ledger_csv(const zk_run* r, char** csv) {
  return guard([&] {
    need(r, "run");
    need(csv, "out");
    *csv = dup(r->r.ledger.csv());
  });
}

zk_status zk_run_report(const zk_run* r, char** out) {
  return guard([&] {
    need(r, "run");
    need(out, "out");
    json j;
    j["status"] = zk::to_string(r->r.status);
    j["t_reached"] = r->r.t_reached;
    j["steps"] = r->r.steps;
    j["dt_used"] = r->r.dt_used;
    j["message"] = r->r.message;
    j["max_mass_drift"] = r->r.ledger.max_mass_drift();
    j["max_energy_drift"] = r->r.ledger.max_energy_drift();
    *out = dup(j.dump(2));
  });
}

zk_status zk_run_final_state(const zk_run* r, zk_field** out) {
  return guard([&] {
    need(r, "run");
    need(out, "out");
    *out = new zk_field{r->r.final_state};
  });
}

size_t zk_run_snapshot_count(const zk_run* r) { return r ? r->r.trajectory.size() : 0; }

zk_status zk_run_snapshot(const zk_run* r, size_t i, double* t, zk_field** out) {
  return guard([&] {
    need(r, "run");
    need(out, "out");
    zk::require(i < r->r.trajectory.size(), "snapshot index out of range");
    if (t) *t = r->r.trajectory.times[i];
    *out = new zk_field{r->r.trajectory.fields[i]};
  });
}

void zk_run_free(zk_run* r) { delete r; }

zk_status zk_trap_audit(const char* ledger_csv, const zk_field* u0, const zk_ground_state* g, char** out,
                        int* pass) {
  return guard([&] {
    need(ledger_csv, "ledger");
    need(u0, "field");
    need(g, "ground state");
    need(out, "out");
    const int k = g->g.k;
    const zk::ConservedLedger ledger = zk::ConservedLedger::parse_csv(ledger_csv, k);
    const zk::ThresholdReport rep = zk::threshold_check(u0->f, k, g->g);
    std::optional<zk::DichotomyCurve> curve;
    if (k >= 3) curve = zk::dichotomy_curve(u0->f, k, g->g);
    const bool below = rep.cond_12 && rep.cond_13;
    const zk::TrapVerdict v = zk::trap_monitor(ledger, rep, curve ? &*curve : nullptr);
    json j;
    j["k"] = k;
    j["below_threshold"] = below;
    j["rows"] = v.rows;
    j["min_margin"] = v.min_margin;
    j["first_violation_time"] = v.first_violation_time ? json(*v.first_violation_time) : json(nullptr);
    j["apriori_checked"] = v.apriori_checked;
    j["apriori_min_slack"] = null_or(v.apriori_min_slack);
    j["first_apriori_violation_time"] =
        v.first_apriori_violation_time ? json(*v.first_apriori_violation_time) : json(nullptr);
    j["apriori_tolerance"] = zk::kAprioriTolerance;
    // The trap is only a claim for data below threshold.
    const bool ok = !below || v.pass;
    j["pass"] = ok;
    if (pass) *pass = ok ? 1 : 0;
    *out = dup(j.dump(2));
  });
}

zk_status zk_decay_probe(const zk_field* f, const char* config_json, char** out) {
  return guard([&] {
    need(f, "field");
    need(out, "out");
    Config c(config_json);
    zk::DecayProbeConfig d;
    d.theta = c.get<double>("theta", d.theta);
    d.eps = c.get<double>("eps", d.eps);
    d.t_min = c.get<double>("t_min", d.t_min);
    d.t_max = c.get<double>("t_max", d.t_max);
    d.samples = c.get<int>("samples", d.samples);
    d.box_doubling_check = c.get<bool>("box_doubling_check", d.box_doubling_check);
    d.validity_tol = c.get<double>("validity_tol", d.validity_tol);
    c.finish();
    const zk::DecayProbeResult r = zk::decay_probe(f->f, d);
    json rows = json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"t", row.param}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"ratio", row.ratio}});
    json j;
    j["theta"] = d.theta;
    j["p"] = d.p();
    j["expected_slope"] = -2.0 * d.theta / 3.0;
    j["slope"] = r.slope;
    j["intercept"] = r.intercept;
    j["constant"] = r.constant;
    j["max_boundary_fraction"] = r.max_boundary_fraction;
    j["boundary_contaminated"] = r.boundary_contaminated;
    j["torus_deviation"] = r.torus_deviation;
    j["torus_valid"] = r.torus_valid;
    j["horizon"] = null_or(r.horizon);
    j["rows"] = rows;
    j["pass"] = std::abs(r.slope + 2.0 * d.theta / 3.0) <= zk::kDecaySlopeTol && r.torus_valid;
    *out = dup(j.dump(2));
  });
}

zk_status zk_dispersive_probe(const char* estimate, const char* config_json, uint64_t seed, char** out, int* pass) {
  return guard([&] {
    need(estimate, "estimate");
    need(out, "out");
    Config c(config_json);
    zk::ProbeSuiteConfig p;
    p.grid = zk::GridSpec(c.get<int>("n", p.grid.n), c.get<double>("box", p.grid.box));
    p.width = c.get<double>("width", p.width);
    p.modes = c.get<std::vector<int>>("modes", p.modes);
    p.window.T = c.get<double>("T", p.window.T);
    p.window.time_samples = c.get<int>("time_samples", p.window.time_samples);
    p.window.box_doubling_check = c.get<bool>("box_doubling_check", p.window.box_doubling_check);
    p.window.validity_tol = c.get<double>("validity_tol", p.window.validity_tol);
    p.s_values = c.get<std::vector<double>>("s_values", p.s_values);
    p.theta = c.get<double>("theta", p.theta);
    p.eps = c.get<double>("eps", p.eps);
    p.random_fields = c.get<int>("random_fields", p.random_fields);
    c.finish();
    p.seed = seed;

    json j;
    const std::string est = estimate;
    j["estimate"] = est;
    bool ok = false;
    if (est == "smoothing") {
      const auto s = zk::smoothing_suite(p);
      j["stats"] = stats_json(s.stats);
      j["spread_max"] = zk::kSmoothingSpreadMax;
      ok = s.pass;
    } else if (est == "maximal") {
      const auto m = zk::maximal_suite(p);
      json runs = json::array();
      for (std::size_t i = 0; i < m.stats.size(); ++i)
        runs.push_back({{"s", m.s_values[i]}, {"class", m.classes[i]}, {"stats", stats_json(m.stats[i])}});
      j["runs"] = runs;
      ok = m.pass;
    } else if (est == "strichartz") {
      const auto s = zk::strichartz_suite(p);
      j["theta"] = p.theta;
      j["eps"] = p.eps;
      j["stats"] = stats_json(s.stats);
      j["spread_max"] = zk::kStrichartzSpreadMax;
      ok = s.pass;
    } else {
      zk::fail(zk::ErrorCode::InvalidArgument,
               "unknown estimate '" + est + "' (valid: smoothing, maximal, strichartz)");
    }
    j["pass"] = ok;
    if (pass) *pass = ok ? 1 : 0;
    *out = dup(j.dump(2));
  });
}

zk_status zk_scatter(const zk_field* u0, const char* config_json, char** out, zk_field** f_plus, int* pass) {
  return guard([&] {
    need(u0, "field");
    need(out, "out");
    Config c(config_json);
    zk::ScatterConfig s;
    s.k = c.get<int>("k", s.k);
    s.delta = c.get<double>("delta", s.delta);
    s.checkpoints = c.get<std::vector<double>>("checkpoints", s.checkpoints);
    s.horizons = c.get<std::vector<double>>("horizons", s.horizons);
    s.fit_t_min = c.get<double>("fit_t_min", s.fit_t_min);
    s.fit_t_max = c.get<double>("fit_t_max", s.fit_t_max);
    s.window_boundary_tol = c.get<double>("window_boundary_tol", s.window_boundary_tol);
    s.tail_ratio_max = c.get<double>("tail_ratio_max", s.tail_ratio_max);
    s.decay_ratio_max = c.get<double>("decay_ratio_max", s.decay_ratio_max);
    s.slope_margin = c.get<double>("slope_margin", s.slope_margin);
    zk::EvolveConfig e;
    e.k = s.k;
    e.dt = c.get<double>("dt", 0.02);
    e.dealias_pad = read_pad(c, zk::Rational(1));
    const double interval = c.get<double>("sample_interval", 0.5);
    const bool normalize = c.get<bool>("normalize", true);
    c.finish();
    s.validate();

    zk::Field u = u0->f;
    const double small0 = zk::smallness(u, s.k);
    zk::require(small0 > 0.0, "scattering run needs nonzero data");
    if (normalize) u = u.scaled(zk::kSmallnessFraction * s.delta / small0);
    const double small = zk::smallness(u, s.k);

    double T = s.checkpoints.back();
    if (!s.horizons.empty()) T = std::max(T, s.horizons.back());
    zk::require(interval > 0.0, "sample_interval must be positive");
    const double steps_per_sample = interval / e.dt;
    zk::require(std::abs(steps_per_sample - std::round(steps_per_sample)) < 1e-9,
                "sample_interval must be a multiple of dt");
    for (double t : s.checkpoints) {
      const double q = t / interval;
      zk::require(std::abs(q - std::round(q)) < 1e-9, "checkpoints must be multiples of sample_interval");
    }
    e.T_end = T;
    e.snapshot_stride = static_cast<int>(std::lround(steps_per_sample));
    e.keep_snapshots = false;
    e.boundary_tolerance = 1.0;  // validity is judged by the scattering windows

    zk::ScatterRecorder rec(s);
    const zk::EvolveResult run = zk::evolve(u, e, [&](double t, const zk::Field& f) { rec(t, f); });
    zk::require(run.status == zk::EvolveStatus::Completed, "scattering run stopped early: " + run.message);

    zk::ScatterReport rep;
    rep.cfg = s;
    rep.state = zk::asymptotic_state(rec.checkpoints(), s);
    rep.decay = zk::weighted_decay(rec.series(), s);
    rep.tail = zk::hamiltonian_tail(rec.series(), s);
    json j = json::parse(zk::scatter_json(rep));
    j["smallness"] = small;
    j["smallness_ok"] = small < s.delta;
    const bool ok = j["smallness_ok"].get<bool>() && rep.state.cauchy && rep.decay.stable && rep.tail.pass;
    j["pass"] = ok;
    if (pass) *pass = ok ? 1 : 0;
    if (f_plus) *f_plus = new zk_field{rep.state.f_plus};
    *out = dup(j.dump(2));
  });
}

zk_status zk_indices(int k, char** out) {
  return guard([&] {
    need(out, "out");
    json j;
    j["k"] = k;
    j["s_k"] = zk::critical_index(k);
    if (k >= 3) {
      const zk::CriticalIndices c = zk::critical_indices(k);
      j["s_k_star"] = c.s_k_star;
      j["equal"] = c.equal;
      j["star_above"] = c.star_above;
    } else {
      j["s_k_star"] = nullptr;
      j["equal"] = nullptr;
      j["star_above"] = nullptr;
    }
    const zk::Feasibility f = zk::k_feasibility(k);
    j["feasible"] = f.feasible;
    j["feasibility_threshold"] = f.threshold;
    *out = dup(j.dump(2));
  });
}

}  // extern "C"
