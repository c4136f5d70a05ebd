// zk: command-line driver over the C API.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zk/zk.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdict = 2;

struct OpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(zk_status s, const std::string& what) {
  if (s != ZK_OK) throw OpError(what + ": " + zk_status_name(s) + ": " + zk_last_error());
}

// Owning wrappers for C handles and strings.
struct FieldPtr {
  zk_field* p = nullptr;
  FieldPtr() = default;
  FieldPtr(const FieldPtr&) = delete;
  FieldPtr& operator=(const FieldPtr&) = delete;
  ~FieldPtr() { zk_field_free(p); }
};
struct GroundPtr {
  zk_ground_state* p = nullptr;
  GroundPtr() = default;
  GroundPtr(const GroundPtr&) = delete;
  GroundPtr& operator=(const GroundPtr&) = delete;
  ~GroundPtr() { zk_groundstate_free(p); }
};
struct RunPtr {
  zk_run* p = nullptr;
  RunPtr() = default;
  RunPtr(const RunPtr&) = delete;
  RunPtr& operator=(const RunPtr&) = delete;
  ~RunPtr() { zk_run_free(p); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  zk_string_free(s);
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OpError("cannot open " + tmp.string());
    out << contents;
    if (!out) throw OpError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OpError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Keys accepted in a config document, per section.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"seed", "out_dir", "grid", "model", "init", "groundstate", "gn", "evolve", "threshold", "decay", "probe",
            "scatter"}},
      {"grid", {"n", "box"}},
      {"model", {"k"}},
      {"groundstate", {"tol", "max_iters", "burn_in", "dealiased"}},
      {"gn", {"random_fields", "amplitude", "psi_solve"}},
      {"evolve", {"dt", "T", "pad", "dealias", "snapshot_stride", "boundary_tolerance", "growth_factor",
                  "check_step_budget", "save_snapshots", "trap"}},
      {"threshold", {"audit_fields", "amp_min", "amp_max"}},
      {"decay", {"theta", "eps", "t_min", "t_max", "samples", "box_doubling_check", "validity_tol"}},
      {"probe", {"width", "modes", "T", "time_samples", "box_doubling_check", "validity_tol", "s_values", "theta",
                 "eps", "random_fields"}},
      {"scatter", {"delta", "checkpoints", "horizons", "fit_t_min", "fit_t_max", "window_boundary_tol",
                   "tail_ratio_max", "decay_ratio_max", "slope_margin", "dt", "pad", "sample_interval",
                   "normalize"}},
  };
  return s;
}

void validate_config(const json& cfg) {
  if (!cfg.is_object()) throw OpError("config: top level must be a JSON object");
  const auto& sc = schema();
  for (const auto& [key, val] : cfg.items()) {
    if (!sc.at("").count(key)) throw OpError("config: unknown key '" + key + "'");
    const auto it = sc.find(key);
    if (it == sc.end()) continue;
    if (!val.is_object()) throw OpError("config: '" + key + "' must be an object");
    for (const auto& [sub, v] : val.items())
      if (!it->second.count(sub)) throw OpError("config: unknown key '" + key + "." + sub + "'");
  }
}

// Per-command defaults for the grid.
struct GridDefault {
  int n;
  double box;
};
GridDefault grid_default(const std::string& cmd) {
  if (cmd == "decay") return {1024, 80.0 * std::numbers::pi};
  if (cmd == "dispersive-probe") return {256, 32.0};
  if (cmd == "scatter") return {1024, 80.0};
  if (cmd == "evolve") return {256, 20.0};
  return {256, 16.0};
}

class Runner {
 public:
  Runner(std::string cmd, json cfg) : cmd_(std::move(cmd)), cfg_(std::move(cfg)) {
    out_dir_ = cfg_.value("out_dir", std::string("zk-out"));
    const GridDefault g = grid_default(cmd_);
    n_ = section("grid").value("n", g.n);
    box_ = section("grid").value("box", g.box);
    k_ = section("model").value("k", 3);
    seed_ = cfg_.value("seed", std::uint64_t{1});
  }

  int run() {
    started_ = utc_now();
    int code = kExitOk;
    if (cmd_ == "groundstate") code = groundstate();
    else if (cmd_ == "gn-constant") code = gn_constant();
    else if (cmd_ == "evolve") code = evolve();
    else if (cmd_ == "threshold") code = threshold();
    else if (cmd_ == "decay") code = decay();
    else if (cmd_ == "dispersive-probe") code = probe();
    else if (cmd_ == "scatter") code = scatter();
    else if (cmd_ == "indices") code = indices();
    write_manifest(code);
    return code;
  }

  std::string estimate;
  std::string audit_ledger;

 private:
  json section(const std::string& name) const {
    return cfg_.contains(name) ? cfg_.at(name) : json::object();
  }

  fs::path path(const std::string& rel) const { return fs::path(out_dir_) / rel; }

  void emit(const std::string& rel, const std::string& contents) {
    write_atomic(path(rel), contents);
    files_.push_back(rel);
  }
  void emit_field(const std::string& rel, const zk_field* f, int k, double t) {
    fs::create_directories(path(rel).parent_path());
    check(zk_field_save(f, path(rel).c_str(), k, t), "save " + rel);
    files_.push_back(rel);
  }

  // Ground state for (k, n, box, tol), solved once per out_dir unless use_cache is off.
  void ground_state(int k, GroundPtr& g, bool use_cache = true) {
    json gs = section("groundstate");
    const double tol = gs.value("tol", 1e-12);
    const bool dealiased = gs.value("dealiased", true);
    char key[160];
    std::snprintf(key, sizeof key, "cache/Q_k%d_n%d_box%.17g_tol%.3g%s.zkf", k, n_, box_, tol,
                  dealiased ? "" : "_colloc");
    const fs::path p = path(key);
    if (use_cache && fs::exists(p)) {
      FieldPtr q;
      int kq = 0;
      check(zk_field_load(p.c_str(), &q.p, &kq, nullptr), "load cached ground state");
      if (kq == k) {
        check(zk_groundstate_from_field(k, q.p, dealiased ? 1 : 0, &g.p), "cached ground state");
        return;
      }
    }
    json c = gs;
    c["k"] = k;
    c["n"] = n_;
    c["box"] = box_;
    check(zk_groundstate_solve(c.dump().c_str(), &g.p), "ground state solve");
    FieldPtr q;
    check(zk_groundstate_field(g.p, &q.p), "ground state field");
    emit_field(key, q.p, k, 0.0);
  }

  // Initial data; qmul descriptors pull the ground state they name.
  void initial(const std::string& fallback, FieldPtr& f, GroundPtr& g) {
    const std::string desc = cfg_.value("init", fallback);
    int kq = k_;
    if (desc.rfind("qmul:", 0) == 0) {
      const auto pos = desc.find("k=");
      if (pos != std::string::npos) kq = std::atoi(desc.c_str() + pos + 2);
      ground_state(kq, g);
    }
    check(zk_field_from_descriptor(desc.c_str(), n_, box_, k_, g.p, &f.p), "initial data '" + desc + "'");
  }

  int verdict(bool pass, const std::string& name) {
    verdicts_[name] = pass;
    return pass ? kExitOk : kExitVerdict;
  }

  int groundstate() {
    GroundPtr g;
    ground_state(k_, g, false);
    const json rep = json::parse(take([&] {
      char* s = nullptr;
      check(zk_groundstate_report(g.p, &s), "ground state report");
      return s;
    }()));
    FieldPtr q;
    check(zk_groundstate_field(g.p, &q.p), "ground state field");
    emit_field("Q_k" + std::to_string(k_) + ".zkf", q.p, k_, 0.0);
    emit("groundstate.json", rep.dump(2) + "\n");
    std::cout << rep.dump(2) << "\n";
    return verdict(rep.at("pass").get<bool>(), "groundstate");
  }

  int gn_constant() {
    GroundPtr g;
    ground_state(k_, g);
    json c = section("gn");
    c["seed"] = seed_;
    c["tol"] = section("groundstate").value("tol", 1e-12);
    char* s = nullptr;
    check(zk_gn_constant(g.p, c.dump().c_str(), &s), "gn-constant");
    const json rep = json::parse(take(s));
    emit("gn_constant.json", rep.dump(2) + "\n");
    std::cout << rep.dump(2) << "\n";
    return verdict(rep.at("pass").get<bool>(), "gn_constant");
  }

  int evolve() {
    json ev = section("evolve");
    const bool save = ev.value("save_snapshots", false);
    const bool trap = ev.value("trap", true);
    ev.erase("save_snapshots");
    ev.erase("trap");
    ev["k"] = k_;

    GroundPtr g;
    FieldPtr u0;
    initial("gauss:amp=0.2,width=2", u0, g);
    if (trap && k_ >= 2 && !g.p) ground_state(k_, g);

    std::string ledger;
    if (!audit_ledger.empty()) {
      ledger = read_text(audit_ledger);
    } else {
      struct Ctx {
        Runner* self;
        int k;
        int index;
      } ctx{this, k_, 0};
      auto cb = [](double t, const zk_field* u, void* user) -> int {
        auto* c = static_cast<Ctx*>(user);
        char name[64];
        std::snprintf(name, sizeof name, "snapshots/snap_%06d.zkf", c->index++);
        c->self->emit_field(name, u, c->k, t);
        return 0;
      };
      RunPtr run;
      check(zk_evolve(u0.p, ev.dump().c_str(), save ? +cb : nullptr, &ctx, &run.p), "evolve");
      char* s = nullptr;
      check(zk_run_ledger_csv(run.p, &s), "ledger");
      ledger = take(s);
      emit("ledger.csv", ledger);
      check(zk_run_report(run.p, &s), "run report");
      const json rep = json::parse(take(s));
      emit("evolve.json", rep.dump(2) + "\n");
      FieldPtr fin;
      check(zk_run_final_state(run.p, &fin.p), "final state");
      emit_field("final.zkf", fin.p, k_, rep.at("t_reached").get<double>());
      std::cout << rep.dump(2) << "\n";
    }
    if (!trap || !g.p) return verdict(true, "evolve");
    char* s = nullptr;
    int pass = 0;
    check(zk_trap_audit(ledger.c_str(), u0.p, g.p, &s, &pass), "trap audit");
    const json tv = json::parse(take(s));
    emit("trap.json", tv.dump(2) + "\n");
    std::cout << tv.dump(2) << "\n";
    return verdict(pass != 0, "trap");
  }

  int threshold() {
    GroundPtr g;
    FieldPtr u0;
    initial("gauss:amp=0.2,width=3", u0, g);
    if (!g.p) ground_state(k_, g);
    char* s = nullptr;
    check(zk_threshold_report(u0.p, g.p, &s), "threshold");
    const json rep = json::parse(take(s));
    emit("threshold.json", rep.dump(2) + "\n");
    std::cout << rep.dump(2) << "\n";
    if (k_ < 3) return verdict(true, "threshold");
    check(zk_dichotomy_report(u0.p, g.p, &s), "dichotomy");
    const json dc = json::parse(take(s));
    emit("dichotomy.json", dc.dump(2) + "\n");
    bool ok = dc.at("agrees_with_report").get<bool>();
    const json th = section("threshold");
    const int fields = th.value("audit_fields", 0);
    if (fields > 0) {
      json ac{{"fields", fields}, {"seed", seed_}};
      if (th.contains("amp_min")) ac["amp_min"] = th.at("amp_min");
      if (th.contains("amp_max")) ac["amp_max"] = th.at("amp_max");
      check(zk_dichotomy_audit(g.p, ac.dump().c_str(), &s), "dichotomy audit");
      const json au = json::parse(take(s));
      emit("dichotomy_audit.json", au.dump(2) + "\n");
      ok = ok && au.at("pass").get<bool>();
    }
    return verdict(ok, "dichotomy_equivalence");
  }

  int decay() {
    GroundPtr g;
    FieldPtr f;
    initial("gauss:amp=1,width=0.6", f, g);
    char* s = nullptr;
    check(zk_decay_probe(f.p, section("decay").dump().c_str(), &s), "decay probe");
    const json rep = json::parse(take(s));
    emit("decay.json", rep.dump(2) + "\n");
    std::cout << rep.dump(2) << "\n";
    return verdict(rep.at("pass").get<bool>(), "decay");
  }

  int probe() {
    json c = section("probe");
    c["n"] = n_;
    c["box"] = box_;
    char* s = nullptr;
    int pass = 0;
    check(zk_dispersive_probe(estimate.c_str(), c.dump().c_str(), seed_, &s, &pass), "dispersive probe");
    const json rep = json::parse(take(s));
    emit("probe_" + estimate + ".json", rep.dump(2) + "\n");
    std::cout << rep.dump(2) << "\n";
    return verdict(pass != 0, "probe_" + estimate);
  }

  int scatter() {
    GroundPtr g;
    FieldPtr u0;
    initial("gauss:amp=1,width=1", u0, g);
    json c = section("scatter");
    c["k"] = k_;
    char* s = nullptr;
    FieldPtr fplus;
    int pass = 0;
    check(zk_scatter(u0.p, c.dump().c_str(), &s, &fplus.p, &pass), "scatter");
    const json rep = json::parse(take(s));
    emit("scatter.json", rep.dump(2) + "\n");
    const double t_last = rep.at("checkpoints").back().get<double>();
    emit_field("f_plus.zkf", fplus.p, k_, t_last);
    std::cout << rep.dump(2) << "\n";
    return verdict(pass != 0, "scatter");
  }

  int indices() {
    char* s = nullptr;
    check(zk_indices(k_, &s), "indices");
    const json rep = json::parse(take(s));
    emit("indices.json", rep.dump(2) + "\n");
    std::cout << rep.dump(2) << "\n";
    return kExitOk;
  }

  void write_manifest(int code) {
    json m;
    m["tool"] = "zk";
    m["version"] = zk_version();
    m["command"] = cmd_;
    m["config"] = cfg_;
    json hashed = cfg_;
    hashed.erase("out_dir");
    m["config_hash"] = hex64(fnv1a(cmd_ + "\n" + hashed.dump()));
    m["started"] = started_;
    m["finished"] = utc_now();
    m["files"] = files_;
    m["verdicts"] = verdicts_;
    m["exit_code"] = code;
    write_atomic(path("manifest.json"), m.dump(2) + "\n");
  }

  std::string cmd_;
  json cfg_;
  std::string out_dir_;
  int n_ = 0;
  double box_ = 0.0;
  int k_ = 3;
  std::uint64_t seed_ = 1;
  std::string started_;
  std::vector<std::string> files_;
  json verdicts_ = json::object();
};

// Flag values that override config keys when given.
struct Overrides {
  std::optional<int> k, n, max_iters, random_fields, samples, audit_fields, snapshot_stride;
  std::optional<double> box, tol, dt, T, theta, t_min, t_max, delta, boundary_tolerance;
  std::optional<std::string> init, pad, dealias;
  bool collocation = false, save_snapshots = false, no_trap = false;
};

template <class T>
void put(json& cfg, const std::string& section, const std::string& key, const std::optional<T>& v) {
  if (!v) return;
  if (section.empty())
    cfg[key] = *v;
  else
    cfg[section][key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the generalized Zakharov-Kuznetsov equation"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path, out_dir, estimate, audit_ledger;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON config; flags override its keys");
  app.add_option("--out-dir", out_dir, "directory for every output (default zk-out)");
  app.add_option("--seed", seed, "seed for random field families");
  Overrides o;

  auto grid_flags = [&](CLI::App* s) {
    s->add_option("--k", o.k, "power k");
    s->add_option("--n", o.n, "grid points per axis");
    s->add_option("--box", o.box, "half box length L");
  };
  auto* gs = app.add_subcommand("groundstate", "solve for Q and check the Pohozaev identities");
  grid_flags(gs);
  gs->add_option("--tol", o.tol, "residual tolerance");
  gs->add_option("--max-iters", o.max_iters, "iteration cap");
  gs->add_flag("--collocation", o.collocation, "pointwise power instead of the de-aliased one");
  auto* gn = app.add_subcommand("gn-constant", "sharp Gagliardo-Nirenberg constant audit");
  grid_flags(gn);
  gn->add_option("--tol", o.tol, "ground state tolerance");
  gn->add_option("--random-fields", o.random_fields, "size of the audited family");
  auto* ev = app.add_subcommand("evolve", "integrate the equation and record the conserved ledger");
  grid_flags(ev);
  ev->add_option("--init", o.init, "initial data descriptor");
  ev->add_option("--dt", o.dt, "time step");
  ev->add_option("--T", o.T, "final time");
  ev->add_option("--pad", o.pad, "padding ratio, e.g. 3/2");
  ev->add_option("--dealias", o.dealias, "padded or two_thirds");
  ev->add_option("--snapshot-stride", o.snapshot_stride, "steps between snapshots");
  ev->add_option("--boundary-tolerance", o.boundary_tolerance, "edge mass fraction that stops the run");
  ev->add_flag("--save-snapshots", o.save_snapshots, "write every snapshot as ZKF1");
  ev->add_flag("--no-trap", o.no_trap, "skip the trap monitor");
  ev->add_option("--audit-ledger", audit_ledger, "audit an existing ledger CSV instead of running");
  auto* th = app.add_subcommand("threshold", "threshold conditions and dichotomy curve for initial data");
  grid_flags(th);
  th->add_option("--init", o.init, "initial data descriptor");
  th->add_option("--audit-fields", o.audit_fields, "random fields for the equivalence audit");
  auto* dc = app.add_subcommand("decay", "linear L^p decay probe");
  grid_flags(dc);
  dc->add_option("--init", o.init, "data descriptor");
  dc->add_option("--theta", o.theta, "interpolation parameter");
  dc->add_option("--t-min", o.t_min, "fit window start");
  dc->add_option("--t-max", o.t_max, "fit window end");
  dc->add_option("--samples", o.samples, "time samples");
  auto* dp = app.add_subcommand("dispersive-probe", "smoothing, maximal function and Strichartz probes");
  grid_flags(dp);
  dp->add_option("--estimate", estimate, "smoothing|maximal|strichartz")
      ->required()
      ->check(CLI::IsMember({"smoothing", "maximal", "strichartz"}));
  auto* sc = app.add_subcommand("scatter", "small-data scattering diagnostics");
  grid_flags(sc);
  sc->add_option("--init", o.init, "initial data descriptor (rescaled to the smallness target)");
  sc->add_option("--delta", o.delta, "smallness target");
  sc->add_option("--dt", o.dt, "time step");
  auto* ix = app.add_subcommand("indices", "critical indices and feasibility");
  ix->add_option("--k", o.k, "power k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      try {
        cfg = json::parse(read_text(config_path));
      } catch (const json::parse_error& e) {
        throw OpError("config " + config_path + ": " + e.what());
      }
    }
    validate_config(cfg);
    if (!out_dir.empty()) cfg["out_dir"] = out_dir;
    if (seed) cfg["seed"] = *seed;
    put(cfg, "model", "k", o.k);
    put(cfg, "grid", "n", o.n);
    put(cfg, "grid", "box", o.box);
    put(cfg, "", "init", o.init);
    put(cfg, "groundstate", "tol", o.tol);
    put(cfg, "groundstate", "max_iters", o.max_iters);
    if (o.collocation) cfg["groundstate"]["dealiased"] = false;
    put(cfg, "gn", "random_fields", o.random_fields);
    const std::string cmd = app.get_subcommands().front()->get_name();
    put(cfg, cmd == "scatter" ? "scatter" : "evolve", "dt", o.dt);
    put(cfg, "evolve", "T", o.T);
    put(cfg, "evolve", "pad", o.pad);
    put(cfg, "evolve", "dealias", o.dealias);
    put(cfg, "evolve", "snapshot_stride", o.snapshot_stride);
    put(cfg, "evolve", "boundary_tolerance", o.boundary_tolerance);
    if (o.save_snapshots) cfg["evolve"]["save_snapshots"] = true;
    if (o.no_trap) cfg["evolve"]["trap"] = false;
    put(cfg, "threshold", "audit_fields", o.audit_fields);
    put(cfg, "decay", "theta", o.theta);
    put(cfg, "decay", "t_min", o.t_min);
    put(cfg, "decay", "t_max", o.t_max);
    put(cfg, "decay", "samples", o.samples);
    put(cfg, "scatter", "delta", o.delta);
    validate_config(cfg);

    Runner r(cmd, cfg);
    r.estimate = estimate;
    r.audit_ledger = audit_ledger;
    return r.run();
  } catch (const std::exception& e) {
    std::cerr << "zk: error: " << e.what() << "\n";
    return kExitError;
  }
}
