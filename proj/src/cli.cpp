#include "nfmkdv/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "nfmkdv/errors.hpp"
#include "nfmkdv/identities.hpp"
#include "nfmkdv/parallel.hpp"
#include "nfmkdv/resonance.hpp"
#include "nfmkdv/solver.hpp"
#include "nfmkdv/terms.hpp"

namespace nfmkdv {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& what) {
  if (!j.is_object()) throw ValidationError(what + " JSON must be an object");
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ValidationError("unknown " + what + " field '" + item.key() + "'");
  }
}

}  // namespace

Json lemma_spec_to_json(const LemmaCheckSpec& spec) {
  return Json{{"id", to_string(spec.id)}, {"s", spec.s},
              {"K", spec.K},              {"n", spec.n},
              {"ensemble", spec.ensemble}, {"amplitude", spec.amplitude},
              {"seed", spec.seed},        {"epsilon", spec.epsilon}};
}

LemmaCheckSpec lemma_spec_from_json(const Json& j) {
  reject_unknown(j, {"id", "s", "K", "n", "ensemble", "amplitude", "seed", "epsilon"}, "lemma spec");
  LemmaCheckSpec spec;
  try {
    if (j.contains("id")) spec.id = parse_lemma_id(j.at("id").get<std::string>());
    spec.s = j.value("s", spec.s);
    spec.K = j.value("K", spec.K);
    spec.n = j.value("n", spec.n);
    spec.ensemble = j.value("ensemble", spec.ensemble);
    spec.amplitude = j.value("amplitude", spec.amplitude);
    spec.seed = j.value("seed", spec.seed);
    spec.epsilon = j.value("epsilon", spec.epsilon);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed lemma spec field: ") + e.what());
  }
  return spec;
}

Json multiplier_spec_to_json(const MultiplierSpec& spec) {
  Json j{{"index", spec.index}, {"s", spec.s}, {"K", spec.K}, {"n", spec.n}, {"epsilon", spec.epsilon}};
  if (spec.region_set) j["region"] = to_string(spec.region);
  return j;
}

MultiplierSpec multiplier_spec_from_json(const Json& j) {
  reject_unknown(j, {"index", "s", "K", "n", "epsilon", "region"}, "multiplier spec");
  MultiplierSpec spec;
  try {
    spec.index = j.value("index", spec.index);
    spec.s = j.value("s", spec.s);
    spec.K = j.value("K", spec.K);
    spec.n = j.value("n", spec.n);
    spec.epsilon = j.value("epsilon", spec.epsilon);
    if (j.contains("region")) {
      spec.region = parse_multiplier_region(j.at("region").get<std::string>());
      spec.region_set = true;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed multiplier spec field: ") + e.what());
  }
  return spec;
}

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// A flag that, when given, overrides the matching field of a struct loaded
// from a config file.
template <class S>
struct Override {
  CLI::Option* option;
  std::function<void(S&)> copy;
};

template <class S, class T>
void add_field(CLI::App* app, std::vector<Override<S>>& list, S& staging, T S::*field, const std::string& flag,
               const std::string& help) {
  CLI::Option* opt = app->add_option(flag, staging.*field, help);
  list.push_back({opt, [&staging, field](S& target) { target.*field = staging.*field; }});
}

template <class S>
void apply_overrides(const std::vector<Override<S>>& list, S& target) {
  for (const auto& o : list) {
    if (o.option->count() > 0) o.copy(target);
  }
}

// Run bookkeeping: manifest first, result files, manifest finalized last.
class Session {
 public:
  Session(std::string out_dir, std::string format, std::string subcommand, Json run, std::optional<std::uint64_t> seed)
      : out_dir_(std::move(out_dir)), format_(std::move(format)), hash_(config_hash(run)),
        start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec || !fs::is_directory(out_dir_)) throw ValidationError("cannot create output directory '" + out_dir_ + "'");
    manifest_ = Json{{"tool", "nfmkdv"},
                     {"version", kVersion},
                     {"subcommand", std::move(subcommand)},
                     {"config_hash", hash_},
                     {"seed", seed ? Json(*seed) : Json(nullptr)},
                     {"threads", thread_count()},
                     {"run", std::move(run)},
                     {"status", "running"},
                     {"outputs", Json::array()},
                     {"timestamp", {{"started", utc_timestamp()}}}};
    write_json_file(path("manifest.json"), manifest_);
  }

  const std::string& hash() const { return hash_; }
  const std::string& format() const { return format_; }

  std::string path(const std::string& name) const { return (fs::path(out_dir_) / name).string(); }

  void record(const std::string& file) { manifest_["outputs"].push_back(file); }

  // name without extension; extension follows the emit format
  std::string write(const std::string& name, const Table& table) {
    const std::string file = name + "." + format_;
    std::ofstream out(path(file));
    if (!out) throw ValidationError("cannot write '" + path(file) + "'");
    if (format_ == "json") {
      out << table_to_json(table, hash_).dump(2) << '\n';
    } else {
      write_table_csv(out, table, hash_);
    }
    record(file);
    return file;
  }

  void write_trajectory(const std::string& target, const Trajectory& traj) {
    Json j = trajectory_to_json(traj);
    for (auto& state : j) state["config_hash"] = hash_;
    write_json_file(target, j);
    record(target);
  }

  void finish(int code, const std::string& message = "") {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_["status"] = code == kExitOk ? "ok" : "failed";
    manifest_["exit_code"] = code;
    manifest_["wall_time_s"] = wall;
    if (!message.empty()) manifest_["message"] = message;
    manifest_["timestamp"]["finished"] = utc_timestamp();
    write_json_file(path("manifest.json"), manifest_);
  }

 private:
  std::string out_dir_;
  std::string format_;
  std::string hash_;
  std::chrono::steady_clock::time_point start_;
  Json manifest_;
};

// Initial data: a state file, or a seeded random state of regularity data_s.
struct DataOptions {
  std::string state_file;
  double data_s = 2.0;
  double amplitude = 0.1;
  std::uint64_t seed = 1;

  void add_to(CLI::App* app) {
    app->add_option("--state", state_file, "initial state JSON (default: seeded random state)");
    app->add_option("--data-s", data_s, "decay exponent of the random initial state");
    app->add_option("--amplitude", amplitude, "amplitude of the random initial state");
    app->add_option("--seed", seed, "seed of the random initial state");
  }

  SpectralState load(int K) const {
    if (!state_file.empty()) {
      SpectralState v = state_from_json(read_json_file(state_file));
      if (v.cutoff() != K) throw ValidationError("state cutoff does not match config K");
      return v;
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ValidationError("amplitude must be nonnegative");
    return random_state(K, data_s, amplitude, seed);
  }
};

struct SolverOptions {
  std::string config_file;
  SolverConfig staging;
  std::vector<Override<SolverConfig>> overrides;

  void add_to(CLI::App* app) {
    overrides.clear();
    app->add_option("--config", config_file, "solver config JSON");
    add_field(app, overrides, staging, &SolverConfig::K, "--K", "cutoff");
    add_field(app, overrides, staging, &SolverConfig::s, "--s", "regularity of the C_t H^s norms");
    add_field(app, overrides, staging, &SolverConfig::sigma, "--sigma", "sign of the nonlinearity");
    add_field(app, overrides, staging, &SolverConfig::dt, "--dt", "RK4 step bound");
    add_field(app, overrides, staging, &SolverConfig::T, "--T", "horizon");
    add_field(app, overrides, staging, &SolverConfig::n, "--n", "splitting parameter");
    add_field(app, overrides, staging, &SolverConfig::grid_m, "--grid-m", "stored samples (odd)");
    add_field(app, overrides, staging, &SolverConfig::picard_max, "--picard-max", "Picard iteration cap");
    add_field(app, overrides, staging, &SolverConfig::tol, "--tol", "Picard tolerance");
  }

  SolverConfig resolve() const {
    SolverConfig cfg = config_file.empty() ? SolverConfig{} : config_from_json(read_json_file(config_file));
    apply_overrides(overrides, cfg);
    cfg.validate();
    return cfg;
  }
};

Json data_json(const DataOptions& d, const SpectralState& v0) {
  if (!d.state_file.empty()) return Json{{"state", state_to_json(v0)}};
  return Json{{"data_s", d.data_s}, {"amplitude", d.amplitude}, {"seed", d.seed}};
}

void print_table(const Table& t, const std::string& hash) { write_table_csv(std::cout, t, hash); }

using Action = std::function<int(std::optional<Session>&)>;

struct Globals {
  std::string out_dir = ".";
  std::string format = "csv";
  int threads = 0;
  CLI::Option* format_option = nullptr;
  CLI::Option* threads_option = nullptr;
};

Session& open_session(std::optional<Session>& session, const Globals& g, const std::string& name, Json run,
                      std::optional<std::uint64_t> seed) {
  session.emplace(g.out_dir, g.format, name, std::move(run), seed);
  return *session;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Normal-form laboratory for the periodic modified KdV equation", "nfmkdv"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--out-dir", g.out_dir, "directory for result files and the manifest");
  g.threads_option = app.add_option("--threads", g.threads, "worker cap (default: NF_MKDV_THREADS, else 1)");
  g.format_option =
      app.add_option("--format", g.format, "emit format of result tables")->check(CLI::IsMember({"csv", "json"}));

  Action action;

  // solve / picard / gauge-check ------------------------------------------
  SolverOptions solver_opts[3];
  DataOptions data_opts[3];

  std::string traj_out;
  CLI::App* solve = app.add_subcommand("solve", "RK4 integration of the interaction equation");
  solver_opts[0].add_to(solve);
  data_opts[0].add_to(solve);
  solve->add_option("--out", traj_out, "trajectory JSON (default: <out-dir>/trajectory.json)");
  solve->callback([&] {
    action = [&](std::optional<Session>& session) {
      const SolverConfig cfg = solver_opts[0].resolve();
      const SpectralState v0 = data_opts[0].load(cfg.K);
      Session& s = open_session(session, g, "solve",
                                Json{{"config", config_to_json(cfg)}, {"data", data_json(data_opts[0], v0)}},
                                data_opts[0].seed);
      const Trajectory traj = integrate_direct(v0, cfg);
      s.write_trajectory(traj_out.empty() ? s.path("trajectory.json") : traj_out, traj);
      Table norms = norm_series_table(traj, cfg.s);
      norms.meta["mass_drift"] = std::abs(l2_mass(traj.back()) - l2_mass(traj.front()));
      s.write("norms", norms);
      std::cout << "solve: t = " << format_double(traj.back().time())
                << ", mass drift = " << format_double(norms.meta["mass_drift"].get<double>()) << '\n';
      return kExitOk;
    };
  });

  std::string map_name = "F";
  bool choose = false;
  CLI::App* picard = app.add_subcommand("picard", "Picard iteration of a fixed-point map");
  solver_opts[1].add_to(picard);
  data_opts[1].add_to(picard);
  picard->add_option("--map", map_name, "F or G")->check(CLI::IsMember({"F", "G"}));
  picard->add_flag("--choose", choose, "pick n and T by the parameter rule first");
  picard->callback([&] {
    action = [&](std::optional<Session>& session) {
      SolverConfig cfg = solver_opts[1].resolve();
      const PicardMap which = parse_picard_map(map_name);
      const SpectralState v0 = data_opts[1].load(cfg.K);
      Json run{{"config", config_to_json(cfg)}, {"data", data_json(data_opts[1], v0)}, {"map", map_name},
               {"choose", choose}};
      Session& s = open_session(session, g, "picard", std::move(run), data_opts[1].seed);
      Table conv;
      conv.columns = {"iteration", "increment"};
      if (choose) {
        const ParameterChoice p = choose_parameters(v0, cfg);
        cfg.n = std::min(p.n, cfg.K);
        cfg.T = p.T;
        conv.meta["chosen_n"] = cfg.n;
        conv.meta["chosen_T"] = cfg.T;
        conv.meta["rule"] = p.note;
      }
      const PicardResult r = picard_solve(v0, cfg, which);
      const Trajectory direct = integrate_direct(v0, cfg);
      conv.meta["converged"] = r.report.converged;
      conv.meta["iterations"] = r.report.iterations;
      conv.meta["contraction_factor"] = r.report.contraction_factor;
      conv.meta["rk4_endpoint_distance_H1/2"] = sobolev_norm(r.trajectory.back() - direct.back(), 0.5);
      for (std::size_t i = 0; i < r.report.increments.size(); ++i) {
        conv.rows.push_back({static_cast<int>(i + 1), r.report.increments[i]});
      }
      s.write_trajectory(s.path("trajectory.json"), r.trajectory);
      s.write("convergence", conv);
      s.write("norms", norm_series_table(r.trajectory, cfg.s));
      std::cout << "picard " << map_name << ": iterations = " << r.report.iterations
                << ", contraction = " << format_double(r.report.contraction_factor) << ", rk4 distance = "
                << format_double(conv.meta["rk4_endpoint_distance_H1/2"].get<double>()) << '\n';
      if (!r.report.converged) {
        std::cerr << "error: Picard iteration did not reach tol in " << cfg.picard_max << " iterations\n";
        return kExitNumerical;
      }
      return kExitOk;
    };
  });

  CLI::App* gauge = app.add_subcommand("gauge-check", "renormalized flow plus shift vs direct cubic flow");
  solver_opts[2].add_to(gauge);
  data_opts[2].add_to(gauge);
  gauge->callback([&] {
    action = [&](std::optional<Session>& session) {
      const SolverConfig cfg = solver_opts[2].resolve();
      const SpectralState u0 = data_opts[2].load(cfg.K);
      Session& s = open_session(session, g, "gauge-check",
                                Json{{"config", config_to_json(cfg)}, {"data", data_json(data_opts[2], u0)}},
                                data_opts[2].seed);
      const Trajectory a = solve_mkdv1(u0, cfg);
      const Trajectory b = integrate_mkdv1_direct(u0, cfg);
      Table t;
      t.columns = {"t", "distance_H1/2"};
      for (std::size_t i = 0; i < a.size(); ++i) {
        t.rows.push_back({a.states[i].time(), sobolev_norm(a.states[i] - b.states[i], 0.5)});
      }
      t.meta["endpoint_distance_H1/2"] = t.rows.back()[1];
      s.write("gauge", t);
      std::cout << "gauge-check: endpoint H^1/2 distance = " << format_double(t.rows.back()[1].get<double>())
                << '\n';
      return kExitOk;
    };
  });

  // terms -------------------------------------------------------------------
  CLI::App* terms = app.add_subcommand("terms", "multilinear operators and identities");
  terms->require_subcommand(1);

  std::string term_name, state_file, w_file;
  int term_n = 0, term_sigma = 1;
  double term_t = 0.0;
  CLI::App* eval = terms->add_subcommand("eval", "evaluate one operator on a state");
  eval->add_option("--term", term_name, "operator name")->required();
  eval->add_option("--state", state_file, "state JSON")->required();
  eval->add_option("--n", term_n, "splitting parameter");
  eval->add_option("--w", w_file, "time-derivative slot JSON (default: rhs of the state)");
  eval->add_option("--sigma", term_sigma, "sign of the nonlinearity");
  CLI::Option* t_opt = eval->add_option("--t", term_t, "evaluation time (default: the state's time tag)");
  eval->callback([&] {
    action = [&](std::optional<Session>& session) {
      const SpectralState v = state_from_json(read_json_file(state_file));
      std::optional<SpectralState> w;
      if (!w_file.empty()) w = state_from_json(read_json_file(w_file));
      const TermConfig cfg{v.cutoff(), term_n, term_sigma, t_opt->count() ? term_t : v.time()};
      cfg.validate();
      Json run{{"term", term_name}, {"n", cfg.n}, {"sigma", cfg.sigma}, {"t", cfg.t}, {"state", state_to_json(v)}};
      if (w) run["w"] = state_to_json(*w);
      Session& s = open_session(session, g, "terms eval", std::move(run), std::nullopt);
      const SpectralState out = evaluate_term(term_name, v, w ? &*w : nullptr, cfg);
      if (g.format_option->count() && g.format == "csv") {
        std::ofstream f(s.path("term.csv"));
        write_state_csv(f, out, s.hash());
        s.record("term.csv");
        write_state_csv(std::cout, out, s.hash());
      } else {
        Json j = state_to_json(out);
        j["config_hash"] = s.hash();
        write_json_file(s.path("term.json"), j);
        s.record("term.json");
        std::cout << j.dump() << '\n';
      }
      return kExitOk;
    };
  });

  auto identity_table = [](const std::vector<IdentityCheck>& checks) {
    Table t;
    t.columns = {"identity", "K", "n", "residual", "threshold", "pass"};
    for (const auto& c : checks) t.rows.push_back({to_string(c.id), c.K, c.n, c.residual, c.threshold, c.passed()});
    return t;
  };
  auto identity_run = [](const IdentityOptions& o) {
    return Json{{"K", o.K}, {"n", o.n}, {"seed", o.seed}, {"trials", o.trials}, {"t", o.t},
                {"dt", o.dt}, {"horizon", o.horizon}};
  };

  std::string which;
  IdentityOptions id_opts;
  CLI::App* identity = terms->add_subcommand("identity", "run one identity check");
  identity->add_option("--which", which, "I1 ... I5")->required();
  identity->add_option("--K", id_opts.K, "cutoff");
  identity->add_option("--n", id_opts.n, "splitting parameter");
  identity->add_option("--seed", id_opts.seed, "seed of the random states");
  identity->add_option("--trials", id_opts.trials, "random pairs (I1 - I4)");
  identity->callback([&] {
    action = [&](std::optional<Session>& session) {
      const IdentityId id = parse_identity_id(which);
      Json run = identity_run(id_opts);
      run["which"] = which;
      Session& s = open_session(session, g, "terms identity", std::move(run), id_opts.seed);
      const IdentityCheck c = run_identity(id, id_opts);
      const Table t = identity_table({c});
      s.write("identity", t);
      print_table(t, s.hash());
      return c.passed() ? kExitOk : kExitNumerical;
    };
  });

  IdentityOptions suite_opts;
  bool with_ibp = false;
  int ibp_K = 8;
  CLI::App* suite = app.add_subcommand("identity-suite", "identities I1 - I4, optionally I5");
  suite->add_option("--K", suite_opts.K, "cutoff");
  suite->add_option("--n", suite_opts.n, "splitting parameter");
  suite->add_option("--seed", suite_opts.seed, "seed of the random states");
  suite->add_option("--trials", suite_opts.trials, "random pairs per identity");
  suite->add_flag("--with-I5", with_ibp, "include the trajectory quadrature check (slow)");
  suite->add_option("--ibp-K", ibp_K, "cutoff of the I5 trajectory");
  suite->callback([&] {
    action = [&](std::optional<Session>& session) {
      Json run = identity_run(suite_opts);
      run["with_I5"] = with_ibp;
      if (with_ibp) run["ibp_K"] = ibp_K;
      Session& s = open_session(session, g, "identity-suite", std::move(run), suite_opts.seed);
      std::vector<IdentityCheck> checks;
      for (IdentityId id : {IdentityId::I1, IdentityId::I2, IdentityId::I3, IdentityId::I4}) {
        checks.push_back(run_identity(id, suite_opts));
      }
      if (with_ibp) {
        IdentityOptions o = suite_opts;
        o.K = ibp_K;
        checks.push_back(run_identity(IdentityId::I5, o));
      }
      const Table t = identity_table(checks);
      s.write("identities", t);
      print_table(t, s.hash());
      for (const auto& c : checks) {
        if (!c.passed()) return kExitNumerical;
      }
      return kExitOk;
    };
  });

  // lemma / multiplier / obstruction ------------------------------------------
  CLI::App* lemma = app.add_subcommand("lemma", "sampled checks of the multilinear estimates");
  lemma->require_subcommand(1);
  std::string lemma_config, lemma_id;
  std::vector<int> n_list;
  LemmaCheckSpec lemma_staging;
  std::vector<Override<LemmaCheckSpec>> lemma_overrides;
  CLI::App* lemma_run = lemma->add_subcommand("run", "ratio statistics for one estimate");
  lemma_run->add_option("--config", lemma_config, "lemma spec JSON");
  CLI::Option* id_opt = lemma_run->add_option("--id", lemma_id, "estimate id (R1, R2, N11, ...)");
  add_field(lemma_run, lemma_overrides, lemma_staging, &LemmaCheckSpec::s, "--s", "regularity");
  add_field(lemma_run, lemma_overrides, lemma_staging, &LemmaCheckSpec::K, "--K", "cutoff");
  add_field(lemma_run, lemma_overrides, lemma_staging, &LemmaCheckSpec::n, "--n", "splitting parameter");
  add_field(lemma_run, lemma_overrides, lemma_staging, &LemmaCheckSpec::ensemble, "--ensemble", "samples");
  add_field(lemma_run, lemma_overrides, lemma_staging, &LemmaCheckSpec::amplitude, "--amplitude", "sample scale");
  add_field(lemma_run, lemma_overrides, lemma_staging, &LemmaCheckSpec::seed, "--seed", "master seed");
  add_field(lemma_run, lemma_overrides, lemma_staging, &LemmaCheckSpec::epsilon, "--epsilon", "H21 loss");
  lemma_run->add_option("--n-list", n_list, "n sweep with a log-log fit, e.g. 4,8,16,32")->delimiter(',');
  lemma_run->callback([&] {
    action = [&](std::optional<Session>& session) {
      LemmaCheckSpec spec = lemma_config.empty() ? LemmaCheckSpec{} : lemma_spec_from_json(read_json_file(lemma_config));
      apply_overrides(lemma_overrides, spec);
      if (id_opt->count()) spec.id = parse_lemma_id(lemma_id);
      if (lemma_config.empty() && !id_opt->count()) throw ValidationError("lemma run needs --id or --config");
      if (n_list.empty()) spec.validate();
      Json run = lemma_spec_to_json(spec);
      if (!n_list.empty()) run["n_list"] = n_list;
      Session& s = open_session(session, g, "lemma run", std::move(run), spec.seed);
      if (!n_list.empty()) {
        const EstimateReport r = n_sweep(spec, n_list);
        Table t;
        t.columns = {"n", "sup_ratio"};
        for (const auto& [n, sup] : r.sweep) t.rows.push_back({n, sup});
        t.meta["lemma"] = r.lemma;
        t.meta["slope"] = r.slope;
        t.meta["fitted_C"] = r.fitted_C;
        t.meta["zero_guarded"] = r.zero_guarded;
        s.write("lemma_sweep", t);
        print_table(t, s.hash());
        return kExitOk;
      }
      const EstimateReport r = lemma_ratio(spec);
      Table samples;
      samples.columns = {"sample", "ratio"};
      for (std::size_t i = 0; i < r.ratios.size(); ++i) samples.rows.push_back({static_cast<int>(i), r.ratios[i]});
      s.write("lemma_samples", samples);
      Table summary;
      summary.columns = {"statistic", "value"};
      summary.meta["lemma"] = r.lemma;
      summary.rows = {{"max", r.max}, {"mean", r.mean}, {"q50", r.q50}, {"q90", r.q90}, {"q99", r.q99},
                      {"zero_guarded", r.zero_guarded}};
      if (r.has_adversarial) summary.rows.push_back({"adversarial", r.adversarial_ratio});
      s.write("lemma_summary", summary);
      print_table(summary, s.hash());
      return kExitOk;
    };
  });

  std::string mult_config, region_name;
  MultiplierSpec mult_staging;
  std::vector<Override<MultiplierSpec>> mult_overrides;
  CLI::App* mult = app.add_subcommand("multiplier", "exact multiplier suprema");
  mult->add_option("--config", mult_config, "multiplier spec JSON");
  add_field(mult, mult_overrides, mult_staging, &MultiplierSpec::index, "--i", "multiplier index 1 ... 6");
  add_field(mult, mult_overrides, mult_staging, &MultiplierSpec::s, "--s", "regularity");
  add_field(mult, mult_overrides, mult_staging, &MultiplierSpec::K, "--K", "cutoff");
  add_field(mult, mult_overrides, mult_staging, &MultiplierSpec::n, "--n", "outer kstar > n");
  add_field(mult, mult_overrides, mult_staging, &MultiplierSpec::epsilon, "--epsilon", "loss exponent of M6");
  CLI::Option* region_opt = mult->add_option("--region", region_name, "all, good, remaining, phi1, phi2, endpoint-bad");
  mult->callback([&] {
    action = [&](std::optional<Session>& session) {
      MultiplierSpec spec = mult_config.empty() ? MultiplierSpec{} : multiplier_spec_from_json(read_json_file(mult_config));
      apply_overrides(mult_overrides, spec);
      if (region_opt->count()) {
        spec.region = parse_multiplier_region(region_name);
        spec.region_set = true;
      }
      spec.validate();
      Session& s = open_session(session, g, "multiplier", multiplier_spec_to_json(spec), std::nullopt);
      const MultiplierResult r = multiplier_sup(spec);
      Table t;
      t.columns = {"k", "sum_sq"};
      for (const auto& [k, v] : r.profile) t.rows.push_back({k, v});
      t.meta["index"] = spec.index;
      t.meta["region"] = to_string(spec.effective_region());
      t.meta["sup"] = r.sup;
      t.meta["argmax_k"] = r.argmax_k;
      t.meta["tuples"] = r.tuples;
      t.meta["dropped_zero_frequency"] = r.dropped_zero_frequency;
      if (r.tuples > 0) t.meta["vacuous_fraction"] = static_cast<double>(r.vacuously_decided) / r.tuples;
      s.write("multiplier_profile", t);
      std::cout << "M" << spec.index << " sup = " << format_double(r.sup) << " at k = " << r.argmax_k << '\n';
      return kExitOk;
    };
  });

  std::vector<int> K_list = {8, 16, 32};
  std::vector<double> s_pair = {0.5, 0.6};
  CLI::App* obstruction = app.add_subcommand("obstruction", "endpoint growth of the quintic multiplier");
  obstruction->add_option("--Ks", K_list, "ascending cutoffs")->delimiter(',');
  obstruction->add_option("--s-pair", s_pair, "two regularities")->delimiter(',')->expected(2);
  obstruction->callback([&] {
    action = [&](std::optional<Session>& session) {
      if (s_pair.size() != 2) throw ValidationError("--s-pair takes two values");
      Session& s = open_session(session, g, "obstruction", Json{{"Ks", K_list}, {"s_pair", s_pair}}, std::nullopt);
      const ObstructionReport r = endpoint_obstruction_study(K_list, {s_pair[0], s_pair[1]});
      Table t;
      t.columns = {"K", "M2_s_low", "M2_s_high"};
      for (const auto& row : r.rows) t.rows.push_back({row.K, row.m_low, row.m_high});
      t.meta["s_low"] = s_pair[0];
      t.meta["s_high"] = s_pair[1];
      t.meta["growth_low"] = r.growth_low;
      t.meta["growth_high"] = r.growth_high;
      t.meta["vacuous"] = r.vacuous;
      t.meta["holds"] = r.holds;
      s.write("obstruction", t);
      print_table(t, s.hash());
      return kExitOk;
    };
  });

  // resonance -----------------------------------------------------------------
  CLI::App* resonance = app.add_subcommand("resonance", "phase function and resonance classes");
  resonance->require_subcommand(1);
  int scan_K = 4;
  CLI::App* scan = resonance->add_subcommand("scan", "classify every triple with |ki| <= K");
  scan->add_option("--K", scan_K, "cutoff");
  scan->callback([&] {
    action = [&](std::optional<Session>& session) {
      if (scan_K < 1 || scan_K > 200) throw ValidationError("scan needs 1 <= K <= 200");
      Session& s = open_session(session, g, "resonance scan", Json{{"K", scan_K}}, std::nullopt);
      Table triples;
      triples.columns = {"k1", "k2", "k3", "phi", "class", "lambda", "Lambda"};
      const ResonanceSummary sum = scan_triples(scan_K, [&](const ModeTriple& t, PhaseClass c) {
        triples.rows.push_back({t.k1, t.k2, t.k3, t.phase(), std::string(to_string(c)), t.lambda(), t.Lambda()});
      });
      s.write("resonance_triples", triples);
      Table summary;
      summary.columns = {"class", "count"};
      summary.rows = {{"total", sum.total}, {"resonant", sum.resonant}, {"PHI1", sum.phi1}, {"PHI2", sum.phi2}};
      s.write("resonance_summary", summary);
      print_table(summary, s.hash());
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  std::optional<Session> session;
  auto fail = [&](int code, const std::string& what) {
    std::cerr << "error: " << what << '\n';
    if (session) {
      try {
        session->finish(code, what);
      } catch (const std::exception&) {
      }
    }
    return code;
  };
  try {
    if (g.threads_option->count()) {
      if (g.threads < 1) throw ValidationError("--threads must be at least 1");
      set_thread_count(g.threads);
    }
    if (!action) throw ValidationError("no subcommand action");
    const int code = action(session);
    if (session) session->finish(code);
    return code;
  } catch (const ValidationError& e) {
    return fail(kExitInvalid, e.what());
  } catch (const NumericalError& e) {
    return fail(kExitNumerical, e.what());
  } catch (const std::exception& e) {
    return fail(kExitNumerical, e.what());
  }
}

int dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"nfmkdv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace nfmkdv
