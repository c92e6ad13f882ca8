#include "nlsrad/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "nlsrad/classify.hpp"
#include "nlsrad/config.hpp"
#include "nlsrad/io.hpp"
#include "nlsrad/virial.hpp"

namespace nlsrad {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Job {
  RunConfig cfg;
  std::vector<std::string> outputs;
  nlohmann::json summary = nlohmann::json::object();

  std::string path(const std::string& name) const {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  }
  void emit(const std::string& name, const std::string& content) {
    write_text(path(name), content);
    outputs.push_back(name);
  }
};

RadialGrid grid_of(const RunConfig& cfg) { return build_grid(cfg.n, cfg.r_max); }

GroundStateResult ground_for(const RunConfig& cfg) {
  GroundStateOptions opts;
  opts.allow_free_limit = cfg.allow_free_limit;
  auto res = minimize_quotient(cfg.params, grid_of(cfg), opts);
  if (!res.converged) {
    fail(ErrorKind::kNumerical, "ground-state descent did not converge in " +
                                    std::to_string(res.iterations) + " iterations");
  }
  return res;
}

RadialField datum(const RunConfig& cfg, const std::optional<GroundStateResult>& ground) {
  if (cfg.family == "cQ") return cfg.amplitude * ground->profile;
  return RadialField::from_function(grid_of(cfg), [&](double r) {
    const double s = r / cfg.width;
    return Complex{cfg.amplitude * std::exp(-s * s), 0.0};
  });
}

void cmd_ground_state(Job& job) {
  const auto& cfg = job.cfg;
  GroundStateOptions opts;
  opts.allow_free_limit = cfg.allow_free_limit;
  const auto res = minimize_quotient(cfg.params, grid_of(cfg), opts);
  nlohmann::json j = to_json(res);
  if (cfg.oracle) {
    const auto shot = shoot_ode(cfg.params, grid_of(cfg), {cfg.oracle_lo, cfg.oracle_hi},
                                cfg.allow_free_limit);
    j["oracle"] = {{"level", shot.level},
                   {"central_amplitude", shot.central_amplitude},
                   {"relative_difference", std::abs(shot.level - res.level) / res.level}};
  }
  job.emit("Q.csv", profile_csv(res.profile));
  job.emit("result.json", j.dump(2) + "\n");
  job.summary = {{"level", res.level}, {"converged", res.converged}};
  if (!res.converged) fail(ErrorKind::kNumerical, "ground-state descent did not converge");
}

void cmd_functionals(Job& job) {
  const auto& cfg = job.cfg;
  std::optional<GroundStateResult> ground;
  if (cfg.family == "cQ") ground = ground_for(cfg);
  const RadialField u = datum(cfg, ground);
  const auto rep = report(u, cfg.params);
  nlohmann::json k = nlohmann::json::object();
  nlohmann::json t = nlohmann::json::object();
  for (const auto& pair : default_pairs()) {
    k[pair_key(pair)] = k_alpha_beta(rep, pair, cfg.params);
    t[pair_key(pair)] = t_alpha_beta(u, pair, cfg.params);
  }
  nlohmann::json j = {{"functionals", to_json(rep)},
                      {"K", k},
                      {"T", t},
                      {"nehari_scaling", nehari_scaling(rep)}};
  job.emit("functionals.json", j.dump(2) + "\n");
  job.summary = {{"action", rep.action}};
}

void cmd_evolve(Job& job) {
  const auto& cfg = job.cfg;
  const auto ground = ground_for(cfg);
  const RadialField u0 = datum(cfg, ground);
  EvolutionConfig ecfg = cfg.evolution;
  ecfg.level = ground.level;

  std::vector<double> pending = cfg.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next = 0;
  nlohmann::json snapshots = nlohmann::json::array();
  auto hook = [&](double t, const RadialField& u) {
    while (next < pending.size() && t >= pending[next] - 1e-12) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%03zu.csv", next);
      job.emit(name, field_csv(u));
      snapshots.push_back({{"requested", pending[next]}, {"t", t}, {"file", name}});
      ++next;
    }
  };
  const auto trace = Evolver(u0.grid, cfg.params, ecfg).run(u0, hook);
  job.emit("trace.csv", trace_csv(trace));
  nlohmann::json j = to_json(trace);
  j["level"] = ground.level;
  j["snapshots"] = snapshots;
  job.emit("result.json", j.dump(2) + "\n");
  job.summary = {{"outcome", to_string(trace.outcome)}};
  if (trace.outcome == Outcome::kAborted) fail(ErrorKind::kNumerical, trace.note);
}

void cmd_classify(Job& job) {
  const auto& cfg = job.cfg;
  const auto ground = ground_for(cfg);
  RunConfig free_cfg = cfg;
  free_cfg.params = EquationParams{0.0, cfg.params.mu, 1.0};
  free_cfg.allow_free_limit = true;
  const auto q10 = ground_for(free_cfg);
  const RadialField u0 = datum(cfg, ground);
  auto verdict = classify(u0, cfg.params, ground, default_pairs(), &q10);
  if (cfg.simulate && verdict.predicted != Prediction::kOutOfScope) {
    verdict = verify_empirically(verdict, u0, cfg.evolution, cfg.params);
  }
  job.emit("verdict.json", to_json(verdict).dump(2) + "\n");
  job.summary = {{"predicted", to_string(verdict.predicted)},
                 {"empirical", to_string(verdict.empirical)}};
}

void cmd_sweep(Job& job) {
  const auto& cfg = job.cfg;
  FamilySpec spec;
  spec.kind = cfg.family == "cQ" ? FamilySpec::Kind::kScaledGround : FamilySpec::Kind::kGaussian;
  spec.amplitudes = cfg.amplitudes;
  spec.widths = cfg.widths;
  std::vector<SweepRow> rows;
  if (!spec.amplitudes.empty()) {
    const auto ground = ground_for(cfg);
    rows = sweep(spec, cfg.params, ground, cfg.evolution, cfg.simulate, cfg.workers);
  }
  job.emit("sweep.csv", sweep_csv(spec, rows));
  job.summary = {{"rows", rows.size()}};
}

void cmd_virial_check(Job& job) {
  const auto& cfg = job.cfg;
  const auto ground = ground_for(cfg);
  const RadialField u0 = datum(cfg, ground);
  const auto rep = rigidity_probe(u0, cfg.params, ground.level, cfg.evolution);
  job.emit("probe.json", to_json(rep).dump(2) + "\n");
  job.summary = {{"R", rep.R}, {"min_Ipp", rep.min_ipp}, {"bound_ok", rep.bound_ok}};
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exit_code(ErrorKind kind) {
  return kind == ErrorKind::kConfig || kind == ErrorKind::kPrecondition ? 1 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial cubic NLS with a repulsive inverse-power potential"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  using Handler = void (*)(Job&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"ground-state", "Compute the radial ground state Q", cmd_ground_state},
      {"functionals", "Evaluate the action functionals of an initial datum", cmd_functionals},
      {"evolve", "Time-evolve an initial datum and record the trace", cmd_evolve},
      {"classify", "Classify an initial datum below the threshold", cmd_classify},
      {"sweep", "Classify a family of initial data", cmd_sweep},
      {"virial-check", "Localized virial diagnostics along the flow", cmd_virial_check},
  };

  std::map<std::string, std::string> config_paths;
  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::map<std::string, CLI::Option*>> flag_options;
  for (const auto& [name, help, handler] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_paths[name], "key = value configuration file");
    for (const auto& key : known_keys()) {
      flag_options[name][key] = sub->add_option("--" + key, flag_values[name][key]);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  for (const auto& [name, help, handler] : commands) {
    auto* sub = app.get_subcommand(name);
    if (!sub->parsed()) continue;
    const auto started = std::chrono::steady_clock::now();
    Job job;
    int code = 0;
    std::string message;
    try {
      std::vector<SettingMap> layers;
      if (!config_paths[name].empty()) layers.push_back(read_settings_file(config_paths[name]));
      SettingMap flags;
      for (const auto& [key, opt] : flag_options[name]) {
        if (opt->count() > 0) flags[key] = Setting{flag_values[name][key], "flag --" + key};
      }
      layers.push_back(flags);
      job.cfg = parse_config(name, layers);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return exit_code(e.kind());
    }
    try {
      handler(job);
    } catch (const Error& e) {
      code = exit_code(e.kind());
      message = e.what();
    } catch (const std::exception& e) {
      code = 2;
      message = e.what();
    }
    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    nlohmann::json manifest = {{"command", name},
                               {"config", describe(job.cfg)},
                               {"version", kVersion},
                               {"compiler", __VERSION__},
                               {"started_at", utc_now()},
                               {"duration_s", duration},
                               {"outputs", job.outputs},
                               {"summary", job.summary},
                               {"exit_code", code}};
    if (!message.empty()) manifest["error"] = message;
    try {
      write_text(job.path("manifest.json"), manifest.dump(2) + "\n");
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
    if (code != 0) {
      err << "error: " << message << "\n";
      return code;
    }
    out << name << ": wrote " << job.outputs.size() << " file(s) to " << job.cfg.out_dir << "\n";
    return 0;
  }
  return 1;
}

}  // namespace nlsrad
