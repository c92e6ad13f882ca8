#include "nlsrad/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace nlsrad {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) {
    throw std::invalid_argument("malformed number '" + v + "'");
  }
  return x;
}

long long to_integer(const std::string& v) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("malformed integer '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("malformed boolean '" + v + "'");
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item));
  }
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
  return out;
}

void check(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = {
      {"gamma",
       [](RunConfig& c, const std::string& v) {
         c.params.gamma = to_double(v);
         check(c.params.gamma >= 0.0, "gamma must satisfy gamma > 0");
       },
       [](const RunConfig& c) { return fmt(c.params.gamma); }},
      {"mu",
       [](RunConfig& c, const std::string& v) {
         c.params.mu = to_double(v);
         check(c.params.mu > 0.0 && c.params.mu < 2.0, "mu must satisfy 0 < mu < 2");
       },
       [](const RunConfig& c) { return fmt(c.params.mu); }},
      {"omega",
       [](RunConfig& c, const std::string& v) {
         c.params.omega = to_double(v);
         check(c.params.omega > 0.0, "omega must satisfy omega > 0");
       },
       [](const RunConfig& c) { return fmt(c.params.omega); }},
      {"n",
       [](RunConfig& c, const std::string& v) {
         const auto n = to_integer(v);
         check(n >= 16, "n too small (need n >= 16)");
         c.n = static_cast<std::size_t>(n);
       },
       [](const RunConfig& c) { return std::to_string(c.n); }},
      {"R_max",
       [](RunConfig& c, const std::string& v) {
         c.r_max = to_double(v);
         check(c.r_max > 1.0, "R_max must be > 1");
       },
       [](const RunConfig& c) { return fmt(c.r_max); }},
      {"dt",
       [](RunConfig& c, const std::string& v) {
         c.evolution.dt = to_double(v);
         check(c.evolution.dt > 0.0, "dt must be positive");
       },
       [](const RunConfig& c) { return fmt(c.evolution.dt); }},
      {"t_end",
       [](RunConfig& c, const std::string& v) {
         c.evolution.t_end = to_double(v);
         check(c.evolution.t_end > 0.0, "t_end must be positive");
       },
       [](const RunConfig& c) { return fmt(c.evolution.t_end); }},
      {"monitor_every",
       [](RunConfig& c, const std::string& v) {
         const auto m = to_integer(v);
         check(m >= 1, "monitor_every must be >= 1");
         c.evolution.monitor_every = static_cast<int>(m);
       },
       [](const RunConfig& c) { return std::to_string(c.evolution.monitor_every); }},
      {"absorb", [](RunConfig& c, const std::string& v) { c.evolution.absorb = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.evolution.absorb ? "true" : "false"); }},
      {"absorb_width",
       [](RunConfig& c, const std::string& v) { c.evolution.absorb_width = to_double(v); },
       [](const RunConfig& c) { return fmt(c.evolution.absorb_width); }},
      {"absorb_strength",
       [](RunConfig& c, const std::string& v) { c.evolution.absorb_strength = to_double(v); },
       [](const RunConfig& c) { return fmt(c.evolution.absorb_strength); }},
      {"blowup_grad_factor",
       [](RunConfig& c, const std::string& v) { c.evolution.blowup_grad_factor = to_double(v); },
       [](const RunConfig& c) { return fmt(c.evolution.blowup_grad_factor); }},
      {"decay_window",
       [](RunConfig& c, const std::string& v) { c.evolution.decay_window = to_double(v); },
       [](const RunConfig& c) { return fmt(c.evolution.decay_window); }},
      {"local_tol",
       [](RunConfig& c, const std::string& v) { c.evolution.local_tol = to_double(v); },
       [](const RunConfig& c) { return fmt(c.evolution.local_tol); }},
      {"adaptive", [](RunConfig& c, const std::string& v) { c.evolution.adaptive = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.evolution.adaptive ? "true" : "false"); }},
      {"out_dir",
       [](RunConfig& c, const std::string& v) {
         check(!v.empty(), "out_dir must not be empty");
         c.out_dir = v;
       },
       [](const RunConfig& c) { return c.out_dir; }},
      {"seed",
       [](RunConfig& c, const std::string& v) {
         const auto s = to_integer(v);
         check(s >= 0, "seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"family",
       [](RunConfig& c, const std::string& v) {
         check(v == "cQ" || v == "gaussian", "family must be cQ or gaussian");
         c.family = v;
       },
       [](const RunConfig& c) { return c.family; }},
      {"amplitude", [](RunConfig& c, const std::string& v) { c.amplitude = to_double(v); },
       [](const RunConfig& c) { return fmt(c.amplitude); }},
      {"width",
       [](RunConfig& c, const std::string& v) {
         c.width = to_double(v);
         check(c.width > 0.0, "width must be positive");
       },
       [](const RunConfig& c) { return fmt(c.width); }},
      {"amplitudes", [](RunConfig& c, const std::string& v) { c.amplitudes = to_list(v); },
       [](const RunConfig& c) { return fmt_list(c.amplitudes); }},
      {"widths",
       [](RunConfig& c, const std::string& v) {
         c.widths = to_list(v);
         for (double w : c.widths) check(w > 0.0, "widths must be positive");
       },
       [](const RunConfig& c) { return fmt_list(c.widths); }},
      {"simulate", [](RunConfig& c, const std::string& v) { c.simulate = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.simulate ? "true" : "false"); }},
      {"workers",
       [](RunConfig& c, const std::string& v) {
         const auto w = to_integer(v);
         check(w >= 1, "workers must be >= 1");
         c.workers = static_cast<int>(w);
       },
       [](const RunConfig& c) { return std::to_string(c.workers); }},
      {"snapshot_times",
       [](RunConfig& c, const std::string& v) { c.snapshot_times = to_list(v); },
       [](const RunConfig& c) { return fmt_list(c.snapshot_times); }},
      {"allow_free_limit",
       [](RunConfig& c, const std::string& v) { c.allow_free_limit = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.allow_free_limit ? "true" : "false"); }},
      {"oracle", [](RunConfig& c, const std::string& v) { c.oracle = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.oracle ? "true" : "false"); }},
      {"oracle_lo", [](RunConfig& c, const std::string& v) { c.oracle_lo = to_double(v); },
       [](const RunConfig& c) { return fmt(c.oracle_lo); }},
      {"oracle_hi", [](RunConfig& c, const std::string& v) { c.oracle_hi = to_double(v); },
       [](const RunConfig& c) { return fmt(c.oracle_hi); }},
  };
  return keys;
}

const Key* find_key(const std::string& name) {
  for (const auto& k : key_table()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& k : key_table()) out.push_back(k.name);
    return out;
  }();
  return names;
}

SettingMap parse_settings(const std::string& text) {
  SettingMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos) fail(ErrorKind::kConfig, where + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) fail(ErrorKind::kConfig, where + ": missing key");
    if (find_key(key) == nullptr) fail(ErrorKind::kConfig, where + ": unknown key '" + key + "'");
    out[key] = Setting{value, where};
  }
  return out;
}

SettingMap read_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kConfig, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_settings(ss.str());
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

RunConfig parse_config(const std::string& command, const std::vector<SettingMap>& layers) {
  SettingMap merged;
  for (const auto& layer : layers) {
    for (const auto& [k, v] : layer) merged[k] = v;
  }
  RunConfig cfg;
  cfg.command = command;
  for (const auto& [name, setting] : merged) {
    const Key* key = find_key(name);
    if (key == nullptr) fail(ErrorKind::kConfig, setting.origin + ": unknown key '" + name + "'");
    try {
      key->set(cfg, setting.value);
    } catch (const std::invalid_argument& e) {
      std::string msg = e.what();
      if (msg.rfind("malformed", 0) == 0) msg += " for key '" + name + "'";
      fail(ErrorKind::kConfig, setting.origin + ": " + msg);
    }
  }
  if (!cfg.allow_free_limit && cfg.params.gamma == 0.0) {
    const auto it = merged.find("gamma");
    const std::string where = it == merged.end() ? "gamma" : it->second.origin + ": gamma";
    fail(ErrorKind::kConfig, where + ": gamma must satisfy gamma > 0 (set allow_free_limit)");
  }
  validate(cfg.params, cfg.allow_free_limit);
  const RadialGrid grid = build_grid(cfg.n, cfg.r_max);
  validate(cfg.evolution, grid);
  if (cfg.oracle) {
    require(cfg.oracle_lo > 0.0 && cfg.oracle_lo < cfg.oracle_hi, ErrorKind::kConfig,
            "oracle bracket must satisfy 0 < oracle_lo < oracle_hi");
  }
  return cfg;
}

std::map<std::string, std::string> describe(const RunConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& k : key_table()) out[k.name] = k.get(cfg);
  return out;
}

}  // namespace nlsrad
