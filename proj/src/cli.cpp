#include "pvc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pvc/constants.hpp"
#include "pvc/error.hpp"
#include "pvc/estimators.hpp"
#include "pvc/extremes.hpp"
#include "pvc/validation.hpp"

namespace pvc {

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> names = {"constants", "estimate-cd",   "estimate-cd-alpha",
                                                 "pointy-count", "tail",       "k-alpha",
                                                 "simplex-stats", "extremal-index", "validate"};
  return names;
}

void RunConfig::validate() const {
  const auto& names = cli_commands();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    throw Error(ErrorCode::ConfigError, "unknown command '" + command + "'");
  }
  if (format != "json" && format != "csv") throw Error(ErrorCode::ConfigError, "format must be json or csv");
  if (d < kMinDim || d > kMaxDim) throw Error(ErrorCode::ConfigError, "d must lie in [2, 12]");
  if (!(alpha > -d)) throw Error(ErrorCode::ConfigError, "alpha must exceed -d");
  if (t.empty()) throw Error(ErrorCode::ConfigError, "t needs at least one value");
  for (double x : t)
    if (!(x >= 0)) throw Error(ErrorCode::ConfigError, "t must be >= 0");
  if (!std::is_sorted(t.begin(), t.end())) throw Error(ErrorCode::ConfigError, "t values must be ascending");
  if (reps < 1) throw Error(ErrorCode::ConfigError, "reps must be >= 1");
  if (!(n > 0)) throw Error(ErrorCode::ConfigError, "n must be > 0");
}

Json to_json(const RunConfig& c) {
  return Json{{"command", c.command}, {"d", c.d},           {"alpha", c.alpha},     {"t", c.t},
              {"reps", c.reps},       {"seed", c.seed},     {"workers", c.workers}, {"out", c.out},
              {"format", c.format},   {"n", c.n},           {"deep", c.deep}};
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = *it;
      if (k == "command") c.command = v.get<std::string>();
      else if (k == "d") c.d = v.get<int>();
      else if (k == "alpha") c.alpha = v.get<double>();
      else if (k == "t") c.t = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
      else if (k == "reps") c.reps = v.get<std::int64_t>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "workers") c.workers = v.get<int>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else if (k == "n") c.n = v.get<double>();
      else if (k == "deep") c.deep = v.get<bool>();
      else throw Error(ErrorCode::ConfigError, "unknown config key '" + k + "'");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad config value: ") + e.what());
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key=value lines become the JSON object run_config_from_json reads.
Json parse_key_values(const std::string& text) {
  Json j = Json::object();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "config line " + std::to_string(lineno) + " lacks '='");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    try {
      if (key == "command" || key == "out" || key == "format") {
        j[key] = value;
      } else if (key == "deep") {
        j[key] = value == "true" || value == "1";
      } else if (key == "t") {
        std::vector<double> ts;
        std::istringstream parts(value);
        std::string part;
        while (std::getline(parts, part, ',')) ts.push_back(std::stod(trim(part)));
        j[key] = ts;
      } else if (key == "d" || key == "workers") {
        j[key] = std::stoi(value);
      } else if (key == "reps") {
        j[key] = std::stoll(value);
      } else if (key == "seed") {
        j[key] = std::stoull(value);
      } else {
        j[key] = std::stod(value);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ConfigError, "bad value for '" + key + "' on config line " + std::to_string(lineno));
    }
  }
  return j;
}

}  // namespace

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot read config file " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  Json j;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ConfigError, std::string("config file is not valid JSON: ") + e.what());
    }
  } else {
    j = parse_key_values(text);
  }
  // Keys present in the file override the base.
  Json merged = to_json(base);
  for (auto it = j.begin(); it != j.end(); ++it) merged[it.key()] = *it;
  return run_config_from_json(merged);
}

Json to_json(const ResultEnvelope& e) {
  return Json{{"schema_version", e.schema_version},
              {"command", e.command},
              {"config", to_json(e.config)},
              {"started", e.started},
              {"finished", e.finished},
              {"results", e.results},
              {"degenerate_count", e.degenerate_count},
              {"passed", e.passed}};
}

ResultEnvelope envelope_from_json(const Json& j) {
  ResultEnvelope e;
  try {
    e.schema_version = j.at("schema_version").get<std::string>();
    if (e.schema_version != kSchemaVersion) {
      throw Error(ErrorCode::ConfigError, "unsupported schema_version " + e.schema_version);
    }
    e.command = j.at("command").get<std::string>();
    e.config = run_config_from_json(j.at("config"));
    e.started = j.at("started").get<std::string>();
    e.finished = j.at("finished").get<std::string>();
    e.results = j.at("results");
    e.degenerate_count = j.at("degenerate_count").get<std::int64_t>();
    e.passed = j.at("passed").get<bool>();
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::ConfigError, std::string("malformed envelope: ") + ex.what());
  }
  return e;
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

Json estimate_with_exact(const MCEstimate& e, double exact) {
  Json j = to_json(e);
  j["exact"] = exact;
  j["z_score"] = e.std_error > 0 ? (e.mean - exact) / e.std_error : 0.0;
  return j;
}

Json constants_payload(const RunConfig& c) {
  const Dim d(c.d);
  const ExtremalConstants k = extremal_norm_constants(d);
  Json j{{"d", c.d},
         {"alpha", c.alpha},
         {"kappa_d", unit_ball_volume(d)},
         {"sphere_area", unit_sphere_area(d)},
         {"c_d", c_d(d)},
         {"c_d_alpha", c_d_alpha(d, c.alpha)},
         {"k_d_alpha", k_d_alpha(d, c.alpha)},
         {"tail_prefactor", tail_prefactor(d, c.alpha)},
         {"alpha1", k.alpha1},
         {"alpha1_prime", k.alpha1_prime},
         {"theta", k.theta},
         {"wendel_probability", wendel_probability(d)},
         {"miles_mean_simplex_volume", miles_mean_simplex_volume(d)},
         {"conditional_mean_ratio", conditional_mean_ratio(d)}};
  std::vector<double> counts;
  for (double t : c.t) counts.push_back(expected_pointy_count(d, c.alpha, t));
  j["t_grid"] = c.t;
  j["expected_pointy_count"] = counts;
  return j;
}

Json pointy_payload(const RunConfig& c, std::int64_t& degenerate) {
  const Dim d(c.d);
  Json est = Json::array();
  std::vector<double> exact;
  for (double t : c.t) {
    const MCEstimate e = estimate_pointy_count(d, c.alpha, t, c.reps, c.seed, c.workers);
    degenerate = std::max(degenerate, e.degenerate_count);
    est.push_back(to_json(e));
    exact.push_back(expected_pointy_count(d, c.alpha, t));
  }
  return Json{{"d", c.d}, {"alpha", c.alpha}, {"t_grid", c.t}, {"pointy_count", est}, {"exact_expected_count", exact}};
}

Json simplex_payload(const RunConfig& c, std::int64_t& degenerate) {
  const Dim d(c.d);
  const MCEstimate w = estimate_wendel(d, c.reps, c.seed, c.workers);
  const MCEstimate m = estimate_miles(d, c.reps, c.seed, c.workers);
  const MCEstimate cd = estimate_c_d(d, c.reps, c.seed, c.workers);
  degenerate = w.degenerate_count + m.degenerate_count + cd.degenerate_count;
  Json j{{"d", c.d},
         {"wendel", estimate_with_exact(w, wendel_probability(d))},
         {"miles", estimate_with_exact(m, miles_mean_simplex_volume(d))},
         {"c_d", estimate_with_exact(cd, c_d(d))},
         {"conditional_mean_ratio", conditional_mean_ratio(d)}};
  if (m.mean > 0 && w.mean > 0) j["conditional_mean_ratio_mc"] = cd.mean / (w.mean * m.mean);
  return j;
}

Json extremal_payload(const RunConfig& c) {
  if (c.alpha != 0) throw Error(ErrorCode::ConfigError, "extremal-index supports alpha = 0 only");
  ExtremeRunConfig cfg;
  cfg.d = Dim(c.d);
  cfg.n = c.n;
  cfg.reps = c.reps;
  cfg.seed = c.seed;
  const ExtremeReport rep = run_box_experiment(cfg, c.workers);
  Json j = to_json(rep);
  j["theta_target"] = 1.0 / (2 * c.d);
  if (rep.theta_hat.reps > 0) {
    j["theta_iid_control"] = to_json(iid_control_extremal_index(rep, rep.threshold, cfg.d, c.seed + 1));
  }
  return j;
}

Json validate_payload(const RunConfig& c, bool& passed) {
  ValidationOptions o;
  o.deep = c.deep;
  o.seed = c.seed;
  o.workers = c.workers;
  Json list = Json::array();
  passed = true;
  for (const CriterionResult& r : run_validation(o)) {
    Json checks = Json::array();
    for (const auto& ch : r.checks) checks.push_back(Json{{"what", ch.what}, {"passed", ch.passed}, {"detail", ch.detail}});
    list.push_back(Json{{"id", r.id}, {"title", r.title}, {"passed", r.passed()}, {"checks", checks}});
    passed = passed && r.passed();
  }
  return Json{{"deep", c.deep}, {"criteria", list}};
}

}  // namespace

ResultEnvelope run(const RunConfig& config) {
  config.validate();
  ResultEnvelope env;
  env.command = config.command;
  env.config = config;
  env.started = utc_now();
  const Dim d(config.d);
  const std::string& cmd = config.command;
  std::int64_t degenerate = 0;
  if (cmd == "constants") {
    env.results = constants_payload(config);
  } else if (cmd == "estimate-cd") {
    const MCEstimate e = estimate_c_d(d, config.reps, config.seed, config.workers);
    degenerate = e.degenerate_count;
    env.results = Json{{"d", config.d}, {"c_d", estimate_with_exact(e, c_d(d))}};
  } else if (cmd == "estimate-cd-alpha") {
    const MCEstimate e = estimate_c_d_alpha(d, config.alpha, config.reps, config.seed, config.workers);
    degenerate = e.degenerate_count;
    env.results = Json{{"d", config.d}, {"alpha", config.alpha},
                       {"c_d_alpha", estimate_with_exact(e, c_d_alpha(d, config.alpha))}};
  } else if (cmd == "pointy-count") {
    env.results = pointy_payload(config, degenerate);
  } else if (cmd == "tail") {
    const TailReport r = estimate_tail(d, config.alpha, config.t, config.reps, config.seed, config.workers);
    degenerate = r.degenerate_count;
    env.results = to_json(r);
  } else if (cmd == "k-alpha") {
    const MCEstimate e = estimate_k_d_alpha_mc(d, config.alpha, config.reps, config.seed, config.workers);
    degenerate = e.degenerate_count;
    env.results = Json{{"d", config.d}, {"alpha", config.alpha},
                       {"k_d_alpha", estimate_with_exact(e, k_d_alpha(d, config.alpha))}};
  } else if (cmd == "simplex-stats") {
    env.results = simplex_payload(config, degenerate);
  } else if (cmd == "extremal-index") {
    env.results = extremal_payload(config);
  } else if (cmd == "validate") {
    env.results = validate_payload(config, env.passed);
  }
  env.degenerate_count = degenerate;
  env.finished = utc_now();
  return env;
}

std::string render(const ResultEnvelope& e) {
  if (e.config.format == "csv") return results_to_csv(e.results);
  return to_json(e).dump(2) + "\n";
}

void emit_csv(const ResultEnvelope& e, const std::string& path) { write_text(path, results_to_csv(e.results)); }

namespace {

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidDimension:
    case ErrorCode::AlphaOutOfRange:
    case ErrorCode::NegativeThreshold:
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::NotTabular:
    case ErrorCode::ThresholdOutOfRange:
    case ErrorCode::BadBox:
    case ErrorCode::BadRho:
      return kExitConfig;
    default:
      return kExitFailure;
  }
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << Json{{"schema_version", kSchemaVersion}, {"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // A config file supplies defaults; flags given on the command line win.
  RunConfig cfg;
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  try {
    if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what());
    return kExitConfig;
  }

  CLI::App app{"Typical Poisson-Voronoi cell experiments"};
  app.set_version_flag("--version", std::string("pvcell schema ") + kSchemaVersion);
  std::string command = cfg.command;
  app.add_option("command", command, "Experiment to run")->check(CLI::IsMember(cli_commands()));
  app.add_option("--d", cfg.d, "Dimension (2..12)");
  app.add_option("--alpha", cfg.alpha, "Radial-power exponent of the intensity (> -d)");
  app.add_option("--t", cfg.t, "Threshold or comma-separated ascending thresholds")->delimiter(',');
  app.add_option("--reps", cfg.reps, "Monte Carlo replicates");
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
  app.add_option("--out", cfg.out, "Output path (default standard output)");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--n", cfg.n, "Box side for extremal-index");
  app.add_option("--config", config_path, "JSON or key=value config file");
  app.add_flag("--deep", cfg.deep, "Full replicate counts for validate");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "ConfigError", e.what());
    return kExitConfig;
  }
  cfg.command = command;

  try {
    const ResultEnvelope env = run(cfg);
    const std::string text = render(env);
    if (cfg.out.empty()) {
      out << text;
    } else {
      write_text(cfg.out, text);
    }
    if (cfg.command == "validate") {
      // Summary on stderr keeps standard output a single document.
      for (const auto& c : env.results.at("criteria")) {
        err << (c.at("passed").get<bool>() ? "[PASS] " : "[FAIL] ") << c.at("id").get<int>() << " "
            << c.at("title").get<std::string>() << "\n";
      }
    }
    return env.passed ? kExitOk : kExitFailure;
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kExitFailure;
  }
}

}  // namespace pvc
