#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sptq/io.hpp"
#include "sptq/models.hpp"
#include "sptq/validate.hpp"

using nlohmann::json;
using namespace sptq;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, json>& defaults() {
  static const std::map<std::string, json> d = {
      {"quench-ssh",
       {{"J1", 0.5}, {"J2", 1.0}, {"J1p", 1.0}, {"J2p", 0.5}, {"phs", 0.0}, {"phs_p", 0.0}, {"l", 40}, {"L", 0},
        {"Nk", 2048}, {"t_min", 0.0}, {"t_max", 60.0}, {"t_steps", 61}, {"kappa", 0.6}}},
      {"lr-constants",
       {{"J1", 0.5}, {"J2", 1.0}, {"J1p", 1.0}, {"J2p", 0.5}, {"phs", 0.0}, {"phs_p", 0.0}, {"kappa_min", 0.0375},
        {"kappa_max", 0.6}, {"kappa_steps", 16}}},
      {"flatband", {{"N_max", 5}, {"t_min", 0.0}, {"t_max", 4 * M_PI}, {"t_steps", 200}}},
      {"mps-quench", {{"p", 0.49}, {"q", 0.49}, {"t_max", 3}, {"l_min", 10}, {"l_max", 24}}},
      {"cocycle", {{"N", 6}, {"nu", 1}, {"n", 2}, {"draw", 0}, {"t_min", 0.0}, {"t_max", 10.0}, {"t_steps", 201}}},
      {"disorder-ssh",
       {{"J", 0.5}, {"Jp", 1.0}, {"f", 0.0}, {"Jq", 1.0}, {"Jpq", 0.5}, {"fq", 0.6}, {"l", 10}, {"realizations", 200},
        {"t_min", 0.0}, {"t_max", 200.0}, {"t_steps", 101}}},
      {"mbl",
       {{"L", 6}, {"p", 0.49}, {"q", 0.49}, {"J0", 3.0}, {"kappa", 3.0}, {"realizations", 100}, {"cut", 3},
        {"t_min", 0.1}, {"t_max", 1e4}, {"t_steps", 41}, {"log_times", true}}},
      {"validate", {{"criteria", json::array()}, {"tol_scale", json::object()}}},
  };
  return d;
}

bool same_kind(const json& def, const json& v) {
  if (def.is_number_float()) return v.is_number();
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  if (def.is_object()) return v.is_object();
  return false;
}

// Merges user parameters over the defaults; unknown keys and kind mismatches are config errors.
json merge_params(const std::string& exp, const json& user) {
  json out = defaults().at(exp);
  if (user.is_null()) return out;
  if (!user.is_object()) throw ConfigError("parameters must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!out.contains(it.key())) throw ConfigError("unknown parameter '" + it.key() + "' for " + exp);
    if (!same_kind(out[it.key()], it.value())) throw ConfigError("parameter '" + it.key() + "' has the wrong type");
    out[it.key()] = out[it.key()].is_number_float() ? json(it.value().get<double>()) : it.value();
  }
  return out;
}

json parse_scalar(const std::string& s) {
  try {
    json v = json::parse(s);
    if (v.is_primitive()) return v;
  } catch (const json::parse_error&) {
  }
  return json(s);
}

// "--a.b=v" or "--a.b v" on the effective config
void apply_overrides(json& cfg, const std::vector<std::string>& extras) {
  for (size_t i = 0; i < extras.size(); ++i) {
    std::string a = extras[i];
    if (a.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + a + "'");
    a = a.substr(2);
    std::string key, val;
    auto eq = a.find('=');
    if (eq != std::string::npos) {
      key = a.substr(0, eq);
      val = a.substr(eq + 1);
    } else {
      if (i + 1 >= extras.size()) throw ConfigError("override --" + a + " needs a value");
      key = a;
      val = extras[++i];
    }
    if (key == "experiment") throw ConfigError("the experiment is chosen by the subcommand");
    json* node = &cfg;
    size_t pos = 0;
    while (true) {
      auto dot = key.find('.', pos);
      std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
      if (!node->is_object() || !node->contains(part)) throw ConfigError("unknown key '" + key + "'");
      node = &(*node)[part];
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
    if (!node->is_primitive()) throw ConfigError("'" + key + "' is not a scalar");
    json v = parse_scalar(val);
    if (!same_kind(*node, v)) throw ConfigError("override '" + key + "' has the wrong type");
    *node = node->is_number_float() ? json(v.get<double>()) : v;
  }
}

std::vector<double> time_grid(const json& p) {
  const double a = p["t_min"], b = p["t_max"];
  const int n = p["t_steps"];
  if (n < 1) throw ConfigError("t_steps >= 1");
  const bool lg = p.contains("log_times") && p["log_times"].get<bool>();
  if (lg && !(a > 0 && b > 0)) throw ConfigError("log_times needs positive t_min and t_max");
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) {
    double f = n == 1 ? 0.0 : double(i) / (n - 1);
    t[i] = lg ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a);
  }
  return t;
}

struct Output {
  Table table;
  std::vector<std::string> extra;
};

std::string kv(const std::string& k, double v) { return k + ": " + format_double(v); }

Output run_quench(const json& p, int threads) {
  QuenchSpec s;
  s.J1 = p["J1"];
  s.J2 = p["J2"];
  s.J1p = p["J1p"];
  s.J2p = p["J2p"];
  s.phs = p["phs"];
  s.phs_p = p["phs_p"];
  s.l = p["l"];
  s.L = p["L"];
  s.Nk = p["Nk"];
  s.kappa = p["kappa"];
  s.times = time_grid(p);
  s.threads = threads;
  if (s.l < 1) throw ConfigError("l >= 1");
  QuenchResult r = quench_ssh_experiment(s);
  Output o{r.table, {kv("t_star", r.t_star)}};
  if (s.kappa > 0) {
    o.extra.push_back(kv("C", r.consts.C));
    o.extra.push_back(kv("v", r.consts.v));
    o.extra.push_back(kv("kappa", r.consts.kappa));
  }
  return o;
}

Output run_lr(const json& p, int threads) {
  BlochModel m0 = ssh(p["J1"], p["J2"], p["phs"]), m = ssh(p["J1p"], p["J2p"], p["phs_p"]);
  const double k0 = p["kappa_min"], k1 = p["kappa_max"];
  const int n = p["kappa_steps"];
  if (n < 1 || !(k0 > 0) || k1 < k0) throw ConfigError("need 0 < kappa_min <= kappa_max and kappa_steps >= 1");
  const bool plain = p["phs"].get<double>() == 0 && p["phs_p"].get<double>() == 0;
  Output o;
  o.table.columns = {"kappa", "v", "C", "C_change", "C_analytic_printed", "C_analytic_operator_norm"};
  for (int i = 0; i < n; ++i) {
    double kap = n == 1 ? k0 : k0 + (k1 - k0) * i / (n - 1);
    LRConstants c = lr_constants(m0, m, kap, 1e-9, threads);
    double cp = NAN, co = NAN;
    if (plain) {
      cp = ssh_analytic_C(p["J1"], p["J2"], p["J1p"], p["J2p"], kap, CVariant::Printed);
      co = ssh_analytic_C(p["J1"], p["J2"], p["J1p"], p["J2p"], kap, CVariant::OperatorNorm);
    }
    o.table.rows.push_back({kap, c.v, c.C, c.C_change, cp, co});
  }
  VelocityReport vr = group_velocities(m);
  o.extra = {kv("v_max", vr.v_max), kv("v_mr", vr.v_mr)};
  return o;
}

Output run_flatband(const json& p) {
  const int Nmax = p["N_max"];
  if (Nmax < 1) throw ConfigError("N_max >= 1");
  Output o;
  o.table.columns = {"t", "N", "index", "xi_numeric", "xi_analytic"};
  for (double t : time_grid(p))
    for (int N = 1; N <= Nmax; ++N) {
      FlatbandES f = flatband_es(N, t);
      for (int i = 0; i < N; ++i) o.table.rows.push_back({t, double(N), double(i + 1), f.numeric[i], f.analytic[i]});
    }
  return o;
}

Output run_mps_quench(const json& p, std::uint64_t seed) {
  MPSQuenchSpec s;
  s.p = p["p"];
  s.q = p["q"];
  s.seed = seed;
  s.l_min = p["l_min"];
  s.l_max = p["l_max"];
  const int tm = p["t_max"];
  if (tm < 0 || s.l_min < 1 || s.l_max < s.l_min) throw ConfigError("need t_max >= 0 and 1 <= l_min <= l_max");
  s.steps.clear();
  for (int t = 0; t <= tm; ++t) s.steps.push_back(t);
  MPSQuenchResult r = mps_quench_experiment(s);
  return {r.table, {kv("k0", r.k0), kv("DU", r.DU), kv("mu", r.mu)}};
}

Output run_cocycle(const json& p, std::uint64_t seed) {
  CocycleModel m = make_cocycle_model(p["N"], p["nu"], p["n"], seed, p["draw"].get<std::uint64_t>());
  Output o{cocycle_experiment(m, time_grid(p)), {}};
  o.extra = {kv("r", initial_degeneracy(m.N, m.nu)), kv("subgroup_residual", subgroup_residual(m))};
  return o;
}

Output run_disorder(const json& p, std::uint64_t seed, int threads) {
  DisorderSpec s;
  s.J = p["J"];
  s.Jp = p["Jp"];
  s.f = p["f"];
  s.Jq = p["Jq"];
  s.Jpq = p["Jpq"];
  s.fq = p["fq"];
  s.l = p["l"];
  s.realizations = p["realizations"];
  s.seed = seed;
  s.times = time_grid(p);
  s.threads = threads;
  if (s.l < 1 || s.realizations < 1) throw ConfigError("need l >= 1 and realizations >= 1");
  DisorderResult r = disordered_ssh_experiment(s);
  return {r.table, {kv("L", 2 * s.l + 1), kv("skipped", r.skipped)}};
}

Output run_mbl(const json& p, std::uint64_t seed, int threads) {
  MBLSpec s;
  s.L = p["L"];
  s.p = p["p"];
  s.q = p["q"];
  s.J0 = p["J0"];
  s.kappa = p["kappa"];
  s.realizations = p["realizations"];
  s.cut = p["cut"];
  s.seed = seed;
  s.times = time_grid(p);
  s.threads = threads;
  if (s.realizations < 1) throw ConfigError("realizations >= 1");
  return {mbl_experiment(s), {}};
}

json run_validate(const json& p, int threads, bool& all_pass) {
  ValidateOptions opt;
  opt.threads = threads;
  for (const auto& c : p["criteria"]) {
    if (!c.is_number_integer() || c.get<int>() < 1 || c.get<int>() > 12) throw ConfigError("criteria are 1..12");
    opt.only.insert(c.get<int>());
  }
  for (auto it = p["tol_scale"].begin(); it != p["tol_scale"].end(); ++it) {
    if (!it.value().is_number()) throw ConfigError("tol_scale values must be numbers");
    opt.tol_scale[std::stoi(it.key())] = it.value().get<double>();
  }
  opt.on_result = [](const CriterionResult& r) {
    std::fprintf(stderr, "%s criterion %d (%s)%s%s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                 r.detail.empty() ? "" : ": ", r.detail.c_str());
  };
  json rep;
  rep["version"] = SPTQ_VERSION;
  rep["criteria"] = json::array();
  all_pass = true;
  for (const auto& r : validate_suite(opt)) {
    json e;
    e["id"] = r.id;
    e["name"] = r.name;
    e["pass"] = r.pass;
    e["seconds"] = r.seconds;
    e["detail"] = r.detail;
    e["measured"] = json::object();
    e["tolerance"] = json::object();
    for (const auto& [k, v] : r.measured) e["measured"][k] = std::isfinite(v) ? json(v) : json(format_double(v));
    for (const auto& [k, v] : r.tolerance) e["tolerance"][k] = v;
    rep["criteria"].push_back(e);
    all_pass = all_pass && r.pass;
  }
  rep["passed"] = all_pass;
  return rep;
}

int threads_from_env() {
  if (const char* t = std::getenv("SPTQ_THREADS")) {
    try {
      int n = std::stoi(t);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError("SPTQ_THREADS must be a positive integer");
  }
  return 1;
}

int run(const std::string& exp, const std::string& config_path, const std::string& seed_flag, int threads_flag,
        const std::string& out_flag, const std::vector<std::string>& extras) {
  json user = json::object();
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw ConfigError("cannot read " + config_path);
    try {
      user = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!user.is_object()) throw ConfigError("config must be a JSON object");
  }
  static const std::vector<std::string> top = {"experiment", "seed", "threads", "output", "parameters"};
  for (auto it = user.begin(); it != user.end(); ++it)
    if (std::find(top.begin(), top.end(), it.key()) == top.end()) throw ConfigError("unknown key '" + it.key() + "'");
  if (user.contains("experiment") && user["experiment"] != exp)
    throw ConfigError("config is for '" + user["experiment"].get<std::string>() + "', not '" + exp + "'");
  if (user.contains("seed") && !user["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
  if (user.contains("threads") && !user["threads"].is_number_unsigned()) throw ConfigError("threads must be a positive integer");
  if (user.contains("output") && !user["output"].is_string()) throw ConfigError("output must be a string");

  json cfg;
  cfg["experiment"] = exp;
  cfg["seed"] = user.value("seed", std::uint64_t(1));
  cfg["parameters"] = merge_params(exp, user.contains("parameters") ? user["parameters"] : json());
  apply_overrides(cfg, extras);
  std::uint64_t seed = cfg["seed"];
  if (!seed_flag.empty()) {
    try {
      size_t used = 0;
      seed = std::stoull(seed_flag, &used);
      if (used != seed_flag.size() || seed_flag[0] == '-') throw std::invalid_argument("seed");
    } catch (const std::exception&) {
      throw ConfigError("--seed must be a non-negative integer");
    }
    cfg["seed"] = seed;
  }
  int threads = threads_flag > 0 ? threads_flag : user.contains("threads") ? user["threads"].get<int>() : threads_from_env();
  if (threads < 1) throw ConfigError("threads must be positive");
  set_default_threads(threads);

  std::string out = !out_flag.empty() ? out_flag : user.value("output", exp == "validate" ? "validate_report.json" : exp + ".csv");
  const json& p = cfg["parameters"];
  const std::string canon = cfg.dump();
  const std::string hash = hex64(fnv1a64(canon));

  if (exp == "validate") {
    bool ok = false;
    json rep = run_validate(p, threads, ok);
    rep["config_hash"] = hash;
    write_atomic(out, rep.dump(2) + "\n");
    return ok ? 0 : 2;
  }

  Output o;
  if (exp == "quench-ssh") o = run_quench(p, threads);
  else if (exp == "lr-constants") o = run_lr(p, threads);
  else if (exp == "flatband") o = run_flatband(p);
  else if (exp == "mps-quench") o = run_mps_quench(p, seed);
  else if (exp == "cocycle") o = run_cocycle(p, seed);
  else if (exp == "disorder-ssh") o = run_disorder(p, seed, threads);
  else if (exp == "mbl") o = run_mbl(p, seed, threads);
  else throw ConfigError("unknown experiment " + exp);

  std::vector<std::string> header = {std::string("sptq ") + SPTQ_VERSION, "experiment: " + exp,
                                     "config_hash: " + hash, "seed: " + std::to_string(seed), "config: " + canon};
  header.insert(header.end(), o.extra.begin(), o.extra.end());
  write_atomic(out, render_csv(o.table, header));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-spectrum dynamics experiments"};
  app.set_version_flag("--version", std::string(SPTQ_VERSION));
  app.require_subcommand(1);
  std::string config, seed, out;
  int threads = 0;
  for (const auto& [name, _] : defaults()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->allow_extras();
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--seed", seed, "master seed (overrides config)");
    sub->add_option("--threads", threads, "worker threads (overrides config and SPTQ_THREADS)")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output path");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  auto* sub = app.get_subcommands().front();
  try {
    return run(sub->get_name(), config, seed, threads, out, sub->remaining());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case Errc::InvalidArgument:
      case Errc::InvalidGeometry:
      case Errc::InvalidCocycle:
      case Errc::GridTooCoarse:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
