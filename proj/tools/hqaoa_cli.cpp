// hqaoa_cli: experiment runner for the homogeneous proxy.
//
//   hqaoa_cli <command> [flags]     commands: precompute optimize evaluate
//                                   overlap-sweep landscape empirical-compare
//
// Flags may also come from a JSON file (--config), either a flat object with
// the same keys as the flags (dashes become underscores) or a manifest.json
// written by an earlier run. Flags given on the command line win. Every run
// writes <out>/manifest.json echoing the resolved configuration.

#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hqaoa/experiments.hpp"
#include "hqaoa/io.hpp"

namespace fs = std::filesystem;
using namespace hqaoa;

namespace {

using Ramp4 = std::array<double, 4>;

struct Config {
  std::string command;
  std::string class_name = "maxcut-er";
  int n = 10;
  double pe = 0.5;
  int m = 0;  // 0: not given
  int k = 0;  // 0: class default
  double margin = 0.0;
  int p = 1;
  std::uint64_t seed = 0;
  std::string parameterization = "ramp";
  double tol = 1e-6;
  int max_iter = 500;
  int restarts = 0;
  // smaller-γ copies of the default ramp; large classes stall from the default alone
  std::vector<Ramp4> init_ramps{{0.01, 0.06, 0.6, 0.1}, {0.025, 0.15, 0.6, 0.1}, {0.05, 0.3, 0.6, 0.1}};
  int instances = 10;
  std::vector<double> gammas;
  std::vector<double> betas;
  std::string result;
  std::vector<Ramp4> ramps;
  std::vector<double> prefix_gammas;
  std::vector<double> prefix_betas;
  int grid_gamma = 30;
  int grid_beta = 30;
  std::array<double, 2> gamma_range{0.0, 2.0 * std::numbers::pi};
  std::array<double, 2> beta_range{0.0, std::numbers::pi};
  std::vector<int> costs;
  bool dump_states = false;
  unsigned workers = 1;
  std::string out = "out";
  std::string cache_dir;
};

// Keys that change results; out, cache_dir and workers do not.
Json result_fields(const Config& c) {
  Json j;
  j["command"] = c.command;
  j["class"] = c.class_name;
  j["n"] = c.n;
  j["pe"] = c.pe;
  j["m"] = c.m;
  j["k"] = c.k;
  j["margin"] = c.margin;
  j["p"] = c.p;
  j["seed"] = c.seed;
  j["parameterization"] = c.parameterization;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["restarts"] = c.restarts;
  j["init_ramps"] = c.init_ramps;
  j["instances"] = c.instances;
  j["gammas"] = c.gammas;
  j["betas"] = c.betas;
  j["result"] = c.result;
  j["ramps"] = c.ramps;
  j["prefix_gammas"] = c.prefix_gammas;
  j["prefix_betas"] = c.prefix_betas;
  j["grid_gamma"] = c.grid_gamma;
  j["grid_beta"] = c.grid_beta;
  j["gamma_range"] = c.gamma_range;
  j["beta_range"] = c.beta_range;
  j["costs"] = c.costs;
  j["dump_states"] = c.dump_states;
  return j;
}

Json to_json(const Config& c) {
  Json j = result_fields(c);
  j["workers"] = c.workers;
  j["out"] = c.out;
  j["cache_dir"] = c.cache_dir;
  return j;
}

std::uint64_t config_hash(const Config& c) { return fnv1a(result_fields(c).dump()); }

template <class T>
void take(const Json& j, const char* key, T& dst) {
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("config key '") + key + "': " + e.what());
  }
}

void apply_json(Config& c, const Json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "command") continue;  // set by the subcommand
    if (key == "class") take(j, k, c.class_name);
    else if (key == "n") take(j, k, c.n);
    else if (key == "pe") take(j, k, c.pe);
    else if (key == "m") take(j, k, c.m);
    else if (key == "k") take(j, k, c.k);
    else if (key == "margin") take(j, k, c.margin);
    else if (key == "p") take(j, k, c.p);
    else if (key == "seed") take(j, k, c.seed);
    else if (key == "parameterization") take(j, k, c.parameterization);
    else if (key == "tol") take(j, k, c.tol);
    else if (key == "max_iter") take(j, k, c.max_iter);
    else if (key == "restarts") take(j, k, c.restarts);
    else if (key == "init_ramps") take(j, k, c.init_ramps);
    else if (key == "instances") take(j, k, c.instances);
    else if (key == "gammas") take(j, k, c.gammas);
    else if (key == "betas") take(j, k, c.betas);
    else if (key == "result") take(j, k, c.result);
    else if (key == "ramps") take(j, k, c.ramps);
    else if (key == "prefix_gammas") take(j, k, c.prefix_gammas);
    else if (key == "prefix_betas") take(j, k, c.prefix_betas);
    else if (key == "grid_gamma") take(j, k, c.grid_gamma);
    else if (key == "grid_beta") take(j, k, c.grid_beta);
    else if (key == "gamma_range") take(j, k, c.gamma_range);
    else if (key == "beta_range") take(j, k, c.beta_range);
    else if (key == "costs") take(j, k, c.costs);
    else if (key == "dump_states") take(j, k, c.dump_states);
    else if (key == "workers") take(j, k, c.workers);
    else if (key == "out") take(j, k, c.out);
    else if (key == "cache_dir") take(j, k, c.cache_dir);
    else fail(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
  }
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

Ramp4 parse_ramp(const std::string& text) {
  const auto v = parse_list(text, "ramp");
  require(v.size() == 4, "ramp '" + text + "' needs four values: gamma_start,gamma_end,beta_start,beta_end");
  return {v[0], v[1], v[2], v[3]};
}

ClassSpec class_spec(const Config& c) {
  switch (parse_class_kind(c.class_name)) {
    case ClassKind::MaxCutER: {
      auto s = ClassSpec::maxcut_er(c.n, c.pe, c.margin);
      require(c.m == 0 || c.m == s.m, "maxcut-er: --m must be omitted or equal ceil(pe*n(n-1)/2)");
      return s;
    }
    case ClassKind::MaxE3Lin2: return ClassSpec::max_e3lin2(c.n, c.m);
    case ClassKind::MaxKXor: return ClassSpec::max_kxor(c.n, c.m, c.k);
    case ClassKind::RandKSat: return ClassSpec::rand_ksat(c.n, c.m, c.k == 0 ? 3 : c.k);
    case ClassKind::HammingWeight: return ClassSpec::hamming_weight(c.n);
  }
  fail(ErrorKind::InvalidArgument, "unknown class");
}

std::vector<std::uint64_t> instance_seeds(const Config& c) {
  require(c.instances >= 1, "--instances must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < c.instances; ++i) seeds.push_back(c.seed + static_cast<std::uint64_t>(i));
  return seeds;
}

DistributionTable table_for(const Config& c, const ClassSpec& spec) {
  bool hit = false;
  auto t = load_or_precompute(spec, c.cache_dir, c.workers, &hit);
  if (hit) std::cout << "table: loaded from " << table_cache_path(c.cache_dir, spec).string() << "\n";
  return t;
}

OptimizerOptions optimizer_options(const Config& c) {
  OptimizerOptions o;
  o.parameterization = parse_parameterization(c.parameterization);
  o.tolerance = c.tol;
  o.max_iterations = c.max_iter;
  o.restarts = c.restarts;
  o.seed = c.seed;
  for (const auto& r : c.init_ramps) o.extra_ramps.push_back({r[0], r[1], r[2], r[3]});
  return o;
}

Schedule schedule_from(const Config& c) {
  if (!c.result.empty()) {
    require(c.gammas.empty() && c.betas.empty(), "give either --result or --gammas/--betas, not both");
    return schedule_from_json(read_json_file(c.result));
  }
  Schedule s{c.gammas, c.betas};
  validate(s);
  require(s.depth() >= 1, "evaluate needs a schedule: --result or --gammas/--betas");
  return s;
}

Grid grid_from(const Config& c) {
  Grid g;
  g.gamma = {c.gamma_range[0], c.gamma_range[1]};
  g.beta = {c.beta_range[0], c.beta_range[1]};
  g.gamma_steps = c.grid_gamma;
  g.beta_steps = c.grid_beta;
  validate(g);
  return g;
}

// ---- commands -----------------------------------------------------------

void cmd_precompute(const Config& c, const fs::path& out) {
  const auto spec = class_spec(c);
  const auto t = table_for(c, spec);
  save_table(t, out / "table.bin");
  const auto r = sum_rule_residuals(t);
  Json summary;
  summary["class"] = to_json(spec);
  summary["class_hash"] = hex64(spec_hash(spec));
  summary["cost_set_size"] = t.size();
  int reachable = 0;
  for (int cp = 0; cp < t.size(); ++cp) reachable += t.reachable(cp);
  summary["reachable_costs"] = reachable;
  summary["residuals"] = {{"row_sum", r.row_sum},
                          {"total", r.total},
                          {"detailed_balance", r.detailed_balance},
                          {"probability_sum", r.probability_sum}};
  write_json_file(out / "summary.json", summary);
  std::cout << "precompute: |C| = " << t.size() << ", max row-sum residual " << r.row_sum << "\n";
}

void cmd_optimize(const Config& c, const fs::path& out) {
  const auto spec = class_spec(c);
  const auto t = table_for(c, spec);
  const auto r = heuristic(t, c.p, optimizer_options(c));
  write_json_file(out / "result.json", to_json(r, spec));
  std::cout << "optimize: objective " << format_double(r.objective_value) << " after " << r.iterations
            << " iterations, " << r.evaluation_count << " evaluations\n";
}

void cmd_evaluate(const Config& c, const fs::path& out) {
  const auto spec = class_spec(c);
  const auto schedule = schedule_from(c);
  const auto seeds = instance_seeds(c);
  const auto rows = evaluate_instances(spec, seeds, schedule, c.workers);
  const auto h = config_hash(c);
  CsvWriter csv(h, {"seed", "clauses", "c_opt", "expected", "ratio"});
  double mean = 0.0;
  for (const auto& r : rows) {
    csv.values(r.seed, r.clauses, r.c_opt, r.expected, r.ratio);
    mean += r.ratio / static_cast<double>(rows.size());
  }
  double var = 0.0;
  for (const auto& r : rows) var += (r.ratio - mean) * (r.ratio - mean) / static_cast<double>(rows.size());
  csv.save(out / "evaluate.csv");
  write_json_file(out / "summary.json", Json{{"instances", rows.size()}, {"ratio_mean", mean}, {"ratio_std", std::sqrt(var)}});
  if (c.dump_states) {
    const auto t = table_for(c, spec);
    write_text_file(out / "homog_state.csv", dump_homog_state(evolve(t, schedule), t, h));
    if (spec.n <= kStatevectorDumpLimit) {
      for (auto seed : seeds) {
        const auto inst = generate_instance(spec, seed);
        write_text_file(out / ("statevector_" + std::to_string(seed) + ".csv"),
                        dump_statevector(qaoa_state(inst, schedule).amplitudes, spec.n, h));
      }
    }
  }
  std::cout << "evaluate: mean ratio " << format_double(mean) << " over " << rows.size() << " instances\n";
}

void cmd_overlap_sweep(const Config& c, const fs::path& out) {
  const auto spec = class_spec(c);
  const auto t = table_for(c, spec);
  const auto inst = generate_instance(spec, c.seed);
  const auto costs = cost_vector(inst);
  auto ramps = c.ramps;
  if (ramps.empty()) ramps = {{0.1, 0.3, 0.6, 0.1}, {0.3, 0.9, 0.6, 0.1}, {0.6, 1.6, 0.6, 0.1}};
  CsvWriter csv(config_hash(c), {"setting", "gamma_start", "gamma_end", "beta_start", "beta_end", "layer", "overlap"});
  for (std::size_t s = 0; s < ramps.size(); ++s) {
    const auto& r = ramps[s];
    const auto ov = overlap_by_layer(spec.n, costs, t, linear_ramp_expand({r[0], r[1], r[2], r[3]}, c.p));
    double mean = 0.0;
    for (std::size_t l = 0; l < ov.size(); ++l) {
      csv.values(s, r[0], r[1], r[2], r[3], l, ov[l]);
      if (l > 0) mean += ov[l] / static_cast<double>(ov.size() - 1);
    }
    std::cout << "overlap-sweep: setting " << s << " mean overlap " << format_double(mean) << "\n";
  }
  csv.save(out / "overlap.csv");
}

void cmd_landscape(const Config& c, const fs::path& out) {
  const auto spec = class_spec(c);
  require(c.p >= 1, "--p must be >= 1");
  Schedule prefix{c.prefix_gammas, c.prefix_betas};
  validate(prefix);
  if (prefix.depth() == 0 && c.p > 1) {
    prefix = linear_ramp_expand(LinearRamp{}, c.p);
    prefix.gammas.pop_back();
    prefix.betas.pop_back();
  }
  require(prefix.depth() == c.p - 1, "landscape: prefix must have p-1 layers");
  const auto grid = grid_from(c);
  const auto t = table_for(c, spec);
  const auto inst = generate_instance(spec, c.seed);
  const auto costs = cost_vector(inst);
  const auto typical = typical_landscape(spec.n, costs, prefix, grid);
  const auto homog = homogeneous_landscape(t, prefix, grid);
  for (const auto& [name, l] : {std::pair{"typical", &typical}, std::pair{"homogeneous", &homog}}) {
    CsvWriter csv(config_hash(c), {"i", "j", "gamma", "beta", "value"});
    for (int i = 0; i < grid.gamma_steps; ++i)
      for (int j = 0; j < grid.beta_steps; ++j) csv.values(i, j, grid.gamma_at(i), grid.beta_at(j), l->values(i, j));
    csv.save(out / (std::string("landscape_") + name + ".csv"));
  }
  const auto a = argmax_cell(typical, spec.maximize()), b = argmax_cell(homog, spec.maximize());
  std::cout << "landscape: typical best cell (" << a.i << "," << a.j << ") in " << typical.seconds
            << " s; homogeneous best cell (" << b.i << "," << b.j << ") in " << homog.seconds << " s\n";
}

void cmd_empirical_compare(const Config& c, const fs::path& out) {
  const auto spec = class_spec(c);
  const auto t = table_for(c, spec);
  std::vector<ProblemInstance> insts;
  for (auto seed : instance_seeds(c)) insts.push_back(generate_instance(spec, seed));
  auto costs = c.costs;
  if (costs.empty()) costs.push_back(modal_cost(t));
  const auto h = config_hash(c);
  CsvWriter cells(h, {"cost", "d", "c", "analytic", "mean", "std", "std_over_mean"});
  CsvWriter summary(h, {"cost", "cohort_size", "pearson"});
  for (int cp : costs) {
    const auto r = empirical_compare(t, insts, cp);
    for (int d = 0; d < r.mean.rows; ++d)
      for (int cc = 0; cc < r.mean.cols; ++cc) {
        const double mean = r.mean(d, cc);
        cells.values(cp, d, cc, r.analytic(d, cc), mean, r.stddev(d, cc),
                     mean > 0.0 ? format_double(r.stddev(d, cc) / mean) : std::string("nan"));
      }
    summary.values(cp, r.cohort_size, r.pearson);
    std::cout << "empirical-compare: c' = " << cp << ", cohort " << r.cohort_size << ", pearson "
              << format_double(r.pearson) << "\n";
  }
  cells.save(out / "empirical.csv");
  summary.save(out / "pearson.csv");
}

struct Flag {
  const char* name;   // without dashes
  const char* key;    // config key
  enum Kind { Text, Int, Real, Bool, RealList, IntList, RampList } kind;
  const char* help;
};

const std::vector<Flag>& common_flags() {
  static const std::vector<Flag> flags{
      {"class", "class", Flag::Text, "maxcut-er | max-e3lin2 | max-kxor | rand-ksat | hamming-weight"},
      {"n", "n", Flag::Int, "number of variables"},
      {"pe", "pe", Flag::Real, "edge probability (maxcut-er)"},
      {"m", "m", Flag::Int, "number of clauses"},
      {"k", "k", Flag::Int, "clause width (max-kxor, rand-ksat)"},
      {"margin", "margin", Flag::Real, "cost-set widening in standard deviations (maxcut-er)"},
      {"p", "p", Flag::Int, "QAOA depth"},
      {"seed", "seed", Flag::Int, "base seed; instance i uses seed + i"},
      {"out", "out", Flag::Text, "output directory"},
      {"cache-dir", "cache_dir", Flag::Text, "table cache directory"},
      {"parameterization", "parameterization", Flag::Text, "full | ramp"},
      {"tol", "tol", Flag::Real, "relative objective tolerance"},
      {"max-iter", "max_iter", Flag::Int, "iteration cap per run"},
      {"workers", "workers", Flag::Int, "worker threads"},
  };
  return flags;
}

const std::vector<Flag>& command_flags(const std::string& cmd) {
  static const std::vector<Flag> none;
  static const std::vector<Flag> optimize{
      {"restarts", "restarts", Flag::Int, "extra seeded uniform starting points"},
      {"init-ramp", "init_ramps", Flag::RampList, "extra starting ramp g1,gf,b1,bf (repeatable)"},
  };
  static const std::vector<Flag> evaluate{
      {"instances", "instances", Flag::Int, "number of seeded instances"},
      {"result", "result", Flag::Text, "schedule from an optimize result.json"},
      {"gammas", "gammas", Flag::RealList, "comma-separated gammas"},
      {"betas", "betas", Flag::RealList, "comma-separated betas"},
      {"dump-states", "dump_states", Flag::Bool, "also write proxy and statevector dumps"},
  };
  static const std::vector<Flag> overlap{
      {"ramp", "ramps", Flag::RampList, "ramp g1,gf,b1,bf to sweep (repeatable)"},
  };
  static const std::vector<Flag> landscape{
      {"prefix-gammas", "prefix_gammas", Flag::RealList, "fixed gammas of the first p-1 layers"},
      {"prefix-betas", "prefix_betas", Flag::RealList, "fixed betas of the first p-1 layers"},
      {"grid-gamma", "grid_gamma", Flag::Int, "grid points along gamma"},
      {"grid-beta", "grid_beta", Flag::Int, "grid points along beta"},
      {"gamma-range", "gamma_range", Flag::RealList, "lo,hi"},
      {"beta-range", "beta_range", Flag::RealList, "lo,hi"},
  };
  static const std::vector<Flag> empirical{
      {"instances", "instances", Flag::Int, "number of seeded instances"},
      {"costs", "costs", Flag::IntList, "comma-separated c' values (default: modal cost)"},
  };
  if (cmd == "optimize") return optimize;
  if (cmd == "evaluate") return evaluate;
  if (cmd == "overlap-sweep") return overlap;
  if (cmd == "landscape") return landscape;
  if (cmd == "empirical-compare") return empirical;
  return none;
}

Json flag_value(const Flag& f, const std::vector<std::string>& raw) {
  const std::string& text = raw.back();
  switch (f.kind) {
    case Flag::Text: return text;
    case Flag::Bool: return true;
    case Flag::Int: {
      const auto v = parse_list(text, f.name);
      require(v.size() == 1 && std::floor(v[0]) == v[0], std::string("--") + f.name + " expects an integer");
      if (std::string(f.key) == "seed") {
        require(v[0] >= 0, "--seed must be >= 0");
        return static_cast<std::uint64_t>(v[0]);
      }
      return static_cast<long long>(v[0]);
    }
    case Flag::Real: {
      const auto v = parse_list(text, f.name);
      require(v.size() == 1, std::string("--") + f.name + " expects one number");
      return v[0];
    }
    case Flag::RealList: return parse_list(text, f.name);
    case Flag::IntList: {
      std::vector<int> ints;
      for (double x : parse_list(text, f.name)) {
        require(std::floor(x) == x, std::string("--") + f.name + " expects integers");
        ints.push_back(static_cast<int>(x));
      }
      return ints;
    }
    case Flag::RampList: {
      Json list = Json::array();
      for (const auto& r : raw) list.push_back(parse_ramp(r));
      return list;
    }
  }
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogeneous-proxy QAOA parameter setting"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"precompute", "compute and cache the class distribution table"},
      {"optimize", "set class-level parameters by optimizing the proxy estimate"},
      {"evaluate", "exact <C>, optimum and ratio of a schedule on seeded instances"},
      {"overlap-sweep", "layerwise overlap of proxy and exact states along ramps"},
      {"landscape", "typical and homogeneous objective grids over the last layer"},
      {"empirical-compare", "cohort statistics of n(x;d,c) against the class table"},
  };

  std::string config_path;
  std::map<std::string, std::pair<const Flag*, std::vector<std::string>>> raw;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    subs[name] = sub;
    sub->add_option("--config", config_path, "JSON config or a previous manifest.json");
    for (const auto* list : {&common_flags(), &command_flags(name)}) {
      for (const auto& f : *list) {
        auto& slot = raw[name + "/" + f.key];
        slot.first = &f;
        if (f.kind == Flag::Bool)
          sub->add_flag_function(std::string("--") + f.name, [&slot](std::int64_t) { slot.second = {"1"}; }, f.help);
        else
          sub->add_option(std::string("--") + f.name, slot.second, f.help)->allow_extra_args(false);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  try {
    Config cfg;
    if (!config_path.empty()) {
      const Json j = read_json_file(config_path);
      apply_json(cfg, j.contains("config") && j.contains("config_hash") ? j.at("config") : j);
    }
    Json overrides = Json::object();
    for (const auto& [key, slot] : raw)
      if (key.rfind(command + "/", 0) == 0 && !slot.second.empty())
        overrides[slot.first->key] = flag_value(*slot.first, slot.second);
    apply_json(cfg, overrides);
    cfg.command = command;
    require(cfg.workers >= 1, "--workers must be >= 1");

    const fs::path out = cfg.out;
    fs::create_directories(out);
    Json manifest;
    manifest["command"] = command;
    manifest["config_hash"] = hex64(config_hash(cfg));
    manifest["config"] = to_json(cfg);
    write_json_file(out / "manifest.json", manifest);

    if (command == "precompute") cmd_precompute(cfg, out);
    else if (command == "optimize") cmd_optimize(cfg, out);
    else if (command == "evaluate") cmd_evaluate(cfg, out);
    else if (command == "overlap-sweep") cmd_overlap_sweep(cfg, out);
    else if (command == "landscape") cmd_landscape(cfg, out);
    else if (command == "empirical-compare") cmd_empirical_compare(cfg, out);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
