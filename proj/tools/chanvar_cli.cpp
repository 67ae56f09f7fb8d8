// Command-line front end: validate channels, compute uncertainties, evaluate
// lower bounds, run the randomized check suite, and emit sweep CSVs.
//
// Exit codes: 0 success; 1 domain failure (failed validation, dimension
// mismatch, failed checks); 2 usage, JSON parse, or schema errors; 3 a
// computed bound exceeded its left-hand side beyond 1e-9 (internal bug).

#include "chanvar/chanvar.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;

struct Options {
  std::string channel_path;
  std::vector<std::string> channel_paths;
  std::string state_path;
  std::string theorem;
  double M = 0.0, L = 0.0;
  std::string variant;
  std::string preset;
  std::string channels_csv;
  std::string sweep_var = "theta";
  double fixed_value = 0.0;
  int grid = 0;
  std::string out_path;
  std::uint64_t seed = 0;
  int trials = 200;
  std::string replay_path;
};

chanvar::KrausChannel load_channel(const std::string& path) {
  return chanvar::KrausChannel::create(chanvar::channel_from_json(chanvar::load_json_file(path)));
}

chanvar::DensityMatrix load_state(const std::string& path) {
  return chanvar::state_from_json(chanvar::load_json_file(path));
}

int run_validate(const Options& opt) {
  const chanvar::KrausMap map = chanvar::channel_from_json(chanvar::load_json_file(opt.channel_path));
  const chanvar::ChannelVerdict v = chanvar::validate_channel(map, 1e-8);
  std::cout << "residual " << chanvar::format_full(v.residual) << (v.pass ? " PASS" : " FAIL")
            << "\n";
  return v.pass ? kExitOk : kExitDomain;
}

int run_uncertainty(const Options& opt) {
  const chanvar::KrausChannel ch = load_channel(opt.channel_path);
  const chanvar::DensityMatrix rho = load_state(opt.state_path);
  const chanvar::UncertaintyValue u = chanvar::channel_uncertainty(ch, rho);
  std::cout << chanvar::uncertainty_to_json(u).dump() << "\n";
  return kExitOk;
}

chanvar::BoundParams parse_params(const Options& opt) {
  chanvar::BoundParams p;
  p.M = opt.M;
  p.L = opt.L;
  p.variant = chanvar::variant_from_string(opt.variant);
  chanvar::validate_params(p);
  return p;
}

int run_bound(const Options& opt, bool have_params) {
  const bool pair_theorem = opt.theorem == "1" || opt.theorem == "2";
  const bool multi_theorem = opt.theorem == "3" || opt.theorem == "4" || opt.theorem == "combined";
  if (!pair_theorem && !multi_theorem)
    throw std::invalid_argument("bound: --theorem must be 1, 2, 3, 4, or combined");
  if (pair_theorem && opt.channel_paths.size() != 2)
    throw std::invalid_argument("bound: theorems 1 and 2 take exactly two --channel files");
  if (multi_theorem && opt.channel_paths.size() < 3)
    throw std::invalid_argument("bound: multi-channel bounds take at least three --channel files");
  const bool needs_params = opt.theorem == "3" || opt.theorem == "4";
  if (needs_params && !have_params)
    throw std::invalid_argument("bound: theorems 3 and 4 need --M, --L, and --variant");
  if (!needs_params && have_params)
    throw std::invalid_argument("bound: --M/--L/--variant apply only to theorems 3 and 4");

  std::vector<chanvar::KrausChannel> channels;
  channels.reserve(opt.channel_paths.size());
  for (const std::string& p : opt.channel_paths) channels.push_back(load_channel(p));
  const chanvar::DensityMatrix rho = load_state(opt.state_path);

  chanvar::BoundReport r;
  if (opt.theorem == "1")
    r = chanvar::product_bound_thm1(channels[0], channels[1], rho);
  else if (opt.theorem == "2")
    r = chanvar::sum_bound_thm2(channels[0], channels[1], rho);
  else if (opt.theorem == "3")
    r = chanvar::sum_bound_thm3(channels, rho, parse_params(opt));
  else if (opt.theorem == "4")
    r = chanvar::sum_bound_thm4(channels, rho, parse_params(opt));
  else
    r = chanvar::combined_bound(channels, rho);

  std::cout << chanvar::report_to_json(r).dump() << "\n";
  if (r.gap < -chanvar::kBoundSlack) {
    std::cerr << "error: bound exceeds lhs by " << chanvar::format_full(-r.gap) << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

std::vector<chanvar::ChannelKind> parse_kind_list(const std::string& csv) {
  std::vector<chanvar::ChannelKind> kinds;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) kinds.push_back(chanvar::channel_kind_from_string(tok));
  }
  if (kinds.empty()) throw std::invalid_argument("sweep: --channels must name at least one kind");
  return kinds;
}

int run_sweep(const Options& opt, bool have_params, bool have_fixed) {
  chanvar::SweepSpec spec;
  if (!opt.preset.empty()) {
    spec = chanvar::preset_spec(opt.preset);
  } else {
    if (opt.theorem.empty() || opt.channels_csv.empty())
      throw std::invalid_argument("sweep: give --preset, or --theorem with --channels");
    spec.theorem = opt.theorem;
    spec.kinds = parse_kind_list(opt.channels_csv);
    if (opt.sweep_var == "theta")
      spec.sweep_var = chanvar::SweepVar::Theta;
    else if (opt.sweep_var == "q")
      spec.sweep_var = chanvar::SweepVar::Q;
    else
      throw std::invalid_argument("sweep: --sweep-var must be theta or q");
    if (!have_fixed)
      throw std::invalid_argument("sweep: --fixed gives the non-swept variable's value");
    spec.fixed_value = opt.fixed_value;
    if (have_params) {
      chanvar::BoundParams p;
      p.M = opt.M;
      p.L = opt.L;
      p.variant = chanvar::variant_from_string(opt.variant);
      spec.params = p;
    }
  }
  if (opt.grid > 0) spec.grid_points = opt.grid;

  const chanvar::SweepResult res = chanvar::run_sweep(spec);

  bool violated = false;
  for (const std::vector<double>& row : res.rows) {
    const double lhs = row[row.size() - 2], bound = row[row.size() - 1];
    if (bound > lhs + chanvar::kBoundSlack) violated = true;
  }

  if (opt.out_path == "-") {
    chanvar::write_csv(res, std::cout);
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw chanvar::IoError("cannot open output file: " + opt.out_path);
    chanvar::write_csv(res, out);
  }
  if (violated) {
    std::cerr << "error: a sweep row's bound exceeds its lhs\n";
    return kExitViolation;
  }
  return kExitOk;
}

chanvar::json failure_record(const chanvar::CheckOutcome& o, const chanvar::SuiteConfig& cfg) {
  chanvar::json rec;
  rec["check"] = o.name;
  rec["seed"] = cfg.seed;
  rec["trial"] = o.fail_trial;
  rec["tol"] = cfg.tol;
  rec["deviation"] = o.fail_deviation;
  rec["instance"] = chanvar::instance_to_json(chanvar::sample_check_instance(
      o.id, cfg.seed, static_cast<std::uint64_t>(o.fail_trial)));
  return rec;
}

int run_replay(const std::string& path) {
  chanvar::json doc = chanvar::load_json_file(path);
  if (doc.is_object()) doc = chanvar::json::array({doc});
  if (!doc.is_array() || doc.empty())
    throw chanvar::SchemaError("replay: expected a failure record or an array of them");
  bool all_pass = true;
  for (const chanvar::json& rec : doc) {
    if (!rec.is_object() || !rec.contains("check") || !rec.contains("seed") ||
        !rec.contains("trial"))
      throw chanvar::SchemaError("replay: record needs 'check', 'seed', and 'trial'");
    const chanvar::CheckId id = chanvar::check_id_from_string(rec.at("check").get<std::string>());
    const auto seed = rec.at("seed").get<std::uint64_t>();
    const auto trial = rec.at("trial").get<std::uint64_t>();
    const double tol = rec.contains("tol") ? rec.at("tol").get<double>() : 1e-9;
    const chanvar::CheckInstance inst = chanvar::sample_check_instance(id, seed, trial);
    const double dev = chanvar::evaluate_check(id, inst, tol);
    const bool pass = dev <= tol;
    all_pass = all_pass && pass;
    std::cout << "replay " << chanvar::check_id_name(id) << " seed=" << seed << " trial=" << trial
              << " deviation=" << chanvar::format_full(dev) << (pass ? " PASS" : " FAIL") << "\n";
  }
  return all_pass ? kExitOk : kExitDomain;
}

int run_properties(const Options& opt) {
  if (!opt.replay_path.empty()) return run_replay(opt.replay_path);

  chanvar::SuiteConfig cfg;
  cfg.seed = opt.seed;
  cfg.trials = opt.trials;
  if (cfg.trials < 0) throw std::invalid_argument("properties: --trials must be non-negative");
  if (cfg.trials == 0)
    std::cout << "warning: trials=0, every check passes vacuously\n";

  const std::vector<chanvar::CheckOutcome> outs = chanvar::check_properties(cfg);
  bool all_pass = true;
  for (const chanvar::CheckOutcome& o : outs) {
    std::cout << (o.pass ? "PASS " : "FAIL ") << o.name << " trials=" << o.trials
              << " worst=" << chanvar::format_full(o.worst) << "\n";
    all_pass = all_pass && o.pass;
  }
  std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << " (" << outs.size() << " checks)\n";

  if (!all_pass) {
    chanvar::json failures = chanvar::json::array();
    for (const chanvar::CheckOutcome& o : outs)
      if (!o.pass) failures.push_back(failure_record(o, cfg));
    std::cout << failures.dump() << "\n";
    if (!opt.out_path.empty()) {
      std::ofstream out(opt.out_path, std::ios::binary);
      if (!out) throw chanvar::IoError("cannot open output file: " + opt.out_path);
      out << failures.dump() << "\n";
    }
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"channel uncertainty toolkit: absolute-variance values and lower bounds"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* validate = app.add_subcommand("validate", "check a channel file for completeness");
  validate->add_option("--channel", opt.channel_path, "channel JSON file")->required();

  CLI::App* uncertainty =
      app.add_subcommand("uncertainty", "channel uncertainty in a given state");
  uncertainty->add_option("--channel", opt.channel_path, "channel JSON file")->required();
  uncertainty->add_option("--state", opt.state_path, "state JSON file")->required();

  CLI::App* bound = app.add_subcommand("bound", "evaluate a lower bound and its gap");
  bound->add_option("--theorem", opt.theorem, "1, 2, 3, 4, or combined")->required();
  bound->add_option("--channel", opt.channel_paths, "channel JSON file (repeat per channel)")
      ->required();
  bound->add_option("--state", opt.state_path, "state JSON file")->required();
  bound->add_option("--M", opt.M, "weight M (theorems 3 and 4)");
  bound->add_option("--L", opt.L, "weight L (theorems 3 and 4)");
  bound->add_option("--variant", opt.variant, "LB1, LB2, or LB3 (theorems 3 and 4)");

  CLI::App* sweep = app.add_subcommand("sweep", "grid evaluation written as CSV");
  sweep->add_option("--preset", opt.preset, "fig1a, fig1b, fig1c, fig1d, fig2a, or fig2b");
  sweep->add_option("--theorem", opt.theorem, "1, 2, 3, 4, or combined (custom sweeps)");
  sweep->add_option("--channels", opt.channels_csv, "comma-separated kinds, e.g. AD,BF,PD");
  sweep->add_option("--sweep-var", opt.sweep_var, "theta or q (default theta)");
  sweep->add_option("--fixed", opt.fixed_value, "value of the non-swept variable");
  sweep->add_option("--M", opt.M, "weight M (theorems 3 and 4)");
  sweep->add_option("--L", opt.L, "weight L (theorems 3 and 4)");
  sweep->add_option("--variant", opt.variant, "LB1, LB2, or LB3 (theorems 3 and 4)");
  sweep->add_option("--grid", opt.grid, "grid points per axis");
  sweep->add_option("--out", opt.out_path, "output CSV path, '-' for stdout")->required();

  CLI::App* properties =
      app.add_subcommand("properties", "randomized identity and bound-validity checks");
  properties->add_option("--seed", opt.seed, "base seed (default 0)");
  properties->add_option("--trials", opt.trials, "instances per check (default 200)");
  properties->add_option("--replay", opt.replay_path, "failure record file to re-run");
  properties->add_option("--out", opt.out_path, "write failure records to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(opt);
    if (uncertainty->parsed()) return run_uncertainty(opt);
    if (bound->parsed()) {
      const bool have_params =
          bound->count("--M") > 0 || bound->count("--L") > 0 || bound->count("--variant") > 0;
      return run_bound(opt, have_params);
    }
    if (sweep->parsed()) {
      const int n_param_flags = static_cast<int>(sweep->count("--M") > 0) +
                                static_cast<int>(sweep->count("--L") > 0) +
                                static_cast<int>(sweep->count("--variant") > 0);
      if (n_param_flags != 0 && n_param_flags != 3)
        throw std::invalid_argument("sweep: give all of --M, --L, and --variant or none");
      return run_sweep(opt, n_param_flags == 3, sweep->count("--fixed") > 0);
    }
    if (properties->parsed()) return run_properties(opt);
  } catch (const chanvar::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chanvar::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chanvar::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
