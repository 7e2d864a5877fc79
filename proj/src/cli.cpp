#include "screening/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "screening/bayes.hpp"
#include "screening/classifier.hpp"
#include "screening/dataset.hpp"
#include "screening/diagnostics.hpp"
#include "screening/errors.hpp"
#include "screening/protocols.hpp"
#include "screening/report.hpp"
#include "screening/scoring.hpp"
#include "screening/simulation.hpp"
#include "screening/svg.hpp"

namespace screening::cli {

namespace {

namespace fs = std::filesystem;
using report::Json;

// Default test: the ADDS validation figures (73.66% / 75.55%).
constexpr double kDefaultSensitivity = 0.7366;
constexpr double kDefaultSpecificity = 0.7555;

struct RunConfig {
  std::string subcommand;
  double sensitivity = kDefaultSensitivity;
  double specificity = kDefaultSpecificity;
  std::optional<double> prior;
  double population = 1000;
  double grid_min = 1e-5;
  double grid_max = 0.5;
  int grid_points = 200;
  double highlight_prior = 0.05;
  double target_ppv = 0.5;
  std::int64_t replicates = 1;
  std::uint64_t seed = 20190601;
  DatasetSpec dataset_spec;
  Hyperparams hyperparams;
  ScoringConfig scoring;
  ProtocolOptions protocol;
  double leakage_threshold = 5.0;
  std::string out_dir = ".";
  std::optional<std::string> dataset_csv;
  bool export_dataset = false;
  int holdout = 2;
  int threads = 0;
};

// ---------------------------------------------------------------------------
// JSON config ingestion. Unknown keys and wrong types are configuration
// errors that name the offending field.

template <typename T>
T get_field(const Json& object, const std::string& key, const std::string& path) {
  try {
    return object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(path + key, "has the wrong type");
  }
}

void check_keys(const Json& object, const std::set<std::string>& allowed, const std::string& path) {
  if (!object.is_object()) throw InvalidArgument(path.empty() ? "config" : path, "must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key)) throw InvalidArgument(path + key, "unknown configuration key");
  }
}

template <typename T>
void maybe(const Json& object, const std::string& key, const std::string& path, T& target) {
  if (object.contains(key)) target = get_field<T>(object, key, path);
}

void apply_json(RunConfig& c, const Json& j) {
  check_keys(j,
             {"test", "prior", "population", "grid", "replicates", "seed", "dataset_spec", "hyperparams",
              "scoring", "target_ppv", "leakage_threshold", "holdout", "highlight_prior"},
             "");
  if (j.contains("test")) {
    const auto& t = j["test"];
    check_keys(t, {"sensitivity", "specificity"}, "test.");
    maybe(t, "sensitivity", "test.", c.sensitivity);
    maybe(t, "specificity", "test.", c.specificity);
  }
  if (j.contains("prior")) c.prior = get_field<double>(j, "prior", "");
  maybe(j, "population", "", c.population);
  maybe(j, "replicates", "", c.replicates);
  maybe(j, "seed", "", c.seed);
  maybe(j, "target_ppv", "", c.target_ppv);
  maybe(j, "leakage_threshold", "", c.leakage_threshold);
  maybe(j, "holdout", "", c.holdout);
  maybe(j, "highlight_prior", "", c.highlight_prior);
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, {"min", "max", "points"}, "grid.");
    maybe(g, "min", "grid.", c.grid_min);
    maybe(g, "max", "grid.", c.grid_max);
    maybe(g, "points", "grid.", c.grid_points);
  }
  if (j.contains("dataset_spec")) {
    const auto& d = j["dataset_spec"];
    const std::string p = "dataset_spec.";
    check_keys(d,
               {"n_participants", "n_deceptive", "n_features", "n_questions", "target_total_vectors",
                "person_effect_scale", "class_effect_scale", "noise_scale", "seed"},
               p);
    auto& s = c.dataset_spec;
    maybe(d, "n_participants", p, s.n_participants);
    maybe(d, "n_deceptive", p, s.n_deceptive);
    maybe(d, "n_features", p, s.n_features);
    maybe(d, "n_questions", p, s.n_questions);
    maybe(d, "target_total_vectors", p, s.target_total_vectors);
    maybe(d, "person_effect_scale", p, s.person_effect_scale);
    maybe(d, "class_effect_scale", p, s.class_effect_scale);
    maybe(d, "noise_scale", p, s.noise_scale);
    maybe(d, "seed", p, s.seed);
  }
  if (j.contains("hyperparams")) {
    const auto& h = j["hyperparams"];
    const std::string p = "hyperparams.";
    check_keys(h,
               {"hidden_width", "learning_rate", "momentum", "epochs", "l2", "seed", "grouped_folds",
                "leaked_folds"},
               p);
    maybe(h, "hidden_width", p, c.hyperparams.hidden_width);
    maybe(h, "learning_rate", p, c.hyperparams.learning_rate);
    maybe(h, "momentum", p, c.hyperparams.momentum);
    maybe(h, "epochs", p, c.hyperparams.epochs);
    maybe(h, "l2", p, c.hyperparams.l2);
    maybe(h, "seed", p, c.hyperparams.seed);
    maybe(h, "grouped_folds", p, c.protocol.grouped_folds);
    maybe(h, "leaked_folds", p, c.protocol.leaked_folds);
  }
  if (j.contains("scoring")) {
    const auto& s = j["scoring"];
    check_keys(s, {"theta_lo", "theta_hi", "decision_threshold"}, "scoring.");
    maybe(s, "theta_lo", "scoring.", c.scoring.theta_lo);
    maybe(s, "theta_hi", "scoring.", c.scoring.theta_hi);
    maybe(s, "decision_threshold", "scoring.", c.scoring.decision_threshold);
  }
}

Json effective_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["test"] = {{"sensitivity", c.sensitivity}, {"specificity", c.specificity}};
  j["prior"] = c.prior ? Json(*c.prior) : Json(nullptr);
  j["population"] = c.population;
  j["grid"] = {{"min", c.grid_min}, {"max", c.grid_max}, {"points", c.grid_points}};
  j["highlight_prior"] = c.highlight_prior;
  j["target_ppv"] = c.target_ppv;
  j["replicates"] = c.replicates;
  j["seed"] = c.seed;
  const auto& s = c.dataset_spec;
  j["dataset_spec"] = {{"n_participants", s.n_participants},
                       {"n_deceptive", s.n_deceptive},
                       {"n_features", s.n_features},
                       {"n_questions", s.n_questions},
                       {"target_total_vectors", s.target_total_vectors},
                       {"person_effect_scale", s.person_effect_scale},
                       {"class_effect_scale", s.class_effect_scale},
                       {"noise_scale", s.noise_scale},
                       {"seed", s.seed}};
  const auto& h = c.hyperparams;
  j["hyperparams"] = {{"hidden_width", h.hidden_width}, {"learning_rate", h.learning_rate},
                      {"momentum", h.momentum},         {"epochs", h.epochs},
                      {"l2", h.l2},                     {"seed", h.seed},
                      {"grouped_folds", c.protocol.grouped_folds}, {"leaked_folds", c.protocol.leaked_folds}};
  j["scoring"] = {{"theta_lo", c.scoring.theta_lo},
                  {"theta_hi", c.scoring.theta_hi},
                  {"decision_threshold", c.scoring.decision_threshold}};
  j["leakage_threshold"] = c.leakage_threshold;
  j["holdout"] = c.holdout;
  if (c.dataset_csv) j["dataset"] = *c.dataset_csv;
  return j;
}

// ---------------------------------------------------------------------------
// Output helpers.

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path.string());
  file << content;
  if (!file) throw Error("failed writing " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

template <typename Writer>
std::string to_string_with(Writer&& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

double require_prior(const RunConfig& c) {
  if (!c.prior) throw InvalidArgument("prior", "is required (--prior or \"prior\" in the config)");
  return *c.prior;
}

SyntheticDataset load_or_generate(const RunConfig& c) {
  if (c.dataset_csv) {
    std::ifstream in(*c.dataset_csv);
    if (!in) throw InvalidArgument("dataset", "cannot open " + *c.dataset_csv);
    return read_dataset_csv(in);
  }
  return generate_synthetic_dataset(c.dataset_spec);
}

// ---------------------------------------------------------------------------
// Subcommands.

void run_posterior(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  const TestCharacteristics test(c.sensitivity, c.specificity);
  const Prevalence prior(require_prior(c));
  const auto rep = posterior_report(test, prior, c.population);
  out << report::render_posterior_table(test, rep);

  Json j = report::posterior_json(test, rep);
  j["target_ppv"] = c.target_ppv;
  try {
    const auto breakeven = breakeven_prior(test, c.target_ppv);
    out << "Break-even prior for PPV " << report::percent(c.target_ppv) << ": "
        << report::percent(breakeven.value()) << "\n";
    j["breakeven_prior"] = breakeven.value();
  } catch (const Unreachable& e) {
    out << "Break-even prior: " << e.what() << "\n";
    j["breakeven_prior"] = nullptr;
  } catch (const InvalidArgument& e) {
    out << "Break-even prior: not defined (" << e.what() << ")\n";
    j["breakeven_prior"] = nullptr;
  }
  write_file(out_dir / "posterior.json", dump(j));
}

void run_sweep(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  const TestCharacteristics test(c.sensitivity, c.specificity);
  if (c.grid_points < 1) throw InvalidArgument("grid_points", "must be at least 1");
  const auto grid = log_grid(c.grid_min, c.grid_max, static_cast<std::size_t>(c.grid_points));
  const auto curve = prevalence_sweep(test, grid);
  write_file(out_dir / "sweep.csv", to_string_with([&](std::ostream& s) { report::write_sweep_csv(s, curve); }));
  write_file(out_dir / "sweep.svg", svg::sweep_svg(curve, c.highlight_prior));
  out << "Wrote " << curve.points.size() << " sweep points to " << (out_dir / "sweep.csv").string() << "\n";
}

void run_tree(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  const TestCharacteristics test(c.sensitivity, c.specificity);
  const auto tree = build_event_tree(test, Prevalence(require_prior(c)), c.population);
  out << report::render_event_tree(tree);
  write_file(out_dir / "tree.svg", svg::event_tree_svg(tree));
  write_file(out_dir / "tree.json", dump(report::event_tree_json(tree)));
}

void run_simulate(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  SimulationConfig config;
  config.test = TestCharacteristics(c.sensitivity, c.specificity);
  config.prior = Prevalence(require_prior(c));
  if (c.population != std::floor(c.population)) throw InvalidArgument("population", "must be a whole number");
  config.population_size = static_cast<std::int64_t>(c.population);
  config.replicates = c.replicates;
  config.master_seed = c.seed;
  config.threads = static_cast<std::size_t>(std::max(0, c.threads));
  config.validate();
  const auto result = simulate_screening(config);
  write_file(out_dir / "simulation.csv",
             to_string_with([&](std::ostream& s) { report::write_simulation_csv(s, result); }));
  write_file(out_dir / "simulation.json", dump(report::simulation_json(config, result)));
  out << "Simulated " << config.replicates << " replicate(s) of " << config.population_size << " persons\n";
  out << "Empirical PPV " << report::percent(result.ppv ? std::optional(result.ppv->estimate) : std::nullopt)
      << ", NPV " << report::percent(result.npv ? std::optional(result.npv->estimate) : std::nullopt)
      << ", mean referrals " << report::fixed(result.mean_referrals, 1) << "\n";
}

void run_replicate(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  const auto dataset = load_or_generate(c);
  if (c.export_dataset) {
    write_file(out_dir / "dataset.csv", to_string_with([&](std::ostream& s) { write_dataset_csv(s, dataset); }));
  }
  ProtocolOptions options = c.protocol;
  options.threads = static_cast<std::size_t>(std::max(0, c.threads));
  const auto grouped = evaluate_grouped_loo(dataset, c.hyperparams, c.scoring, options);
  const auto leaked = evaluate_leaked(dataset, c.hyperparams, c.scoring, options);
  const auto gap = compare_protocols(grouped, leaked, c.leakage_threshold);

  write_file(out_dir / "grouped_summary.csv",
             to_string_with([&](std::ostream& s) { report::write_protocol_csv(s, grouped); }));
  write_file(out_dir / "leaked_summary.csv",
             to_string_with([&](std::ostream& s) { report::write_protocol_csv(s, leaked); }));
  write_file(out_dir / "comparison.csv",
             to_string_with([&](std::ostream& s) { report::write_comparison_csv(s, grouped, leaked); }));
  write_file(out_dir / "gap.json", dump(report::gap_json(gap)));
  write_file(out_dir / "protocols.json",
             dump(Json{{"grouped", report::protocol_json(grouped)}, {"leaked", report::protocol_json(leaked)}}));

  out << "Segments: " << dataset.size() << ", participants: " << dataset.participants.size() << "\n";
  out << "                 T mean   D mean   T std   D std\n";
  char row[128];
  for (const auto* s : {&grouped, &leaked}) {
    std::snprintf(row, sizeof row, "%-15s %7s  %7s  %6s  %6s\n",
                  s->protocol == Protocol::GroupedLeaveOnePairOut ? "unseen persons" : "leaked split",
                  report::fixed(s->truthful_mean, 2).c_str(), report::fixed(s->deceptive_mean, 2).c_str(),
                  report::fixed(s->truthful_std, 2).c_str(), report::fixed(s->deceptive_std, 2).c_str());
    out << row;
  }
  out << "Leakage flag: " << (gap.leakage_flag ? "true" : "false") << " (inflation T "
      << report::fixed(gap.truthful_inflation, 2) << "pp, D " << report::fixed(gap.deceptive_inflation, 2)
      << "pp)\n";
}

void run_diagnose(const RunConfig& c, const fs::path& out_dir, std::ostream& out) {
  const auto dataset = load_or_generate(c);
  if (c.holdout < 0) throw InvalidArgument("holdout", "must be non-negative");
  const auto rep = diagnose(dataset, static_cast<std::size_t>(c.holdout));
  write_file(out_dir / "diagnostics.json", dump(report::diagnostic_json(rep)));
  out << "cod_flag: " << (rep.cod_flag ? "true" : "false") << " (" << rep.n_groups << " training groups, "
      << rep.n_features << " features)\n";
  out << "ICC: " << report::fixed(rep.icc, 4) << ", effective sample size: "
      << report::fixed(rep.effective_sample_size, 2) << "\n";
  for (const auto& note : rep.notes) out << "- " << note << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Screening audit: Bayesian screening analysis and a synthetic leakage replica"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  RunConfig c;
  std::string config_path;
  double prior_flag = 0.0;

  auto* o_sens = app.add_option("--sensitivity", c.sensitivity, "P(+ | Lie) as a fraction");
  auto* o_spec = app.add_option("--specificity", c.specificity, "P(- | No-lie) as a fraction");
  auto* o_prior = app.add_option("--prior", prior_flag, "Prevalence of liars as a fraction");
  auto* o_pop = app.add_option("--population", c.population, "Population size");
  auto* o_gmin = app.add_option("--grid-min", c.grid_min, "Smallest prior of the sweep grid");
  auto* o_gmax = app.add_option("--grid-max", c.grid_max, "Largest prior of the sweep grid");
  auto* o_gpts = app.add_option("--grid-points", c.grid_points, "Number of log-spaced sweep points");
  auto* o_reps = app.add_option("--replicates", c.replicates, "Monte Carlo replicates");
  auto* o_seed = app.add_option("--seed", c.seed, "Master seed");
  auto* o_target = app.add_option("--target-ppv", c.target_ppv, "PPV target for the break-even prior");
  auto* o_holdout = app.add_option("--holdout", c.holdout, "Groups reserved for testing (diagnose)");
  std::string out_dir_flag;
  std::string dataset_flag;
  auto* o_out = app.add_option("--out", out_dir_flag, "Output directory");
  auto* o_dataset = app.add_option("--dataset", dataset_flag, "Dataset CSV instead of a generated one");
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--threads", c.threads, "Worker threads (0 = all cores); never changes results");
  app.add_flag("--export-dataset", c.export_dataset, "Also write the dataset CSV (replicate)");

  for (const char* name : {"posterior", "sweep", "tree", "simulate", "replicate", "diagnose"}) {
    app.add_subcommand(name);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    c.subcommand = app.get_subcommands().front()->get_name();

    // Precedence: defaults < config file < flags. Flag values are captured
    // first and reapplied over the file.
    const RunConfig from_flags = c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InvalidArgument("config", "cannot open " + config_path);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("config", std::string("invalid JSON: ") + e.what());
      }
      apply_json(c, j);
    }
    if (o_sens->count()) c.sensitivity = from_flags.sensitivity;
    if (o_spec->count()) c.specificity = from_flags.specificity;
    if (o_prior->count()) c.prior = prior_flag;
    if (o_pop->count()) c.population = from_flags.population;
    if (o_gmin->count()) c.grid_min = from_flags.grid_min;
    if (o_gmax->count()) c.grid_max = from_flags.grid_max;
    if (o_gpts->count()) c.grid_points = from_flags.grid_points;
    if (o_reps->count()) c.replicates = from_flags.replicates;
    if (o_target->count()) c.target_ppv = from_flags.target_ppv;
    if (o_holdout->count()) c.holdout = from_flags.holdout;
    if (o_seed->count()) {
      c.seed = from_flags.seed;
      c.dataset_spec.seed = from_flags.seed;
      c.hyperparams.seed = from_flags.seed;
    }
    if (o_out->count()) c.out_dir = out_dir_flag;
    if (o_dataset->count()) c.dataset_csv = dataset_flag;

    // Validate everything the subcommand touches before doing any work.
    TestCharacteristics(c.sensitivity, c.specificity);
    if (c.prior) Prevalence{*c.prior};
    if (c.subcommand == "replicate" || c.subcommand == "diagnose") {
      if (!c.dataset_csv) c.dataset_spec.validate();
      c.hyperparams.validate();
      c.scoring.validate();
      c.protocol.validate();
    }

    const fs::path out_dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw InvalidArgument("out", "cannot create " + out_dir.string() + ": " + ec.message());

    if (c.subcommand == "posterior") {
      run_posterior(c, out_dir, out);
    } else if (c.subcommand == "sweep") {
      run_sweep(c, out_dir, out);
    } else if (c.subcommand == "tree") {
      run_tree(c, out_dir, out);
    } else if (c.subcommand == "simulate") {
      run_simulate(c, out_dir, out);
    } else if (c.subcommand == "replicate") {
      run_replicate(c, out_dir, out);
    } else {
      run_diagnose(c, out_dir, out);
    }
    write_file(out_dir / "effective_config.json", dump(effective_json(c)));
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kSuccess;
}

}  // namespace screening::cli
