#include "screening/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "screening/csv.hpp"
#include "screening/errors.hpp"

namespace screening::report {

namespace {

Json optional_number(std::optional<double> value) {
  if (value) return *value;
  return nullptr;
}

std::string optional_csv(std::optional<double> value) {
  return value ? csv::format_number(*value) : std::string();
}

std::optional<double> parse_optional(std::string_view field, const char* name) {
  if (field.empty()) return std::nullopt;
  return csv::parse_double(field, name);
}

std::string read_header(std::istream& in, const char* expected) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("csv", "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) {
    throw InvalidArgument("csv", "expected header '" + std::string(expected) + "', got '" + line + "'");
  }
  return line;
}

}  // namespace

double round_half_even(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // nearbyint honours the default rounding mode, round-to-nearest-even.
  return std::nearbyint(value * scale) / scale;
}

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, round_half_even(value, decimals));
  return buffer;
}

std::string percent(std::optional<double> fraction, int decimals) {
  if (!fraction) return "undefined";
  return fixed(*fraction * 100.0, decimals) + "%";
}

std::string render_posterior_table(const TestCharacteristics& test, const PosteriorReport& report) {
  std::ostringstream out;
  const auto& j = report.joint;
  const auto& c = report.expected_counts;
  const std::string pos = test.label_positive();
  const std::string neg = test.label_negative();

  out << "Test: sensitivity " << percent(test.sensitivity()) << ", specificity "
      << percent(test.specificity()) << "\n";
  out << "Prior P(" << pos << ") = " << percent(report.prior.value(), 4) << ", population "
      << fixed(report.population_size, 0) << "\n\n";

  char row[160];
  out << "Joint outcome matrix\n";
  std::snprintf(row, sizeof row, "  %-14s %16s %16s\n", "", pos.c_str(), neg.c_str());
  out << row;
  std::snprintf(row, sizeof row, "  %-14s %16s %16s\n", "Test positive", fixed(j.tp, 4).c_str(),
                fixed(j.fp, 4).c_str());
  out << row;
  std::snprintf(row, sizeof row, "  %-14s %16s %16s\n", "Test negative", fixed(j.fn, 4).c_str(),
                fixed(j.tn, 4).c_str());
  out << row << "\n";

  out << "Expected counts\n";
  std::snprintf(row, sizeof row, "  TP %-12s FP %-12s FN %-12s TN %s\n", fixed(c.tp, 1).c_str(),
                fixed(c.fp, 1).c_str(), fixed(c.fn, 1).c_str(), fixed(c.tn, 1).c_str());
  out << row << "\n";

  out << "PPV  P(" << pos << " | +) = " << percent(report.ppv) << "\n";
  out << "NPV  P(" << neg << " | -) = " << percent(report.npv) << "\n";
  out << "P(+) = " << percent(report.p_positive) << "\n";
  out << "Referrals to interview: " << fixed(c.referrals(), 1) << "\n";
  return out.str();
}

Json posterior_json(const TestCharacteristics& test, const PosteriorReport& report) {
  Json out;
  out["test"] = {{"sensitivity", test.sensitivity()}, {"specificity", test.specificity()}};
  out["prior"] = report.prior.value();
  out["population"] = report.population_size;
  out["joint"] = {{"tp", report.joint.tp}, {"fp", report.joint.fp}, {"fn", report.joint.fn}, {"tn", report.joint.tn}};
  out["ppv"] = optional_number(report.ppv);
  out["npv"] = optional_number(report.npv);
  out["p_positive"] = report.p_positive;
  const auto& c = report.expected_counts;
  out["expected_counts"] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
  out["referrals"] = c.referrals();
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
  out << "prior,ppv,npv\n";
  for (const auto& p : curve.points) {
    out << csv::format_number(p.prior) << ',' << optional_csv(p.ppv) << ',' << optional_csv(p.npv) << '\n';
  }
}

SweepCurve read_sweep_csv(std::istream& in) {
  read_header(in, "prior,ppv,npv");
  SweepCurve curve;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 3) throw InvalidArgument("csv", "sweep rows have 3 fields");
    curve.points.push_back({csv::parse_double(f[0], "prior"), parse_optional(f[1], "ppv"),
                            parse_optional(f[2], "npv")});
  }
  return curve;
}

std::string render_event_tree(const EventTree& tree, int decimals) {
  if (decimals < 0) decimals = tree.population_size < 10.0 ? 4 : 2;
  std::ostringstream out;
  out << tree.root.label << " (" << fixed(tree.root.expected_count, decimals) << ")\n";
  const auto& branches = tree.root.children;
  std::vector<const EventNode*> shown;
  for (const auto& b : branches) {
    if (b.probability > 0.0) shown.push_back(&b);
  }
  for (std::size_t i = 0; i < shown.size(); ++i) {
    const auto& b = *shown[i];
    const bool last_branch = i + 1 == shown.size();
    out << (last_branch ? "`-- " : "|-- ") << b.label << "  p=" << fixed(b.probability, 4) << "  n="
        << fixed(b.expected_count, decimals) << "\n";
    for (std::size_t k = 0; k < b.children.size(); ++k) {
      const auto& leaf = b.children[k];
      const bool last_leaf = k + 1 == b.children.size();
      out << (last_branch ? "    " : "|   ") << (last_leaf ? "`-- " : "|-- ") << "test " << leaf.label
          << " [" << outcome_name(*leaf.outcome) << "]  p=" << fixed(leaf.probability, 4)
          << "  joint=" << fixed(leaf.joint_probability, 4) << "  n=" << fixed(leaf.expected_count, decimals)
          << "  posterior=" << percent(leaf.posterior) << "\n";
    }
  }
  return out.str();
}

namespace {

Json node_json(const EventNode& node) {
  Json out;
  out["label"] = node.label;
  out["probability"] = node.probability;
  out["joint_probability"] = node.joint_probability;
  out["expected_count"] = node.expected_count;
  if (node.outcome) {
    out["outcome"] = outcome_name(*node.outcome);
    out["posterior"] = optional_number(node.posterior);
  }
  if (!node.children.empty()) {
    out["children"] = Json::array();
    for (const auto& c : node.children) out["children"].push_back(node_json(c));
  }
  return out;
}

}  // namespace

Json event_tree_json(const EventTree& tree) {
  Json out;
  out["population"] = tree.population_size;
  out["root"] = node_json(tree.root);
  return out;
}

void write_simulation_csv(std::ostream& out, const SimulationResult& result) {
  out << "replicate,tp,fp,fn,tn\n";
  for (std::size_t i = 0; i < result.replicates.size(); ++i) {
    const auto& r = result.replicates[i];
    out << i + 1 << ',' << r.tp << ',' << r.fp << ',' << r.fn << ',' << r.tn << '\n';
  }
}

std::vector<ReplicateCounts> read_simulation_csv(std::istream& in) {
  read_header(in, "replicate,tp,fp,fn,tn");
  std::vector<ReplicateCounts> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 5) throw InvalidArgument("csv", "simulation rows have 5 fields");
    out.push_back({csv::parse_int(f[1], "tp"), csv::parse_int(f[2], "fp"), csv::parse_int(f[3], "fn"),
                   csv::parse_int(f[4], "tn")});
  }
  return out;
}

Json simulation_json(const SimulationConfig& config, const SimulationResult& result) {
  auto proportion = [](const std::optional<Proportion>& p) -> Json {
    if (!p) return nullptr;
    return {{"estimate", p->estimate}, {"ci95_lower", p->lower}, {"ci95_upper", p->upper},
            {"denominator", p->denominator}};
  };
  const auto analytic = joint_matrix(config.test, config.prior);
  Json out;
  out["test"] = {{"sensitivity", config.test.sensitivity()}, {"specificity", config.test.specificity()}};
  out["prior"] = config.prior.value();
  out["population"] = config.population_size;
  out["replicates"] = config.replicates;
  out["seed"] = config.master_seed;
  out["rng"] = "mt19937_64 streams seeded by splitmix64(master, replicate)";
  out["mean_counts"] = {{"tp", result.mean_counts.tp}, {"fp", result.mean_counts.fp},
                        {"fn", result.mean_counts.fn}, {"tn", result.mean_counts.tn}};
  out["empirical_joint"] = {{"tp", result.empirical_joint.tp}, {"fp", result.empirical_joint.fp},
                            {"fn", result.empirical_joint.fn}, {"tn", result.empirical_joint.tn}};
  out["analytic_joint"] = {{"tp", analytic.tp}, {"fp", analytic.fp}, {"fn", analytic.fn}, {"tn", analytic.tn}};
  out["ppv"] = proportion(result.ppv);
  out["npv"] = proportion(result.npv);
  out["mean_referrals"] = result.mean_referrals;
  out["expected_referrals"] =
      secondary_screening_load(config.test, config.prior, static_cast<double>(config.population_size));
  return out;
}

void write_protocol_csv(std::ostream& out, const ProtocolSummary& summary) {
  out << "fold,T,D\n";
  for (const auto& f : summary.folds) {
    out << f.fold << ',' << csv::format_number(f.truthful_accuracy) << ','
        << csv::format_number(f.deceptive_accuracy) << '\n';
  }
  out << "mean," << csv::format_number(summary.truthful_mean) << ','
      << csv::format_number(summary.deceptive_mean) << '\n';
  out << "std," << csv::format_number(summary.truthful_std) << ','
      << csv::format_number(summary.deceptive_std) << '\n';
}

ProtocolSummary read_protocol_csv(std::istream& in, Protocol protocol) {
  read_header(in, "fold,T,D");
  ProtocolSummary summary;
  summary.protocol = protocol;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 3) throw InvalidArgument("csv", "protocol rows have 3 fields");
    if (f[0] == "mean" || f[0] == "std") continue;  // recomputed from folds
    FoldResult fold;
    fold.fold = static_cast<int>(csv::parse_int(f[0], "fold"));
    fold.truthful_accuracy = csv::parse_double(f[1], "T");
    fold.deceptive_accuracy = csv::parse_double(f[2], "D");
    summary.folds.push_back(fold);
  }
  summary.summarise();
  return summary;
}

void write_comparison_csv(std::ostream& out, const ProtocolSummary& grouped, const ProtocolSummary& leaked) {
  out << "fold,grouped_T,grouped_D,leaked_T,leaked_D\n";
  const std::size_t rows = std::max(grouped.folds.size(), leaked.folds.size());
  for (std::size_t i = 0; i < rows; ++i) {
    out << i + 1;
    for (const auto* s : {&grouped, &leaked}) {
      if (i < s->folds.size()) {
        out << ',' << csv::format_number(s->folds[i].truthful_accuracy) << ','
            << csv::format_number(s->folds[i].deceptive_accuracy);
      } else {
        out << ",,";
      }
    }
    out << '\n';
  }
  out << "mean," << csv::format_number(grouped.truthful_mean) << ',' << csv::format_number(grouped.deceptive_mean)
      << ',' << csv::format_number(leaked.truthful_mean) << ',' << csv::format_number(leaked.deceptive_mean) << '\n';
  out << "std," << csv::format_number(grouped.truthful_std) << ',' << csv::format_number(grouped.deceptive_std)
      << ',' << csv::format_number(leaked.truthful_std) << ',' << csv::format_number(leaked.deceptive_std) << '\n';
}

Json protocol_json(const ProtocolSummary& summary) {
  Json out;
  out["protocol"] = protocol_name(summary.protocol);
  out["folds"] = Json::array();
  for (const auto& f : summary.folds) {
    Json fold;
    fold["fold"] = f.fold;
    fold["truthful_accuracy"] = f.truthful_accuracy;
    fold["deceptive_accuracy"] = f.deceptive_accuracy;
    fold["truthful_questions"] = f.truthful_questions;
    fold["deceptive_questions"] = f.deceptive_questions;
    fold["undecided_questions"] = f.undecided_questions;
    fold["final_training_loss"] = f.final_training_loss;
    if (!f.held_out.empty()) {
      fold["held_out"] = f.held_out;
      Json verdicts = Json::array();
      for (const auto& v : f.verdicts) {
        verdicts.push_back(v ? Json(label_name(*v)) : Json(nullptr));
      }
      fold["verdicts"] = verdicts;
      fold["verdict_ties"] = f.verdict_ties;
    }
    out["folds"].push_back(fold);
  }
  out["truthful_mean"] = summary.truthful_mean;
  out["deceptive_mean"] = summary.deceptive_mean;
  out["truthful_std"] = summary.truthful_std;
  out["deceptive_std"] = summary.deceptive_std;
  return out;
}

Json gap_json(const ProtocolGap& gap) {
  Json out;
  out["truthful_inflation_pp"] = gap.truthful_inflation;
  out["deceptive_inflation_pp"] = gap.deceptive_inflation;
  out["truthful_std_change_pp"] = gap.truthful_std_change;
  out["deceptive_std_change_pp"] = gap.deceptive_std_change;
  out["threshold_pp"] = gap.threshold;
  out["leakage_flag"] = gap.leakage_flag;
  return out;
}

Json diagnostic_json(const DiagnosticReport& report) {
  Json out;
  out["n_groups"] = report.n_groups;
  out["n_features"] = report.n_features;
  out["cod_flag"] = report.cod_flag;
  out["group_feature_ratio"] = report.group_feature_ratio;
  out["icc"] = report.icc;
  out["effective_sample_size"] = report.effective_sample_size;
  out["total_segments"] = report.total_segments;
  out["total_groups"] = report.total_groups;
  out["notes"] = report.notes;
  return out;
}

}  // namespace screening::report
