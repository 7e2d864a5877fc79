#pragma once

// Rendering of analysis results as text tables, CSV and JSON.
//
// JSON always carries raw fractions. Percent strings appear only in text
// output: rounded half-to-even to a fixed number of decimals with a "%"
// suffix. CSV numbers use the shortest form that parses back exactly.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "screening/bayes.hpp"
#include "screening/diagnostics.hpp"
#include "screening/protocols.hpp"
#include "screening/simulation.hpp"

namespace screening::report {

using Json = nlohmann::ordered_json;

/// Rounds to `decimals` places, ties to even, in the current scaled double.
double round_half_even(double value, int decimals);

/// "13.69%" for 0.136861 at 2 decimals; "undefined" for an empty value.
std::string percent(std::optional<double> fraction, int decimals = 2);

/// Fixed-point text with half-to-even rounding.
std::string fixed(double value, int decimals);

std::string render_posterior_table(const TestCharacteristics& test, const PosteriorReport& report);
Json posterior_json(const TestCharacteristics& test, const PosteriorReport& report);

/// Header `prior,ppv,npv`; undefined posteriors are written as empty fields.
void write_sweep_csv(std::ostream& out, const SweepCurve& curve);
SweepCurve read_sweep_csv(std::istream& in);

/// Indented text rendering. Counts use `decimals` places (4 when the
/// population is below 10, 2 otherwise, if left at -1). Zero-probability
/// branches are omitted.
std::string render_event_tree(const EventTree& tree, int decimals = -1);
Json event_tree_json(const EventTree& tree);

/// Header `replicate,tp,fp,fn,tn`, replicates numbered from 1.
void write_simulation_csv(std::ostream& out, const SimulationResult& result);
std::vector<ReplicateCounts> read_simulation_csv(std::istream& in);
Json simulation_json(const SimulationConfig& config, const SimulationResult& result);

/// Header `fold,T,D`; the last two rows are `mean` and `std`.
void write_protocol_csv(std::ostream& out, const ProtocolSummary& summary);
ProtocolSummary read_protocol_csv(std::istream& in, Protocol protocol);

/// Both protocols side by side: `fold,grouped_T,grouped_D,leaked_T,leaked_D`,
/// empty cells where one protocol has fewer folds, then `mean` and `std` rows.
void write_comparison_csv(std::ostream& out, const ProtocolSummary& grouped, const ProtocolSummary& leaked);

Json protocol_json(const ProtocolSummary& summary);
Json gap_json(const ProtocolGap& gap);
Json diagnostic_json(const DiagnosticReport& report);

}  // namespace screening::report
