#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bailin/analytics.hpp"
#include "bailin/seniority_ladder.hpp"

namespace bailin {

// The four report tables:
//   counts_impairments — bank counts and net impairment totals per group
//   funding_mix        — funding shares of liabilities-and-equity
//   bail_in            — waterfall outcome per group for one scenario
//   stress             — bail_in plus stress parameters and the
//                        stress-to-actual loss multiplier
enum class TableKind { counts_impairments, funding_mix, bail_in, stress };

enum class OutputFormat { csv, markdown, json };

std::optional<TableKind> parse_table(std::string_view s);
std::optional<OutputFormat> parse_format(std::string_view s);
std::string_view to_string(TableKind t);
std::string_view to_string(OutputFormat f);

// Everything a renderer needs for one table. `aggregates` and `outcomes`
// are in report order; outcomes are empty for the first two tables.
struct Report {
    TableKind table = TableKind::bail_in;
    int base_year = 2006;
    ScenarioSpec scenario;  // meaningful for bail_in / stress
    SeniorityLadder ladder;
    std::vector<GroupAggregate> aggregates;
    std::vector<GroupOutcome> outcomes;
};

// Deterministic bytes: stable column and row order, percentages rounded
// to one decimal place, EUR amounts and JSON values at full precision (a
// JSON record parses back to the exact WaterfallResult it came from).
std::string render(const Report& report, OutputFormat format);

}  // namespace bailin
