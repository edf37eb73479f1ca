#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bailin/types.hpp"
#include "bailin/waterfall.hpp"

namespace bailin {

// Report dimensions: whole sample, per country, per status, or the cross
// product.
enum class Grouping { none, country, status, both };

std::optional<Grouping> parse_grouping(std::string_view s);

// Identifies one report group. Absent dimensions mean "all".
struct GroupKey {
    std::optional<std::string> country;
    std::optional<BankStatus> status;

    std::string label() const;

    bool operator==(const GroupKey&) const = default;
};

// Report order: country ascending, then nationalized < recapitalized <
// surviving; absent dimensions sort first.
bool operator<(const GroupKey& a, const GroupKey& b);

// Component-wise sums over one group's member banks at the base year.
// Amounts are integer EUR in practice, so double addition in a fixed
// member order is exact.
struct GroupAggregate {
    GroupKey key;
    std::size_t bank_count = 0;
    BalanceSheet balance;         // year = base_year, components summed
    Money total_impairments = 0;  // per-bank net losses (floored at zero), summed
};

enum class ScenarioKind { actual, stress };

// How group losses meet group capacities: `aggregate` pools both over the
// group before allocating (capacity surpluses of one bank cover another);
// `per_bank` allocates per institution and sums the outcomes.
enum class RunMode { aggregate, per_bank };

std::string_view to_string(RunMode m);  // "aggregate" / "per-bank"
std::optional<RunMode> parse_run_mode(std::string_view s);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::actual;
    double alpha = 0.0;           // stress only: loss as a fraction of total assets
    int impairment_start = 2008;  // actual only: inclusive year range
    int impairment_end = 2012;
    RunMode mode = RunMode::aggregate;

    // ValidationError on negative/non-finite alpha or start > end; alpha
    // above 1 is allowed but appends a warning.
    void validate(std::vector<std::string>* warnings = nullptr) const;

    // Flag grammar: "actual" or "stress:<alpha>", e.g. "stress:0.20".
    static ScenarioSpec parse(std::string_view flag);

    std::string label() const;  // "actual" / "stress:0.2"
};

// Parallel execution falls back to serial when built without OpenMP. Both
// paths produce bitwise-identical results: work splits over groups (and
// banks), each reduced in a fixed order.
enum class Execution { serial, parallel };

// One aggregate per non-empty group, in report order. Banks lacking the
// base-year balance sheet are skipped with a warning. Impairments are
// totalled over [impairment_start, impairment_end].
std::vector<GroupAggregate> aggregate(std::span<const BankRecord> records,
                                      Grouping by,
                                      int base_year,
                                      int impairment_start,
                                      int impairment_end,
                                      std::vector<std::string>* warnings = nullptr,
                                      Execution exec = Execution::parallel);

// Shares of total liabilities-and-equity by funding category; they sum to
// 1 within 1e-9. Throws ValidationError when the aggregate total is zero.
struct FundingMix {
    std::array<double, all_categories.size()> shares{};

    double share(Category c) const {
        return shares[static_cast<std::size_t>(c)];
    }

    // Senior plus subordinated debt, the usual combined reporting line.
    double long_term_debt() const {
        return share(Category::senior_debt) + share(Category::subordinated_debt);
    }
};

FundingMix funding_mix(const GroupAggregate& aggregate);

// total_impairments over base-year liabilities-and-equity. Throws
// ValidationError on a zero denominator.
double loss_ratio(const GroupAggregate& aggregate);

struct GroupOutcome {
    GroupKey key;
    std::size_t bank_count = 0;
    WaterfallResult result;

    bool operator==(const GroupOutcome&) const = default;
};

// Run one scenario per group, in report order. Actual losses are summed
// net impairments; stress losses are alpha x total assets. In per_bank
// mode class capacities, absorptions, residuals and losses are summed
// over members and fractions recomputed from the sums.
std::vector<GroupOutcome> run_scenario(std::span<const BankRecord> records,
                                       Grouping by,
                                       int base_year,
                                       const ScenarioSpec& spec,
                                       const SeniorityLadder& ladder,
                                       std::vector<std::string>* warnings = nullptr,
                                       Execution exec = Execution::parallel);

}  // namespace bailin
