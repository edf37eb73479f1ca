#include "bailin/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>

#include "bailin/errors.hpp"

namespace bailin {

namespace {

int status_order(BankStatus s) {
    switch (s) {
        case BankStatus::nationalized: return 0;
        case BankStatus::recapitalized: return 1;
        case BankStatus::surviving: return 2;
    }
    return 3;
}

GroupKey key_for(const BankRecord& record, Grouping by) {
    GroupKey key;
    if (by == Grouping::country || by == Grouping::both) key.country = record.country;
    if (by == Grouping::status || by == Grouping::both) key.status = record.status;
    return key;
}

struct Groups {
    std::vector<GroupKey> keys;                           // report order
    std::vector<std::vector<const BankRecord*>> members;  // sorted by bank_id
};

// Partition the records, dropping banks that cannot be analysed because
// the base-year balance sheet is missing. Members are ordered by bank_id
// so that later accumulation is independent of the input permutation.
Groups group_records(std::span<const BankRecord> records,
                     Grouping by,
                     int base_year,
                     std::vector<std::string>* warnings) {
    std::map<GroupKey, std::vector<const BankRecord*>> buckets;
    for (const auto& record : records) {
        if (!record.balance_for(base_year)) {
            if (warnings) {
                warnings->push_back("bank '" + record.bank_id + "' has no " +
                                    std::to_string(base_year) +
                                    " balance sheet and is excluded from analysis");
            }
            continue;
        }
        buckets[key_for(record, by)].push_back(&record);
    }
    Groups groups;
    groups.keys.reserve(buckets.size());
    groups.members.reserve(buckets.size());
    for (auto& [key, members] : buckets) {
        std::sort(members.begin(), members.end(),
                  [](const BankRecord* a, const BankRecord* b) { return a->bank_id < b->bank_id; });
        groups.keys.push_back(key);
        groups.members.push_back(std::move(members));
    }
    return groups;
}

// Serial in-order reduction of one group; the unit of parallel work.
GroupAggregate accumulate_group(const GroupKey& key,
                                const std::vector<const BankRecord*>& members,
                                int base_year,
                                int impairment_start,
                                int impairment_end) {
    GroupAggregate agg;
    agg.key = key;
    agg.bank_count = members.size();
    agg.balance.year = base_year;
    for (const auto* bank : members) {
        const BalanceSheet& sheet = *bank->balance_for(base_year);
        for (Category cat : all_categories) {
            agg.balance.amount(cat) += sheet.amount(cat);
        }
        agg.balance.total_assets += sheet.total_assets;
        agg.total_impairments +=
            compute_loss_actual(bank->impairments, impairment_start, impairment_end);
    }
    return agg;
}

Money bank_loss(const BankRecord& bank,
                const BalanceSheet& sheet,
                const ScenarioSpec& spec) {
    if (spec.kind == ScenarioKind::actual) {
        return compute_loss_actual(bank.impairments, spec.impairment_start, spec.impairment_end);
    }
    return compute_loss_stress(sheet, spec.alpha);
}

// Sum per-bank waterfalls (in bank_id order) into one group outcome;
// fractions are recomputed from the summed class totals.
WaterfallResult combine_results(const std::vector<Category>& order,
                                std::span<const WaterfallResult> results) {
    WaterfallResult combined;
    combined.classes.reserve(order.size());
    for (Category cat : order) {
        combined.classes.push_back({cat, 0, 0, 0});
    }
    for (const auto& result : results) {
        combined.loss += result.loss;
        combined.residual += result.residual;
        combined.dgs_shortfall += result.dgs_shortfall;
        for (std::size_t i = 0; i < order.size(); ++i) {
            combined.classes[i].capacity += result.classes[i].capacity;
            combined.classes[i].absorbed += result.classes[i].absorbed;
        }
    }
    for (auto& cls : combined.classes) {
        cls.fraction = cls.capacity > 0 ? cls.absorbed / cls.capacity : 0.0;
    }
    return combined;
}

}  // namespace

std::optional<Grouping> parse_grouping(std::string_view s) {
    if (s == "none") return Grouping::none;
    if (s == "country") return Grouping::country;
    if (s == "status") return Grouping::status;
    if (s == "both") return Grouping::both;
    return std::nullopt;
}

std::string GroupKey::label() const {
    if (!country && !status) return "all banks";
    if (country && status) return *country + " " + std::string(to_string(*status));
    if (country) return *country;
    return std::string(to_string(*status));
}

bool operator<(const GroupKey& a, const GroupKey& b) {
    if (a.country != b.country) {
        if (!a.country) return true;
        if (!b.country) return false;
        return *a.country < *b.country;
    }
    if (a.status != b.status) {
        if (!a.status) return true;
        if (!b.status) return false;
        return status_order(*a.status) < status_order(*b.status);
    }
    return false;
}

std::string_view to_string(RunMode m) {
    return m == RunMode::aggregate ? "aggregate" : "per-bank";
}

std::optional<RunMode> parse_run_mode(std::string_view s) {
    if (s == "aggregate") return RunMode::aggregate;
    if (s == "per-bank" || s == "per_bank") return RunMode::per_bank;
    return std::nullopt;
}

void ScenarioSpec::validate(std::vector<std::string>* warnings) const {
    if (kind == ScenarioKind::stress) {
        if (!std::isfinite(alpha) || alpha < 0) {
            throw ValidationError("stress alpha must be finite and non-negative");
        }
        if (alpha > 1.0 && warnings) {
            char buf[96];
            std::snprintf(buf, sizeof(buf),
                          "stress alpha %g exceeds 1.0: losses larger than total assets", alpha);
            warnings->push_back(buf);
        }
    } else if (impairment_start > impairment_end) {
        throw ValidationError("impairment year range start " + std::to_string(impairment_start) +
                              " exceeds end " + std::to_string(impairment_end));
    }
}

ScenarioSpec ScenarioSpec::parse(std::string_view flag) {
    ScenarioSpec spec;
    if (flag == "actual") {
        spec.kind = ScenarioKind::actual;
        return spec;
    }
    if (flag.starts_with("stress:")) {
        std::string value(flag.substr(7));
        try {
            std::size_t pos = 0;
            spec.alpha = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ConfigError("bad stress fraction '" + value +
                              "': expected e.g. stress:0.20");
        }
        spec.kind = ScenarioKind::stress;
        return spec;
    }
    throw ConfigError("unknown scenario '" + std::string(flag) +
                      "': expected 'actual' or 'stress:<alpha>'");
}

std::string ScenarioSpec::label() const {
    if (kind == ScenarioKind::actual) return "actual";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "stress:%g", alpha);
    return buf;
}

std::vector<GroupAggregate> aggregate(std::span<const BankRecord> records,
                                      Grouping by,
                                      int base_year,
                                      int impairment_start,
                                      int impairment_end,
                                      std::vector<std::string>* warnings,
                                      Execution exec) {
    if (impairment_start > impairment_end) {
        throw ValidationError("impairment year range start " + std::to_string(impairment_start) +
                              " exceeds end " + std::to_string(impairment_end));
    }
    const Groups groups = group_records(records, by, base_year, warnings);
    const auto n = static_cast<std::int64_t>(groups.keys.size());
    std::vector<GroupAggregate> out(groups.keys.size());

#ifdef _OPENMP
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i) {
            out[i] = accumulate_group(groups.keys[i], groups.members[i], base_year,
                                      impairment_start, impairment_end);
        }
        return out;
    }
#else
    (void)exec;
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = accumulate_group(groups.keys[i], groups.members[i], base_year,
                                  impairment_start, impairment_end);
    }
    return out;
}

FundingMix funding_mix(const GroupAggregate& aggregate) {
    const Money total = aggregate.balance.total_liabilities_and_equity();
    if (!(total > 0)) {
        throw ValidationError("funding mix undefined: group '" + aggregate.key.label() +
                              "' has zero liabilities");
    }
    FundingMix mix;
    for (Category cat : all_categories) {
        mix.shares[static_cast<std::size_t>(cat)] = aggregate.balance.amount(cat) / total;
    }
    return mix;
}

double loss_ratio(const GroupAggregate& aggregate) {
    const Money total = aggregate.balance.total_liabilities_and_equity();
    if (!(total > 0)) {
        throw ValidationError("loss ratio undefined: group '" + aggregate.key.label() +
                              "' has zero liabilities");
    }
    return aggregate.total_impairments / total;
}

std::vector<GroupOutcome> run_scenario(std::span<const BankRecord> records,
                                       Grouping by,
                                       int base_year,
                                       const ScenarioSpec& spec,
                                       const SeniorityLadder& ladder,
                                       std::vector<std::string>* warnings,
                                       Execution exec) {
    spec.validate(warnings);
    ladder.validate();
    const auto order = ladder.bail_in_order();
    const Groups groups = group_records(records, by, base_year, warnings);
    const auto n = static_cast<std::int64_t>(groups.keys.size());
    std::vector<GroupOutcome> out(groups.keys.size());

    if (spec.mode == RunMode::aggregate) {
        // pool capacities and losses over the group, then allocate once
        auto run_group = [&](std::int64_t i) {
            GroupAggregate agg = accumulate_group(groups.keys[i], groups.members[i], base_year,
                                                  spec.impairment_start, spec.impairment_end);
            const Money loss = spec.kind == ScenarioKind::actual
                                   ? agg.total_impairments
                                   : compute_loss_stress(agg.balance, spec.alpha);
            out[i].key = groups.keys[i];
            out[i].bank_count = agg.bank_count;
            out[i].result = allocate_loss(loss, bail_in_capacities(agg.balance, ladder), ladder);
        };
#ifdef _OPENMP
        if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t i = 0; i < n; ++i) run_group(i);
            return out;
        }
#else
        (void)exec;
#endif
        for (std::int64_t i = 0; i < n; ++i) run_group(i);
        return out;
    }

    // per-bank mode: allocate per institution, then sum outcomes per
    // group. Banks are flattened into slots so the parallel loop writes
    // disjoint elements and the ordered combine stays deterministic.
    std::vector<std::size_t> offset(groups.keys.size() + 1, 0);
    for (std::size_t g = 0; g < groups.members.size(); ++g) {
        offset[g + 1] = offset[g] + groups.members[g].size();
    }
    std::vector<WaterfallResult> slots(offset.back());
    const auto total_banks = static_cast<std::int64_t>(slots.size());

    std::vector<const BankRecord*> flat;
    flat.reserve(slots.size());
    for (const auto& members : groups.members) {
        flat.insert(flat.end(), members.begin(), members.end());
    }

    auto run_bank = [&](std::int64_t i) {
        const BankRecord& bank = *flat[static_cast<std::size_t>(i)];
        const BalanceSheet& sheet = *bank.balance_for(base_year);
        slots[static_cast<std::size_t>(i)] =
            allocate_loss(bank_loss(bank, sheet, spec), bail_in_capacities(sheet, ladder), ladder);
    };
#ifdef _OPENMP
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < total_banks; ++i) run_bank(i);
    } else {
        for (std::int64_t i = 0; i < total_banks; ++i) run_bank(i);
    }
#else
    (void)exec;
    for (std::int64_t i = 0; i < total_banks; ++i) run_bank(i);
#endif

    for (std::size_t g = 0; g < groups.keys.size(); ++g) {
        out[g].key = groups.keys[g];
        out[g].bank_count = groups.members[g].size();
        out[g].result = combine_results(
            order, std::span<const WaterfallResult>(slots.data() + offset[g],
                                                    offset[g + 1] - offset[g]));
    }
    return out;
}

}  // namespace bailin
