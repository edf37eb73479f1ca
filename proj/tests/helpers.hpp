#pragma once

// Shared test utilities: tolerance rules, the independent allocation
// oracle, random instance generators, and cached fixture loading.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bailin/analytics.hpp"
#include "bailin/dataset.hpp"
#include "bailin/seniority_ladder.hpp"
#include "bailin/types.hpp"
#include "bailin/waterfall.hpp"

namespace testutil {

using namespace bailin;

// Absolute tolerance of 1e-6 per million EUR of magnitude.
inline double money_tol(double magnitude) {
    return 1e-6 * std::max(1.0, std::abs(magnitude) / 1e6);
}

inline std::vector<ClassCapacity> standard_caps(Money equity,
                                                Money sub,
                                                Money senior,
                                                Money deposits) {
    return {{Category::equity, equity},
            {Category::subordinated_debt, sub},
            {Category::senior_debt, senior},
            {Category::customer_deposits, deposits}};
}

// Independent oracle: walk the ladder subtracting min(remaining, capacity).
// Deliberately different arithmetic from the engine's prefix clamp.
inline std::vector<Money> subtraction_oracle(Money loss,
                                             const std::vector<ClassCapacity>& caps) {
    std::vector<Money> absorbed;
    absorbed.reserve(caps.size());
    Money remaining = loss;
    for (const auto& cap : caps) {
        const Money a = std::min(remaining, cap.amount);
        absorbed.push_back(a);
        remaining -= a;
    }
    return absorbed;
}

// Integer-EUR capacities so double arithmetic is exact; roughly one class
// in ten is empty.
inline std::vector<ClassCapacity> random_capacities(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> amount(0, 2'000'000'000);
    std::uniform_int_distribution<int> zero(0, 9);
    auto draw = [&] {
        return zero(rng) == 0 ? Money(0) : Money(amount(rng));
    };
    return standard_caps(draw(), draw(), draw(), draw());
}

// Loss regimes: zero, inside total capacity, or beyond it.
inline Money random_loss(std::mt19937_64& rng, const std::vector<ClassCapacity>& caps) {
    Money total = 0;
    for (const auto& cap : caps) total += cap.amount;
    std::uniform_int_distribution<int> regime(0, 9);
    const int r = regime(rng);
    if (r == 0) return 0;
    std::uniform_int_distribution<std::int64_t> inside(
        0, std::max<std::int64_t>(1, static_cast<std::int64_t>(total)));
    if (r <= 7) return Money(inside(rng));
    return total + Money(inside(rng) / 2 + 1);
}

inline BalanceSheet random_sheet(std::mt19937_64& rng, int year) {
    std::uniform_int_distribution<std::int64_t> amount(0, 40'000'000'000);
    BalanceSheet sheet;
    sheet.year = year;
    for (Category cat : all_categories) {
        sheet.amount(cat) = Money(amount(rng));
    }
    sheet.total_assets = sheet.total_liabilities_and_equity();
    return sheet;
}

// A synthetic dataset with integer-EUR amounts spread over a handful of
// countries and all three statuses; every bank carries the base year.
inline std::vector<BankRecord> random_records(std::mt19937_64& rng,
                                              std::size_t count,
                                              int base_year = 2006) {
    static const char* countries[] = {"AT", "DE", "ES", "FR", "GB", "IT"};
    std::uniform_int_distribution<std::size_t> country(0, std::size(countries) - 1);
    std::uniform_int_distribution<int> status(0, 2);
    std::uniform_int_distribution<std::int64_t> charge(-500'000'000, 4'000'000'000);

    std::vector<BankRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        BankRecord bank;
        char id[24];
        std::snprintf(id, sizeof(id), "BK%05zu", i);
        bank.bank_id = id;
        bank.name = "Synthetic " + std::to_string(i);
        bank.country = countries[country(rng)];
        bank.status = all_statuses[static_cast<std::size_t>(status(rng))];
        bank.balance_sheets[base_year] = random_sheet(rng, base_year);
        for (int year = base_year + 2; year <= base_year + 6; ++year) {
            bank.impairments.upsert({year, Money(charge(rng)), Money(charge(rng) / 4),
                                     Money(charge(rng) / 8)});
        }
        records.push_back(std::move(bank));
    }
    return records;
}

inline std::filesystem::path fixtures_dir() {
    return std::filesystem::path(BAILIN_FIXTURES_DIR);
}

// Loaded once; the calibrated dataset backs several suites.
inline const Dataset& fixture_dataset() {
    static const Dataset dataset = [] {
        const auto manifest =
            DatasetManifest::from_file(fixtures_dir() / "europe2006.manifest");
        return load_dataset(manifest);
    }();
    return dataset;
}

inline std::vector<BankRecord> fixture_failed() {
    std::vector<BankRecord> failed;
    for (const auto& record : fixture_dataset().records) {
        if (record.status != BankStatus::surviving) failed.push_back(record);
    }
    return failed;
}

inline const GroupOutcome* find_outcome(const std::vector<GroupOutcome>& outcomes,
                                        const GroupKey& key) {
    for (const auto& outcome : outcomes) {
        if (outcome.key == key) return &outcome;
    }
    return nullptr;
}

}  // namespace testutil
