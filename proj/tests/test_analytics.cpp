#include <algorithm>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "bailin/analytics.hpp"
#include "bailin/errors.hpp"
#include "helpers.hpp"

using namespace bailin;
using testutil::find_outcome;
using testutil::fixture_dataset;
using testutil::fixture_failed;
using Catch::Approx;

namespace {
const SeniorityLadder ladder = SeniorityLadder::standard();
}

TEST_CASE("a singleton group aggregates to the bank's own balance sheet") {
    std::mt19937_64 rng(7);
    auto records = testutil::random_records(rng, 1);
    const auto aggregates = aggregate(records, Grouping::both, 2006, 2008, 2012);
    REQUIRE(aggregates.size() == 1);
    CHECK(aggregates[0].bank_count == 1);
    CHECK(aggregates[0].balance == records[0].balance_sheets.at(2006));
    CHECK(aggregates[0].total_impairments ==
          compute_loss_actual(records[0].impairments, 2008, 2012));
}

TEST_CASE("aggregating nothing yields nothing") {
    const std::vector<BankRecord> none;
    CHECK(aggregate(none, Grouping::both, 2006, 2008, 2012).empty());
    CHECK(run_scenario(none, Grouping::both, 2006, {}, ladder).empty());
}

TEST_CASE("country x status groups partition the whole sample exactly") {
    std::mt19937_64 rng(11);
    const auto records = testutil::random_records(rng, 120);

    const auto whole = aggregate(records, Grouping::none, 2006, 2008, 2012);
    const auto parts = aggregate(records, Grouping::both, 2006, 2008, 2012);
    REQUIRE(whole.size() == 1);

    BalanceSheet sum;
    sum.year = 2006;
    std::size_t banks = 0;
    Money impairments = 0;
    for (const auto& part : parts) {
        for (Category cat : all_categories) sum.amount(cat) += part.balance.amount(cat);
        sum.total_assets += part.balance.total_assets;
        banks += part.bank_count;
        impairments += part.total_impairments;
    }
    // integer-EUR amounts: the partition must re-sum bit for bit
    CHECK(sum == whole[0].balance);
    CHECK(banks == whole[0].bank_count);
    CHECK(impairments == whole[0].total_impairments);
}

TEST_CASE("permuting the input changes nothing") {
    std::mt19937_64 rng(13);
    auto records = testutil::random_records(rng, 80);
    const ScenarioSpec stress{ScenarioKind::stress, 0.15, 2008, 2012, RunMode::aggregate};

    const auto base_agg = aggregate(records, Grouping::both, 2006, 2008, 2012);
    const auto base_run = run_scenario(records, Grouping::both, 2006, stress, ladder);

    std::shuffle(records.begin(), records.end(), rng);
    const auto shuffled_agg = aggregate(records, Grouping::both, 2006, 2008, 2012);
    const auto shuffled_run = run_scenario(records, Grouping::both, 2006, stress, ladder);

    REQUIRE(shuffled_agg.size() == base_agg.size());
    for (std::size_t i = 0; i < base_agg.size(); ++i) {
        CHECK(shuffled_agg[i].key == base_agg[i].key);
        CHECK(shuffled_agg[i].balance == base_agg[i].balance);
        CHECK(shuffled_agg[i].total_impairments == base_agg[i].total_impairments);
    }
    CHECK(shuffled_run == base_run);
}

TEST_CASE("groups come out in report order") {
    const auto aggregates =
        aggregate(fixture_dataset().records, Grouping::both, 2006, 2008, 2012);
    std::vector<GroupKey> keys;
    for (const auto& agg : aggregates) keys.push_back(agg.key);

    // sort oracle: country ascending, then status order
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    CHECK(keys == sorted);
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());  // unique
}

TEST_CASE("banks without the base-year balance sheet are skipped with a warning") {
    std::mt19937_64 rng(17);
    auto records = testutil::random_records(rng, 4);
    records[2].balance_sheets.clear();

    std::vector<std::string> warnings;
    const auto aggregates = aggregate(records, Grouping::none, 2006, 2008, 2012, &warnings);
    REQUIRE(aggregates.size() == 1);
    CHECK(aggregates[0].bank_count == 3);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find(records[2].bank_id) != std::string::npos);
}

TEST_CASE("funding shares sum to one for every fixture group") {
    const auto aggregates =
        aggregate(fixture_dataset().records, Grouping::both, 2006, 2008, 2012);
    REQUIRE(!aggregates.empty());
    for (const auto& agg : aggregates) {
        const FundingMix mix = funding_mix(agg);
        double sum = 0;
        for (Category cat : all_categories) sum += mix.share(cat);
        CHECK(sum == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("a single-category balance sheet has a share of one") {
    GroupAggregate agg;
    agg.bank_count = 1;
    agg.balance.customer_deposits = 42;
    const FundingMix mix = funding_mix(agg);
    CHECK(mix.share(Category::customer_deposits) == 1.0);
    CHECK(mix.share(Category::equity) == 0.0);
    CHECK(mix.long_term_debt() == 0.0);
}

TEST_CASE("empty balance sheets have no funding mix or loss ratio") {
    GroupAggregate agg;
    CHECK_THROWS_AS(funding_mix(agg), ValidationError);
    CHECK_THROWS_AS(loss_ratio(agg), ValidationError);
}

TEST_CASE("the loss ratio is impairments over base-year liabilities") {
    std::mt19937_64 rng(19);
    const auto records = testutil::random_records(rng, 40);
    for (const auto& agg : aggregate(records, Grouping::country, 2006, 2008, 2012)) {
        if (agg.balance.total_liabilities_and_equity() <= 0) continue;
        const double oracle =
            agg.total_impairments / agg.balance.total_liabilities_and_equity();
        CHECK(loss_ratio(agg) == oracle);
    }
}

TEST_CASE("scenario flags parse the documented grammar") {
    CHECK(ScenarioSpec::parse("actual").kind == ScenarioKind::actual);
    const auto stress = ScenarioSpec::parse("stress:0.20");
    CHECK(stress.kind == ScenarioKind::stress);
    CHECK(stress.alpha == 0.20);
    CHECK(ScenarioSpec::parse("stress:1").alpha == 1.0);
    CHECK_THROWS_AS(ScenarioSpec::parse("stress:"), ConfigError);
    CHECK_THROWS_AS(ScenarioSpec::parse("stress:a lot"), ConfigError);
    CHECK_THROWS_AS(ScenarioSpec::parse("worst_case"), ConfigError);
    CHECK(ScenarioSpec::parse("stress:0.2").label() == "stress:0.2");
    CHECK(ScenarioSpec::parse("actual").label() == "actual");
}

TEST_CASE("scenario validation flags out-of-range parameters") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::stress;
    spec.alpha = -0.5;
    CHECK_THROWS_AS(spec.validate(), ValidationError);

    spec.alpha = 1.25;  // legal, but worth a warning
    std::vector<std::string> warnings;
    spec.validate(&warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("1.25") != std::string::npos);

    spec = ScenarioSpec{};
    spec.impairment_start = 2012;
    spec.impairment_end = 2008;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("grouping and mode flags parse") {
    CHECK(parse_grouping("both") == Grouping::both);
    CHECK(parse_grouping("none") == Grouping::none);
    CHECK(parse_grouping("countries") == std::nullopt);
    CHECK(parse_run_mode("aggregate") == RunMode::aggregate);
    CHECK(parse_run_mode("per-bank") == RunMode::per_bank);
    CHECK(parse_run_mode("per bank") == std::nullopt);
    CHECK(to_string(RunMode::per_bank) == "per-bank");
}

TEST_CASE("stress fractions dominate smaller scenarios class-wise") {
    const auto records = fixture_failed();
    const ScenarioSpec actual{ScenarioKind::actual, 0, 2008, 2012, RunMode::aggregate};
    auto stress = [](double alpha) {
        return ScenarioSpec{ScenarioKind::stress, alpha, 2008, 2012, RunMode::aggregate};
    };

    const auto at_actual = run_scenario(records, Grouping::both, 2006, actual, ladder);
    const auto at_10 = run_scenario(records, Grouping::both, 2006, stress(0.10), ladder);
    const auto at_20 = run_scenario(records, Grouping::both, 2006, stress(0.20), ladder);
    REQUIRE(at_10.size() == at_20.size());

    for (std::size_t g = 0; g < at_10.size(); ++g) {
        for (std::size_t c = 0; c < at_10[g].result.classes.size(); ++c) {
            CHECK(at_20[g].result.classes[c].fraction >=
                  at_10[g].result.classes[c].fraction);
            // the actual loss only ranks below the stress level when it is
            // actually smaller
            if (at_actual[g].result.loss <= at_10[g].result.loss) {
                CHECK(at_10[g].result.classes[c].fraction >=
                      at_actual[g].result.classes[c].fraction);
            }
        }
    }
}

TEST_CASE("per-bank mode conserves losses and respects group capacity") {
    const auto records = fixture_failed();
    const ScenarioSpec spec{ScenarioKind::actual, 0, 2008, 2012, RunMode::per_bank};
    const ScenarioSpec pooled{ScenarioKind::actual, 0, 2008, 2012, RunMode::aggregate};

    const auto per_bank = run_scenario(records, Grouping::both, 2006, spec, ladder);
    const auto aggregate_mode = run_scenario(records, Grouping::both, 2006, pooled, ladder);
    REQUIRE(per_bank.size() == aggregate_mode.size());

    for (std::size_t g = 0; g < per_bank.size(); ++g) {
        const auto& split = per_bank[g].result;
        const auto& whole = aggregate_mode[g].result;
        CHECK(per_bank[g].key == aggregate_mode[g].key);
        // both modes allocate the same total loss against the same capacity
        CHECK(split.loss == whole.loss);
        for (std::size_t c = 0; c < split.classes.size(); ++c) {
            CHECK(split.classes[c].capacity == whole.classes[c].capacity);
            CHECK(split.classes[c].absorbed <= split.classes[c].capacity);
        }
        // conservation across the split
        CHECK(std::abs(split.total_absorbed() + split.residual - split.loss) <=
              testutil::money_tol(split.loss));
        // pooling capacity can only help: the aggregate run never leaves a
        // larger residual than the per-bank run
        CHECK(whole.residual <= split.residual);
    }
}

TEST_CASE("pooled recapitalized losses stay inside equity") {
    const auto records = fixture_failed();
    const ScenarioSpec spec{ScenarioKind::actual, 0, 2008, 2012, RunMode::aggregate};
    const auto outcomes = run_scenario(records, Grouping::status, 2006, spec, ladder);

    const auto* recap = find_outcome(outcomes, {std::nullopt, BankStatus::recapitalized});
    REQUIRE(recap != nullptr);
    const auto& classes = recap->result.classes;
    CHECK(classes[0].fraction > 0.9);
    CHECK(classes[0].fraction < 1.0);
    for (std::size_t c = 1; c < classes.size(); ++c) {
        CHECK(classes[c].absorbed == 0);
    }
}

TEST_CASE("deep senior write-downs in the calibrated stressed countries") {
    const auto records = fixture_failed();
    const ScenarioSpec spec{ScenarioKind::actual, 0, 2008, 2012, RunMode::aggregate};
    const auto outcomes = run_scenario(records, Grouping::both, 2006, spec, ladder);

    const auto* greece = find_outcome(outcomes, {"GR", BankStatus::recapitalized});
    REQUIRE(greece != nullptr);
    CHECK(greece->result.outcome(Category::subordinated_debt)->fraction == 1.0);
    CHECK(greece->result.outcome(Category::senior_debt)->fraction ==
          Approx(0.778).margin(0.001));
}

TEST_CASE("stressed senior write-downs order nationalized below recapitalized in Ireland") {
    const auto records = fixture_failed();
    const ScenarioSpec spec{ScenarioKind::stress, 0.20, 2008, 2012, RunMode::aggregate};
    const auto outcomes = run_scenario(records, Grouping::both, 2006, spec, ladder);

    const auto* nat = find_outcome(outcomes, {"IE", BankStatus::nationalized});
    const auto* rec = find_outcome(outcomes, {"IE", BankStatus::recapitalized});
    REQUIRE(nat != nullptr);
    REQUIRE(rec != nullptr);
    const double nat_senior = nat->result.outcome(Category::senior_debt)->fraction;
    const double rec_senior = rec->result.outcome(Category::senior_debt)->fraction;
    CHECK(rec_senior > nat_senior);
    CHECK(nat->result.outcome(Category::customer_deposits)->absorbed == 0);
    CHECK(rec->result.outcome(Category::customer_deposits)->absorbed == 0);
}
