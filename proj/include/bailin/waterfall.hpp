#pragma once

#include <span>
#include <vector>

#include "bailin/seniority_ladder.hpp"
#include "bailin/types.hpp"

namespace bailin {

// Bail-inable amount of one class, in ladder order.
struct ClassCapacity {
    Category category = Category::equity;
    Money amount = 0;

    bool operator==(const ClassCapacity&) const = default;
};

struct ClassOutcome {
    Category category = Category::equity;
    Money capacity = 0;
    Money absorbed = 0;
    double fraction = 0;  // absorbed / capacity; 0 when capacity == 0

    bool operator==(const ClassOutcome&) const = default;
};

struct WaterfallResult {
    Money loss = 0;                      // the loss that was pushed down the ladder
    std::vector<ClassOutcome> classes;   // ladder rank order
    Money residual = 0;                  // loss beyond total capacity
    Money dgs_shortfall = 0;             // covered_deposit_share x absorbed(customer_deposits)

    Money total_absorbed() const;

    // nullptr when the category is not a bail-inable class of the run.
    const ClassOutcome* outcome(Category c) const;

    bool operator==(const WaterfallResult&) const = default;
};

// Push a loss down the ladder: each class absorbs up to its capacity,
// most junior first; whatever exceeds total capacity is the residual.
//
// `capacities` must list exactly the ladder's bail-inable classes in rank
// order (LadderMismatchError otherwise). Negative loss or capacity raises
// ValidationError naming the offending field.
WaterfallResult allocate_loss(Money loss,
                              std::span<const ClassCapacity> capacities,
                              const SeniorityLadder& ladder);

// The balance sheet's bail-inable amounts in ladder order; exempt
// categories are dropped.
std::vector<ClassCapacity> bail_in_capacities(const BalanceSheet& balance,
                                              const SeniorityLadder& ladder);

// Net realized impairments over an inclusive year range, floored at zero:
// an institution whose recoveries exceed its charges needs no bail-in.
// Years absent from the series contribute nothing.
Money compute_loss_actual(const ImpairmentSeries& series, int start_year, int end_year);

// Hypothetical loss of alpha x total assets. alpha must be finite and
// >= 0; values above 1 are legal (callers warn).
Money compute_loss_stress(const BalanceSheet& balance, double alpha);

}  // namespace bailin
