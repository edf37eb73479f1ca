#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "bailin/types.hpp"

namespace bailin {

// One rung of the ladder. Rank 1 is the most junior class and absorbs
// first; exempt classes carry no rank and never enter the waterfall.
struct LiabilityClass {
    Category category = Category::equity;
    int rank = 0;  // 0 for exempt classes
    bool bail_inable = false;

    bool operator==(const LiabilityClass&) const = default;
};

// The waterfall's ordering contract: which funding categories absorb
// losses and in what sequence, plus the share of customer deposits a
// guarantee scheme would make whole if deposits are written down.
struct SeniorityLadder {
    std::vector<LiabilityClass> classes;  // bail-inable first (rank ascending), then exempt
    double covered_deposit_share = 0.0;   // in [0, 1]

    // equity(1) -> subordinated_debt(2) -> senior_debt(3) ->
    // customer_deposits(4); exempt: bank_deposits, other_liabilities.
    static SeniorityLadder standard();

    // Bail-inable categories in rank order.
    std::vector<Category> bail_in_order() const;

    bool is_exempt(Category c) const;

    // Throws ConfigError on duplicate categories, non-contiguous ranks,
    // ranked exempt classes, or a covered share outside [0, 1].
    void validate() const;

    bool operator==(const SeniorityLadder&) const = default;
};

// Plain-text key-value ladder definition:
//
//   rank.1 = equity
//   rank.2 = subordinated_debt
//   exempt = bank_deposits, other_liabilities
//   covered_deposit_share = 0.0
//
// Categories never mentioned are exempt. `#` starts a comment.
SeniorityLadder parse_ladder(std::istream& in);
SeniorityLadder load_ladder(const std::filesystem::path& file);

}  // namespace bailin
