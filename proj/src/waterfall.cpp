#include "bailin/waterfall.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bailin/errors.hpp"

namespace bailin {

Money WaterfallResult::total_absorbed() const {
    Money sum = 0;
    for (const auto& cls : classes) sum += cls.absorbed;
    return sum;
}

const ClassOutcome* WaterfallResult::outcome(Category c) const {
    for (const auto& cls : classes) {
        if (cls.category == c) return &cls;
    }
    return nullptr;
}

WaterfallResult allocate_loss(Money loss,
                              std::span<const ClassCapacity> capacities,
                              const SeniorityLadder& ladder) {
    if (!std::isfinite(loss) || loss < 0) {
        throw ValidationError("loss must be finite and non-negative");
    }
    const auto order = ladder.bail_in_order();
    if (capacities.size() != order.size()) {
        throw LadderMismatchError("expected " + std::to_string(order.size()) +
                                  " capacities for the ladder, got " +
                                  std::to_string(capacities.size()));
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (capacities[i].category != order[i]) {
            throw LadderMismatchError("capacity " + std::to_string(i) + " is " +
                                      std::string(to_string(capacities[i].category)) +
                                      " but the ladder expects " +
                                      std::string(to_string(order[i])));
        }
        if (!std::isfinite(capacities[i].amount) || capacities[i].amount < 0) {
            throw ValidationError("capacity[" + std::string(to_string(capacities[i].category)) +
                                  "] must be finite and non-negative");
        }
    }

    WaterfallResult result;
    result.loss = loss;
    result.classes.reserve(capacities.size());

    // Sequential clamp: class i absorbs whatever survives the classes
    // junior to it, up to its own capacity.
    Money junior_capacity = 0;
    for (const auto& cap : capacities) {
        ClassOutcome out;
        out.category = cap.category;
        out.capacity = cap.amount;
        out.absorbed = std::clamp(loss - junior_capacity, 0.0, cap.amount);
        out.fraction = cap.amount > 0 ? out.absorbed / cap.amount : 0.0;
        junior_capacity += cap.amount;
        result.classes.push_back(out);
    }
    result.residual = std::max(loss - junior_capacity, 0.0);

    if (const auto* deposits = result.outcome(Category::customer_deposits)) {
        result.dgs_shortfall = ladder.covered_deposit_share * deposits->absorbed;
    }
    return result;
}

std::vector<ClassCapacity> bail_in_capacities(const BalanceSheet& balance,
                                              const SeniorityLadder& ladder) {
    std::vector<ClassCapacity> capacities;
    for (Category cat : ladder.bail_in_order()) {
        capacities.push_back({cat, balance.amount(cat)});
    }
    return capacities;
}

Money compute_loss_actual(const ImpairmentSeries& series, int start_year, int end_year) {
    if (start_year > end_year) {
        throw ValidationError("impairment year range start " + std::to_string(start_year) +
                              " exceeds end " + std::to_string(end_year));
    }
    Money sum = 0;
    for (const auto& entry : series.entries()) {
        if (entry.year >= start_year && entry.year <= end_year) {
            sum += entry.total();
        }
    }
    return std::max(sum, 0.0);
}

Money compute_loss_stress(const BalanceSheet& balance, double alpha) {
    if (!std::isfinite(alpha) || alpha < 0) {
        throw ValidationError("alpha must be finite and non-negative");
    }
    return alpha * balance.total_assets;
}

}  // namespace bailin
