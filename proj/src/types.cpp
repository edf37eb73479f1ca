#include "bailin/types.hpp"

#include <algorithm>

namespace bailin {

std::string_view to_string(Category c) {
    switch (c) {
        case Category::equity: return "equity";
        case Category::subordinated_debt: return "subordinated_debt";
        case Category::senior_debt: return "senior_debt";
        case Category::customer_deposits: return "customer_deposits";
        case Category::bank_deposits: return "bank_deposits";
        case Category::other_liabilities: return "other_liabilities";
    }
    return "unknown";
}

std::optional<Category> parse_category(std::string_view s) {
    for (Category c : all_categories) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

std::string_view to_string(BankStatus s) {
    switch (s) {
        case BankStatus::nationalized: return "nationalized";
        case BankStatus::recapitalized: return "recapitalized";
        case BankStatus::surviving: return "surviving";
    }
    return "unknown";
}

std::optional<BankStatus> parse_status(std::string_view s) {
    for (BankStatus st : all_statuses) {
        if (s == to_string(st)) return st;
    }
    return std::nullopt;
}

Money BalanceSheet::amount(Category c) const {
    return const_cast<BalanceSheet*>(this)->amount(c);
}

Money& BalanceSheet::amount(Category c) {
    switch (c) {
        case Category::equity: return equity;
        case Category::subordinated_debt: return subordinated_debt;
        case Category::senior_debt: return senior_debt;
        case Category::customer_deposits: return customer_deposits;
        case Category::bank_deposits: return bank_deposits;
        case Category::other_liabilities: return other_liabilities;
    }
    return equity;  // unreachable
}

Money BalanceSheet::total_liabilities_and_equity() const {
    return equity + subordinated_debt + senior_debt + customer_deposits +
           bank_deposits + other_liabilities;
}

bool ImpairmentSeries::upsert(const ImpairmentEntry& entry) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), entry.year,
                               [](const ImpairmentEntry& e, int year) { return e.year < year; });
    if (it != entries_.end() && it->year == entry.year) {
        *it = entry;
        return true;
    }
    entries_.insert(it, entry);
    return false;
}

const BalanceSheet* BankRecord::balance_for(int year) const {
    auto it = balance_sheets.find(year);
    return it == balance_sheets.end() ? nullptr : &it->second;
}

}  // namespace bailin
