#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bailin {

// Monetary amounts are EUR units (not millions), carried as doubles.
using Money = double;

// Liability-side funding categories of the collapsed balance sheet.
// The first four can absorb losses under the standard ladder; bank
// deposits (short-term interbank funding) and other liabilities
// (derivatives, repos, trade liabilities) are exempt.
enum class Category {
    equity,
    subordinated_debt,
    senior_debt,
    customer_deposits,
    bank_deposits,
    other_liabilities,
};

inline constexpr std::array<Category, 6> all_categories = {
    Category::equity,
    Category::subordinated_debt,
    Category::senior_debt,
    Category::customer_deposits,
    Category::bank_deposits,
    Category::other_liabilities,
};

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

// Crisis outcome of a bank: full state takeover, state capital injection,
// or no capital support.
enum class BankStatus {
    nationalized,
    recapitalized,
    surviving,
};

inline constexpr std::array<BankStatus, 3> all_statuses = {
    BankStatus::nationalized,
    BankStatus::recapitalized,
    BankStatus::surviving,
};

std::string_view to_string(BankStatus s);
std::optional<BankStatus> parse_status(std::string_view s);

// One bank-year snapshot of the funding side, all amounts >= 0.
struct BalanceSheet {
    int year = 0;
    Money equity = 0;
    Money subordinated_debt = 0;
    Money senior_debt = 0;
    Money customer_deposits = 0;
    Money bank_deposits = 0;
    Money other_liabilities = 0;
    Money total_assets = 0;

    Money amount(Category c) const;
    Money& amount(Category c);

    // Sum of the six funding categories; must be > 0 for a usable record.
    Money total_liabilities_and_equity() const;

    bool operator==(const BalanceSheet&) const = default;
};

// Realized impairment charges booked in one calendar year. Components may
// be negative (recoveries).
struct ImpairmentEntry {
    int year = 0;
    Money loan_writedowns = 0;
    Money nonrecurring_expenses = 0;
    Money security_impairments = 0;

    Money total() const {
        return loan_writedowns + nonrecurring_expenses + security_impairments;
    }

    bool operator==(const ImpairmentEntry&) const = default;
};

// Per-year impairment entries, unique by year, kept sorted ascending.
class ImpairmentSeries {
public:
    // Insert or replace the entry for its year; returns true on replace.
    bool upsert(const ImpairmentEntry& entry);

    const std::vector<ImpairmentEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    bool operator==(const ImpairmentSeries&) const = default;

private:
    std::vector<ImpairmentEntry> entries_;
};

// One bank: identity, grouping, balance-sheet snapshots, impairments.
struct BankRecord {
    std::string bank_id;
    std::string name;
    std::string country;  // ISO 3166-1 alpha-2
    BankStatus status = BankStatus::surviving;
    std::map<int, BalanceSheet> balance_sheets;
    ImpairmentSeries impairments;

    // nullptr when the year is not on file.
    const BalanceSheet* balance_for(int year) const;

    bool operator==(const BankRecord&) const = default;
};

}  // namespace bailin
