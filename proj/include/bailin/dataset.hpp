#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bailin/types.hpp"

namespace bailin {

// Key-value dataset description: where the three CSV files live and which
// years anchor the analysis. Relative paths resolve against the manifest's
// own directory.
struct DatasetManifest {
    std::filesystem::path banks_file;
    std::filesystem::path balance_file;
    std::filesystem::path impairments_file;
    std::optional<std::filesystem::path> exclusions_file;
    int base_year = 2006;       // allocation base: capacities come from this year
    int impairment_start = 2008;
    int impairment_end = 2012;

    // ConfigError unless base_year < impairment_start <= impairment_end.
    void validate() const;

    static DatasetManifest from_file(const std::filesystem::path& file);
};

struct RejectedRow {
    std::string file;     // basename of the offending CSV
    std::size_t line;     // 1-based physical line number
    std::string reason;   // machine-readable, e.g. "invalid_status"

    bool operator==(const RejectedRow&) const = default;
};

// Every input row lands either in a record or in `rejected` — nothing is
// dropped silently.
struct ValidationReport {
    std::size_t accepted = 0;
    std::vector<RejectedRow> rejected;
    std::vector<std::string> warnings;

    std::size_t total_rows() const { return accepted + rejected.size(); }
};

struct Dataset {
    std::vector<BankRecord> records;  // sorted by bank_id
    ValidationReport report;
};

// Load and join the three CSV files, applying the manifest's exclusion
// list if present. A missing file throws IoError and a malformed header
// ValidationError; malformed rows are rejected into the report instead.
Dataset load_dataset(const DatasetManifest& manifest);

// One bank_id per line, `#` comments and blank lines ignored.
std::vector<std::string> load_exclusions(const std::filesystem::path& file);

// Drop records whose bank_id is listed, preserving order otherwise.
// Exclusion ids not present in the dataset produce a warning, not an error.
std::vector<BankRecord> apply_exclusions(std::vector<BankRecord> records,
                                         std::span<const std::string> exclusions,
                                         ValidationReport* report = nullptr);

// Records serialized back to the three-file schema; feeding the bundle
// through the parser again yields identical records.
struct CsvBundle {
    std::string banks;
    std::string balance;
    std::string impairments;
};

CsvBundle write_dataset(std::span<const BankRecord> records);

}  // namespace bailin
