#include "bailin/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bailin/errors.hpp"

namespace bailin {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Minimal CSV field splitting; quoted fields may contain commas and
// doubled quotes. Lines never span rows in this schema.
std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Amounts are integer EUR in practice; fall back to a round-trippable
// float form for anything else so write/parse is lossless.
std::string format_amount(Money value) {
    if (std::isfinite(value) && std::floor(value) == value &&
        std::abs(value) <= 9007199254740992.0) {
        return std::to_string(static_cast<long long>(value));
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

bool parse_amount(std::string_view s, Money& out) {
    s = trim(s);
    if (s.empty()) return false;
    std::string tmp(s);
    char* end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    return end == tmp.c_str() + tmp.size() && std::isfinite(out);
}

bool parse_year(std::string_view s, int& out) {
    s = trim(s);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

struct CsvFile {
    std::string name;   // basename, used in rejection entries
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // line number, fields
};

CsvFile read_csv(const std::filesystem::path& path, std::string_view expected_header) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    CsvFile file;
    file.name = path.filename().string();

    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError(file.name + ": empty file, expected header '" +
                              std::string(expected_header) + "'");
    }
    if (trim(line) != expected_header) {
        throw ValidationError(file.name + ": malformed header '" + std::string(trim(line)) +
                              "', expected '" + std::string(expected_header) + "'");
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        file.rows.emplace_back(line_no, split_csv(line));
    }
    if (in.bad()) {
        throw IoError("read error on " + path.string());
    }
    return file;
}

constexpr std::string_view banks_header = "bank_id,name,country,status";
constexpr std::string_view balance_header =
    "bank_id,year,equity,subordinated_debt,senior_debt,customer_deposits,"
    "bank_deposits,other_liabilities,total_assets";
constexpr std::string_view impairments_header =
    "bank_id,year,loan_writedowns,nonrecurring_expenses,security_impairments";

bool valid_country(std::string_view s) {
    return s.size() == 2 && std::isupper(static_cast<unsigned char>(s[0])) &&
           std::isupper(static_cast<unsigned char>(s[1]));
}

}  // namespace

void DatasetManifest::validate() const {
    if (impairment_start > impairment_end) {
        throw ConfigError("impairment year range start " + std::to_string(impairment_start) +
                          " exceeds end " + std::to_string(impairment_end));
    }
    if (base_year >= impairment_start) {
        throw ConfigError("base year " + std::to_string(base_year) +
                          " must precede the impairment range (starts " +
                          std::to_string(impairment_start) + ")");
    }
}

DatasetManifest DatasetManifest::from_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open manifest: " + file.string());
    }
    const auto dir = file.parent_path();
    auto resolve = [&dir](std::string_view value) {
        std::filesystem::path p{std::string(value)};
        return p.is_relative() ? dir / p : p;
    };

    DatasetManifest manifest;
    bool have_banks = false, have_balance = false, have_impairments = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (auto hash = sv.find('#'); hash != std::string_view::npos) {
            sv = trim(sv.substr(0, hash));
        }
        if (sv.empty()) continue;
        auto eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(file.string() + ":" + std::to_string(line_no) +
                              ": expected key = value");
        }
        std::string_view key = trim(sv.substr(0, eq));
        std::string_view value = trim(sv.substr(eq + 1));

        if (key == "banks") {
            manifest.banks_file = resolve(value);
            have_banks = true;
        } else if (key == "balance") {
            manifest.balance_file = resolve(value);
            have_balance = true;
        } else if (key == "impairments") {
            manifest.impairments_file = resolve(value);
            have_impairments = true;
        } else if (key == "exclusions") {
            manifest.exclusions_file = resolve(value);
        } else if (key == "base_year" || key == "impairment_start" || key == "impairment_end") {
            int parsed = 0;
            if (!parse_year(value, parsed)) {
                throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": bad " +
                                  std::string(key) + " '" + std::string(value) + "'");
            }
            if (key == "base_year") manifest.base_year = parsed;
            else if (key == "impairment_start") manifest.impairment_start = parsed;
            else manifest.impairment_end = parsed;
        } else {
            throw ConfigError(file.string() + ":" + std::to_string(line_no) + ": unknown key '" +
                              std::string(key) + "'");
        }
    }

    if (!have_banks || !have_balance || !have_impairments) {
        throw ConfigError(file.string() + ": manifest must name banks, balance and impairments files");
    }
    manifest.validate();
    return manifest;
}

Dataset load_dataset(const DatasetManifest& manifest) {
    manifest.validate();

    Dataset dataset;
    auto& report = dataset.report;
    auto reject = [&report](const CsvFile& file, std::size_t line, std::string reason) {
        report.rejected.push_back({file.name, line, std::move(reason)});
    };

    // keyed by bank_id; std::map keeps the final records sorted
    std::map<std::string, BankRecord> banks;

    CsvFile banks_csv = read_csv(manifest.banks_file, banks_header);
    for (const auto& [line, fields] : banks_csv.rows) {
        if (fields.size() != 4) {
            reject(banks_csv, line, "column_count");
            continue;
        }
        BankRecord record;
        record.bank_id = trim(fields[0]);
        record.name = fields[1];
        record.country = trim(fields[2]);
        if (record.bank_id.empty()) {
            reject(banks_csv, line, "empty_bank_id");
            continue;
        }
        if (!valid_country(record.country)) {
            reject(banks_csv, line, "invalid_country");
            continue;
        }
        auto status = parse_status(trim(fields[3]));
        if (!status) {
            reject(banks_csv, line, "invalid_status");
            continue;
        }
        record.status = *status;
        ++report.accepted;
        auto [it, inserted] = banks.insert_or_assign(record.bank_id, std::move(record));
        if (!inserted) {
            report.warnings.push_back(banks_csv.name + ":" + std::to_string(line) +
                                      ": duplicate bank_id '" + it->first +
                                      "', later row wins");
        }
    }

    CsvFile balance_csv = read_csv(manifest.balance_file, balance_header);
    for (const auto& [line, fields] : balance_csv.rows) {
        if (fields.size() != 9) {
            reject(balance_csv, line, "column_count");
            continue;
        }
        auto bank = banks.find(std::string(trim(fields[0])));
        if (bank == banks.end()) {
            reject(balance_csv, line, "unknown_bank_id");
            continue;
        }
        BalanceSheet sheet;
        if (!parse_year(fields[1], sheet.year)) {
            reject(balance_csv, line, "invalid_year");
            continue;
        }
        Money* slots[] = {&sheet.equity,            &sheet.subordinated_debt,
                          &sheet.senior_debt,       &sheet.customer_deposits,
                          &sheet.bank_deposits,     &sheet.other_liabilities,
                          &sheet.total_assets};
        bool ok = true;
        bool negative = false;
        for (std::size_t i = 0; i < 7 && ok; ++i) {
            ok = parse_amount(fields[i + 2], *slots[i]);
            negative = negative || (ok && *slots[i] < 0);
        }
        if (!ok) {
            reject(balance_csv, line, "invalid_number");
            continue;
        }
        if (negative) {
            reject(balance_csv, line, "negative_amount");
            continue;
        }
        ++report.accepted;
        auto [it, inserted] = bank->second.balance_sheets.insert_or_assign(sheet.year, sheet);
        (void)it;
        if (!inserted) {
            report.warnings.push_back(balance_csv.name + ":" + std::to_string(line) +
                                      ": duplicate balance sheet for '" + bank->first + "' year " +
                                      std::to_string(sheet.year) + ", later row wins");
        }
    }

    CsvFile impairments_csv = read_csv(manifest.impairments_file, impairments_header);
    for (const auto& [line, fields] : impairments_csv.rows) {
        if (fields.size() != 5) {
            reject(impairments_csv, line, "column_count");
            continue;
        }
        auto bank = banks.find(std::string(trim(fields[0])));
        if (bank == banks.end()) {
            reject(impairments_csv, line, "unknown_bank_id");
            continue;
        }
        ImpairmentEntry entry;
        if (!parse_year(fields[1], entry.year)) {
            reject(impairments_csv, line, "invalid_year");
            continue;
        }
        // components may be negative: recoveries are real data
        if (!parse_amount(fields[2], entry.loan_writedowns) ||
            !parse_amount(fields[3], entry.nonrecurring_expenses) ||
            !parse_amount(fields[4], entry.security_impairments)) {
            reject(impairments_csv, line, "invalid_number");
            continue;
        }
        ++report.accepted;
        if (bank->second.impairments.upsert(entry)) {
            report.warnings.push_back(impairments_csv.name + ":" + std::to_string(line) +
                                      ": duplicate impairments for '" + bank->first + "' year " +
                                      std::to_string(entry.year) + ", later row wins");
        }
    }

    dataset.records.reserve(banks.size());
    for (auto& [id, record] : banks) {
        dataset.records.push_back(std::move(record));
    }

    if (manifest.exclusions_file) {
        auto exclusions = load_exclusions(*manifest.exclusions_file);
        dataset.records = apply_exclusions(std::move(dataset.records), exclusions, &report);
    }
    return dataset;
}

std::vector<std::string> load_exclusions(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open exclusions file: " + file.string());
    }
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view sv = trim(line);
        if (auto hash = sv.find('#'); hash != std::string_view::npos) {
            sv = trim(sv.substr(0, hash));
        }
        if (!sv.empty()) ids.emplace_back(sv);
    }
    return ids;
}

std::vector<BankRecord> apply_exclusions(std::vector<BankRecord> records,
                                         std::span<const std::string> exclusions,
                                         ValidationReport* report) {
    std::set<std::string_view> wanted(exclusions.begin(), exclusions.end());
    std::set<std::string_view> seen;
    std::vector<BankRecord> kept;
    kept.reserve(records.size());
    for (auto& record : records) {
        if (wanted.count(record.bank_id)) {
            seen.insert(record.bank_id);
        } else {
            kept.push_back(std::move(record));
        }
    }
    if (report) {
        for (const auto& id : exclusions) {
            if (!seen.count(id)) {
                report->warnings.push_back("exclusion id '" + id + "' not present in dataset");
            }
        }
    }
    return kept;
}

CsvBundle write_dataset(std::span<const BankRecord> records) {
    CsvBundle bundle;
    std::string& banks = bundle.banks;
    std::string& balance = bundle.balance;
    std::string& impairments = bundle.impairments;

    banks = std::string(banks_header) + "\n";
    balance = std::string(balance_header) + "\n";
    impairments = std::string(impairments_header) + "\n";

    for (const auto& record : records) {
        banks += csv_escape(record.bank_id) + "," + csv_escape(record.name) + "," +
                 record.country + "," + std::string(to_string(record.status)) + "\n";
        for (const auto& [year, sheet] : record.balance_sheets) {
            balance += csv_escape(record.bank_id) + "," + std::to_string(year);
            for (Category cat : all_categories) {
                balance += "," + format_amount(sheet.amount(cat));
            }
            balance += "," + format_amount(sheet.total_assets) + "\n";
        }
        for (const auto& entry : record.impairments.entries()) {
            impairments += csv_escape(record.bank_id) + "," + std::to_string(entry.year) + "," +
                           format_amount(entry.loan_writedowns) + "," +
                           format_amount(entry.nonrecurring_expenses) + "," +
                           format_amount(entry.security_impairments) + "\n";
        }
    }
    return bundle;
}

}  // namespace bailin
