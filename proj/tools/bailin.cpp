// bailin: apply the bail-in waterfall to bank balance-sheet datasets and
// render the result tables.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "bailin/analytics.hpp"
#include "bailin/dataset.hpp"
#include "bailin/errors.hpp"
#include "bailin/render.hpp"
#include "bailin/seniority_ladder.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <unistd.h>
#endif

namespace {

using namespace bailin;

bool use_color() {
    if (std::getenv("BAILIN_NO_COLOR") != nullptr) return false;
#if defined(__unix__) || defined(__APPLE__)
    return isatty(fileno(stderr)) != 0;
#else
    return false;
#endif
}

void diag(std::string_view severity, std::string_view message) {
    static const bool color = use_color();
    const char* code = severity == "error" ? "\033[31m" : "\033[33m";
    if (color) {
        std::cerr << code << severity << ":\033[0m " << message << "\n";
    } else {
        std::cerr << severity << ": " << message << "\n";
    }
}

struct RunOptions {
    std::string manifest_path;
    std::string scenario = "actual";
    std::string table = "bail_in";
    std::string format = "markdown";
    std::string mode = "aggregate";
    std::string group_by = "both";
    std::optional<int> base_year;
    std::string impairment_years;  // "START:END"
    bool include_surviving = false;
    std::string ladder_path;
    std::string out_path;
};

std::pair<int, int> parse_year_range(const std::string& value) {
    const auto colon = value.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("bad --impairment-years '" + value + "': expected START:END");
    }
    try {
        std::size_t a = 0, b = 0;
        const int start = std::stoi(value.substr(0, colon), &a);
        const int end = std::stoi(value.substr(colon + 1), &b);
        if (a != colon || b != value.size() - colon - 1) {
            throw std::invalid_argument("trailing junk");
        }
        return {start, end};
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("bad --impairment-years '" + value + "': expected START:END");
    }
}

int run(const RunOptions& opt) {
    const auto table = parse_table(opt.table);
    if (!table) throw ConfigError("unknown table '" + opt.table + "'");
    const auto format = parse_format(opt.format);
    if (!format) throw ConfigError("unknown format '" + opt.format + "'");
    const auto grouping = parse_grouping(opt.group_by);
    if (!grouping) throw ConfigError("unknown grouping '" + opt.group_by + "'");
    const auto mode = parse_run_mode(opt.mode);
    if (!mode) throw ConfigError("unknown mode '" + opt.mode + "'");

    auto manifest = DatasetManifest::from_file(opt.manifest_path);
    if (opt.base_year) manifest.base_year = *opt.base_year;
    if (!opt.impairment_years.empty()) {
        std::tie(manifest.impairment_start, manifest.impairment_end) =
            parse_year_range(opt.impairment_years);
    }
    manifest.validate();

    ScenarioSpec scenario = ScenarioSpec::parse(opt.scenario);
    scenario.impairment_start = manifest.impairment_start;
    scenario.impairment_end = manifest.impairment_end;
    scenario.mode = *mode;
    if (*table == TableKind::stress && scenario.kind != ScenarioKind::stress) {
        throw ConfigError("the stress table needs --scenario stress:<alpha>");
    }

    const SeniorityLadder ladder =
        opt.ladder_path.empty() ? SeniorityLadder::standard() : load_ladder(opt.ladder_path);

    Dataset dataset = load_dataset(manifest);
    for (const auto& rejected : dataset.report.rejected) {
        diag("warning", rejected.file + ":" + std::to_string(rejected.line) +
                            ": row rejected (" + rejected.reason + ")");
    }
    for (const auto& warning : dataset.report.warnings) {
        diag("warning", warning);
    }

    // the waterfall tables cover failed banks unless told otherwise; the
    // descriptive tables always cover the whole sample
    std::vector<BankRecord> records = std::move(dataset.records);
    const bool waterfall = *table == TableKind::bail_in || *table == TableKind::stress;
    if (waterfall && !opt.include_surviving) {
        std::erase_if(records,
                      [](const BankRecord& r) { return r.status == BankStatus::surviving; });
    }

    std::vector<std::string> warnings;
    Report report;
    report.table = *table;
    report.base_year = manifest.base_year;
    report.scenario = scenario;
    report.ladder = ladder;
    report.aggregates = aggregate(records, *grouping, manifest.base_year,
                                  manifest.impairment_start, manifest.impairment_end, &warnings);
    if (waterfall) {
        report.outcomes =
            run_scenario(records, *grouping, manifest.base_year, scenario, ladder, &warnings);
    }
    // aggregation and the scenario run see the same records, so warnings
    // repeat; keep the first occurrence of each
    std::vector<std::string> unique;
    for (const auto& w : warnings) {
        if (std::find(unique.begin(), unique.end(), w) == unique.end()) unique.push_back(w);
    }
    for (const auto& w : unique) diag("warning", w);

    const std::string bytes = render(report, *format);
    if (opt.out_path.empty()) {
        std::cout << bytes;
        if (!std::cout) throw IoError("write to standard output failed");
    } else {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) throw IoError("cannot open output file: " + opt.out_path);
        out << bytes;
        out.close();
        if (!out) throw IoError("write failed: " + opt.out_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bail-in waterfall engine: allocate realized or stress losses of a bank\n"
                 "dataset down the creditor seniority ladder and report the outcome."};
    app.require_subcommand(0, 1);

    RunOptions opt;
    CLI::App* run_cmd = app.add_subcommand("run", "Load a dataset, run a scenario, emit a table");
    run_cmd->add_option("--manifest", opt.manifest_path,
                        "Dataset manifest (key = value: banks, balance, impairments, "
                        "exclusions, base_year, impairment_start, impairment_end)")
        ->required();
    run_cmd->add_option("--scenario", opt.scenario, "actual | stress:<alpha>  (default actual)");
    run_cmd->add_option("--table", opt.table,
                        "counts_impairments | funding_mix | bail_in | stress  (default bail_in)");
    run_cmd->add_option("--format", opt.format, "csv | markdown | json  (default markdown)");
    run_cmd->add_option("--mode", opt.mode, "aggregate | per-bank  (default aggregate)");
    run_cmd->add_option("--base-year", opt.base_year,
                        "Balance-sheet year for capacities (overrides the manifest)");
    run_cmd->add_option("--impairment-years", opt.impairment_years,
                        "START:END inclusive year range for actual losses (overrides the manifest)");
    run_cmd->add_option("--group-by", opt.group_by,
                        "country | status | both | none  (default both)");
    run_cmd->add_flag("--include-surviving", opt.include_surviving,
                      "Include surviving banks in the bail_in/stress tables");
    run_cmd->add_option("--ladder", opt.ladder_path,
                        "Seniority ladder definition file (default: the standard four-class ladder)");
    run_cmd->add_option("--out", opt.out_path, "Write the table here instead of standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints usage, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message to stderr
        return 1;
    }

    if (!run_cmd->parsed()) {
        std::cerr << app.help();
        return 1;
    }

    try {
        return run(opt);
    } catch (const IoError& e) {
        diag("error", e.what());
        return 2;
    } catch (const ConfigError& e) {
        diag("error", e.what());
        return 1;
    } catch (const ValidationError& e) {
        diag("error", e.what());
        return 1;
    } catch (const std::exception& e) {
        diag("error", e.what());
        return 2;
    }
}
