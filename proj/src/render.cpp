#include "bailin/render.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bailin/errors.hpp"

namespace bailin {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_pct(double fraction) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
    return buf;
}

std::string fmt_ratio(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.1f", value);
    return buf;
}

// EUR amounts stay unrounded: integers in the common case, two decimals
// otherwise.
std::string fmt_money(Money value) {
    if (std::isfinite(value) && std::floor(value) == value &&
        std::abs(value) <= 9007199254740992.0) {
        return std::to_string(static_cast<long long>(value));
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

// "subordinated_debt" -> "Subordinated debt"
std::string pretty(std::string_view name) {
    std::string out(name);
    for (auto& c : out) {
        if (c == '_') c = ' ';
    }
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

struct Row {
    std::vector<std::string> cells;
};

struct Table {
    std::vector<std::string> header;
    std::vector<bool> numeric;  // column alignment for markdown
    std::vector<Row> rows;
};

std::string to_csv(const Table& table) {
    auto escape = [](const std::string& field) {
        if (field.find_first_of(",\"\n") == std::string::npos) return field;
        std::string out = "\"";
        for (char c : field) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    };
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out += (i ? "," : "") + escape(table.header[i]);
    }
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            out += (i ? "," : "") + escape(row.cells[i]);
        }
        out += "\n";
    }
    return out;
}

std::string to_markdown(const Table& table) {
    std::vector<std::size_t> width(table.header.size());
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        width[i] = std::max<std::size_t>(table.header[i].size(), 3);
    }
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            width[i] = std::max(width[i], row.cells[i].size());
        }
    }
    auto emit = [&](const std::vector<std::string>& cells) {
        std::string line = "|";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::string cell = cells[i];
            const bool right = table.numeric[i];
            std::string pad(width[i] - cell.size(), ' ');
            line += " " + (right ? pad + cell : cell + pad) + " |";
        }
        return line + "\n";
    };
    std::string out = emit(table.header);
    out += "|";
    for (std::size_t i = 0; i < width.size(); ++i) {
        std::string dashes(width[i], '-');
        if (table.numeric[i]) dashes.back() = ':';
        out += " " + dashes + " |";
    }
    out += "\n";
    for (const auto& row : table.rows) out += emit(row.cells);
    return out;
}

std::string dim_cell(const std::optional<std::string>& country, bool markdown) {
    return country ? *country : (markdown ? "all" : "");
}

std::string dim_cell(const std::optional<BankStatus>& status, bool markdown) {
    return status ? std::string(to_string(*status)) : (markdown ? "all" : "");
}

ordered_json key_json(const GroupKey& key) {
    ordered_json j;
    j["country"] = key.country ? ordered_json(*key.country) : ordered_json(nullptr);
    j["status"] = key.status ? ordered_json(std::string(to_string(*key.status)))
                             : ordered_json(nullptr);
    return j;
}

ordered_json scenario_json(const ScenarioSpec& spec) {
    ordered_json j;
    j["kind"] = spec.kind == ScenarioKind::actual ? "actual" : "stress";
    if (spec.kind == ScenarioKind::stress) {
        j["alpha"] = spec.alpha;
    } else {
        j["impairment_start"] = spec.impairment_start;
        j["impairment_end"] = spec.impairment_end;
    }
    j["mode"] = std::string(to_string(spec.mode));
    return j;
}

// aggregates in the report are joined to outcomes by group key
std::map<GroupKey, const GroupAggregate*> index_aggregates(const Report& report) {
    std::map<GroupKey, const GroupAggregate*> by_key;
    for (const auto& agg : report.aggregates) {
        by_key[agg.key] = &agg;
    }
    return by_key;
}

Table counts_table(const Report& report, bool markdown) {
    Table table;
    table.header = {markdown ? "Country" : "country", markdown ? "Status" : "status",
                    markdown ? "Banks" : "banks",
                    markdown ? "Impairments (EUR)" : "impairments_eur",
                    markdown ? "Loss ratio %" : "loss_ratio_pct"};
    table.numeric = {false, false, true, true, true};
    for (const auto& agg : report.aggregates) {
        Row row;
        row.cells.push_back(dim_cell(agg.key.country, markdown));
        row.cells.push_back(dim_cell(agg.key.status, markdown));
        row.cells.push_back(std::to_string(agg.bank_count));
        row.cells.push_back(fmt_money(agg.total_impairments));
        const bool defined = agg.balance.total_liabilities_and_equity() > 0;
        row.cells.push_back(defined ? fmt_pct(loss_ratio(agg)) : "");
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table mix_table(const Report& report, bool markdown) {
    Table table;
    table.header = {markdown ? "Country" : "country", markdown ? "Status" : "status",
                    markdown ? "Banks" : "banks"};
    table.numeric = {false, false, true};
    const Category mix_order[] = {Category::equity,         Category::subordinated_debt,
                                  Category::senior_debt,    Category::customer_deposits,
                                  Category::bank_deposits,  Category::other_liabilities};
    for (Category cat : mix_order) {
        table.header.push_back(markdown ? pretty(to_string(cat)) + " %"
                                        : std::string(to_string(cat)) + "_pct");
        table.numeric.push_back(true);
        if (cat == Category::senior_debt) {
            table.header.push_back(markdown ? "Long-term debt %" : "long_term_debt_pct");
            table.numeric.push_back(true);
        }
    }
    for (const auto& agg : report.aggregates) {
        const FundingMix mix = funding_mix(agg);
        Row row;
        row.cells.push_back(dim_cell(agg.key.country, markdown));
        row.cells.push_back(dim_cell(agg.key.status, markdown));
        row.cells.push_back(std::to_string(agg.bank_count));
        for (Category cat : mix_order) {
            row.cells.push_back(fmt_pct(mix.share(cat)));
            if (cat == Category::senior_debt) {
                row.cells.push_back(fmt_pct(mix.long_term_debt()));
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table waterfall_table(const Report& report, bool markdown) {
    const bool stress = report.table == TableKind::stress;
    const auto order = report.ladder.bail_in_order();
    const auto aggregates = index_aggregates(report);

    Table table;
    table.header = {markdown ? "Country" : "country", markdown ? "Status" : "status",
                    markdown ? "Banks" : "banks"};
    table.numeric = {false, false, true};
    if (stress) {
        table.header.push_back(markdown ? "Alpha %" : "alpha_pct");
        table.numeric.push_back(true);
    }
    table.header.push_back(markdown ? "Loss (EUR)" : "loss_eur");
    table.numeric.push_back(true);
    for (Category cat : order) {
        table.header.push_back(markdown ? pretty(to_string(cat)) + " %"
                                        : std::string(to_string(cat)) + "_pct");
        table.numeric.push_back(true);
    }
    table.header.push_back(markdown ? "Bailed in %" : "bailed_in_pct");
    table.numeric.push_back(true);
    if (stress) {
        table.header.push_back(markdown ? "Stress / actual" : "stress_to_actual");
        table.numeric.push_back(true);
    }
    table.header.push_back(markdown ? "Residual (EUR)" : "residual_eur");
    table.numeric.push_back(true);
    table.header.push_back(markdown ? "DGS shortfall (EUR)" : "dgs_shortfall_eur");
    table.numeric.push_back(true);

    for (const auto& outcome : report.outcomes) {
        Row row;
        row.cells.push_back(dim_cell(outcome.key.country, markdown));
        row.cells.push_back(dim_cell(outcome.key.status, markdown));
        row.cells.push_back(std::to_string(outcome.bank_count));
        if (stress) row.cells.push_back(fmt_pct(report.scenario.alpha));
        row.cells.push_back(fmt_money(outcome.result.loss));
        for (const auto& cls : outcome.result.classes) {
            row.cells.push_back(fmt_pct(cls.fraction));
        }
        auto agg = aggregates.find(outcome.key);
        const Money total = agg != aggregates.end()
                                ? agg->second->balance.total_liabilities_and_equity()
                                : 0;
        row.cells.push_back(total > 0 ? fmt_pct(outcome.result.total_absorbed() / total) : "");
        if (stress) {
            const Money actual =
                agg != aggregates.end() ? agg->second->total_impairments : 0;
            row.cells.push_back(actual > 0 ? fmt_ratio(outcome.result.loss / actual) : "");
        }
        row.cells.push_back(fmt_money(outcome.result.residual));
        row.cells.push_back(fmt_money(outcome.result.dgs_shortfall));
        table.rows.push_back(std::move(row));
    }
    return table;
}

ordered_json to_json(const Report& report) {
    ordered_json doc;
    doc["table"] = std::string(to_string(report.table));
    doc["base_year"] = report.base_year;
    const bool waterfall =
        report.table == TableKind::bail_in || report.table == TableKind::stress;
    if (waterfall) {
        doc["scenario"] = scenario_json(report.scenario);
    }
    ordered_json groups = ordered_json::array();

    if (!waterfall) {
        for (const auto& agg : report.aggregates) {
            ordered_json g = key_json(agg.key);
            g["banks"] = agg.bank_count;
            if (report.table == TableKind::counts_impairments) {
                g["impairments"] = agg.total_impairments;
                const bool defined = agg.balance.total_liabilities_and_equity() > 0;
                g["loss_ratio"] = defined ? ordered_json(loss_ratio(agg)) : ordered_json(nullptr);
            } else {
                const FundingMix mix = funding_mix(agg);
                ordered_json shares;
                for (Category cat : all_categories) {
                    shares[std::string(to_string(cat))] = mix.share(cat);
                }
                g["shares"] = shares;
                g["long_term_debt"] = mix.long_term_debt();
            }
            groups.push_back(std::move(g));
        }
    } else {
        const auto aggregates = index_aggregates(report);
        for (const auto& outcome : report.outcomes) {
            ordered_json g = key_json(outcome.key);
            g["banks"] = outcome.bank_count;
            if (report.table == TableKind::stress) {
                g["alpha"] = report.scenario.alpha;
            }
            g["loss"] = outcome.result.loss;
            ordered_json classes = ordered_json::array();
            for (const auto& cls : outcome.result.classes) {
                ordered_json c;
                c["class"] = std::string(to_string(cls.category));
                c["capacity"] = cls.capacity;
                c["absorbed"] = cls.absorbed;
                c["fraction"] = cls.fraction;
                classes.push_back(std::move(c));
            }
            g["classes"] = std::move(classes);
            g["residual"] = outcome.result.residual;
            g["dgs_shortfall"] = outcome.result.dgs_shortfall;
            auto agg = aggregates.find(outcome.key);
            const Money total = agg != aggregates.end()
                                    ? agg->second->balance.total_liabilities_and_equity()
                                    : 0;
            g["bailed_in_share"] = total > 0
                                       ? ordered_json(outcome.result.total_absorbed() / total)
                                       : ordered_json(nullptr);
            if (report.table == TableKind::stress) {
                const Money actual =
                    agg != aggregates.end() ? agg->second->total_impairments : 0;
                g["stress_to_actual"] = actual > 0
                                            ? ordered_json(outcome.result.loss / actual)
                                            : ordered_json(nullptr);
            }
            groups.push_back(std::move(g));
        }
    }
    doc["groups"] = std::move(groups);
    return doc;
}

}  // namespace

std::optional<TableKind> parse_table(std::string_view s) {
    if (s == "counts_impairments") return TableKind::counts_impairments;
    if (s == "funding_mix") return TableKind::funding_mix;
    if (s == "bail_in") return TableKind::bail_in;
    if (s == "stress") return TableKind::stress;
    return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "markdown") return OutputFormat::markdown;
    if (s == "json") return OutputFormat::json;
    return std::nullopt;
}

std::string_view to_string(TableKind t) {
    switch (t) {
        case TableKind::counts_impairments: return "counts_impairments";
        case TableKind::funding_mix: return "funding_mix";
        case TableKind::bail_in: return "bail_in";
        case TableKind::stress: return "stress";
    }
    return "unknown";
}

std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::markdown: return "markdown";
        case OutputFormat::json: return "json";
    }
    return "unknown";
}

std::string render(const Report& report, OutputFormat format) {
    if (format == OutputFormat::json) {
        return to_json(report).dump(2) + "\n";
    }
    const bool markdown = format == OutputFormat::markdown;
    Table table;
    switch (report.table) {
        case TableKind::counts_impairments:
            table = counts_table(report, markdown);
            break;
        case TableKind::funding_mix:
            table = mix_table(report, markdown);
            break;
        case TableKind::bail_in:
        case TableKind::stress:
            table = waterfall_table(report, markdown);
            break;
    }
    return markdown ? to_markdown(table) : to_csv(table);
}

}  // namespace bailin
