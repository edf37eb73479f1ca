#include "bailin/seniority_ladder.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "bailin/errors.hpp"

namespace bailin {

SeniorityLadder SeniorityLadder::standard() {
    SeniorityLadder ladder;
    ladder.classes = {
        {Category::equity, 1, true},
        {Category::subordinated_debt, 2, true},
        {Category::senior_debt, 3, true},
        {Category::customer_deposits, 4, true},
        {Category::bank_deposits, 0, false},
        {Category::other_liabilities, 0, false},
    };
    ladder.covered_deposit_share = 0.0;
    return ladder;
}

std::vector<Category> SeniorityLadder::bail_in_order() const {
    std::vector<const LiabilityClass*> ranked;
    for (const auto& cls : classes) {
        if (cls.bail_inable) ranked.push_back(&cls);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const LiabilityClass* a, const LiabilityClass* b) { return a->rank < b->rank; });
    std::vector<Category> order;
    order.reserve(ranked.size());
    for (const auto* cls : ranked) order.push_back(cls->category);
    return order;
}

bool SeniorityLadder::is_exempt(Category c) const {
    for (const auto& cls : classes) {
        if (cls.category == c) return !cls.bail_inable;
    }
    return true;  // unlisted categories never enter the waterfall
}

void SeniorityLadder::validate() const {
    std::set<Category> seen;
    std::set<int> ranks;
    for (const auto& cls : classes) {
        if (!seen.insert(cls.category).second) {
            throw ConfigError("ladder lists " + std::string(to_string(cls.category)) + " twice");
        }
        if (cls.bail_inable) {
            if (cls.rank < 1) {
                throw ConfigError("ladder rank for " + std::string(to_string(cls.category)) +
                                  " must be a positive integer");
            }
            if (!ranks.insert(cls.rank).second) {
                throw ConfigError("ladder rank " + std::to_string(cls.rank) + " assigned twice");
            }
        } else if (cls.rank != 0) {
            throw ConfigError("exempt class " + std::string(to_string(cls.category)) +
                              " must not carry a rank");
        }
    }
    if (ranks.empty()) {
        throw ConfigError("ladder defines no bail-inable class");
    }
    // ranks must be 1..N with no gaps
    if (*ranks.begin() != 1 || *ranks.rbegin() != static_cast<int>(ranks.size())) {
        throw ConfigError("ladder ranks must be contiguous starting at 1");
    }
    if (!(covered_deposit_share >= 0.0 && covered_deposit_share <= 1.0)) {
        throw ConfigError("covered_deposit_share must lie in [0, 1]");
    }
}

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

Category category_or_throw(std::string_view name, int line_no) {
    auto cat = parse_category(trim(name));
    if (!cat) {
        throw ConfigError("ladder line " + std::to_string(line_no) + ": unknown category '" +
                          std::string(trim(name)) + "'");
    }
    return *cat;
}

}  // namespace

SeniorityLadder parse_ladder(std::istream& in) {
    SeniorityLadder ladder;
    std::vector<std::pair<int, Category>> ranked;
    std::vector<Category> exempt;

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
            throw ConfigError("ladder line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string_view key = trim(sv.substr(0, eq));
        std::string_view value = trim(sv.substr(eq + 1));

        if (key.starts_with("rank.")) {
            std::string_view num = key.substr(5);
            int rank = 0;
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), rank);
            if (ec != std::errc{} || ptr != num.data() + num.size() || rank < 1) {
                throw ConfigError("ladder line " + std::to_string(line_no) +
                                  ": bad rank key '" + std::string(key) + "'");
            }
            ranked.emplace_back(rank, category_or_throw(value, line_no));
        } else if (key == "exempt") {
            std::string_view rest = value;
            while (!rest.empty()) {
                auto comma = rest.find(',');
                std::string_view item = rest.substr(0, comma);
                if (!trim(item).empty()) exempt.push_back(category_or_throw(item, line_no));
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        } else if (key == "covered_deposit_share") {
            try {
                size_t pos = 0;
                ladder.covered_deposit_share = std::stod(std::string(value), &pos);
                if (pos != value.size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw ConfigError("ladder line " + std::to_string(line_no) +
                                  ": bad covered_deposit_share '" + std::string(value) + "'");
            }
        } else {
            throw ConfigError("ladder line " + std::to_string(line_no) + ": unknown key '" +
                              std::string(key) + "'");
        }
    }

    std::sort(ranked.begin(), ranked.end());
    for (const auto& [rank, cat] : ranked) {
        ladder.classes.push_back({cat, rank, true});
    }
    for (Category cat : exempt) {
        ladder.classes.push_back({cat, 0, false});
    }
    // unmentioned categories are exempt
    for (Category cat : all_categories) {
        bool listed = std::any_of(ladder.classes.begin(), ladder.classes.end(),
                                  [cat](const LiabilityClass& c) { return c.category == cat; });
        if (!listed) ladder.classes.push_back({cat, 0, false});
    }

    ladder.validate();
    return ladder;
}

SeniorityLadder load_ladder(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open ladder file: " + file.string());
    }
    try {
        return parse_ladder(in);
    } catch (const ConfigError& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
}

}  // namespace bailin
