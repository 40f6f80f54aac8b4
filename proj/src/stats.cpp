#include "namesift/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "namesift/error.hpp"

namespace namesift {

const std::vector<std::string> kAccountMetrics = {"age_days", "followers", "friends",
                                                  "statuses"};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// linear interpolation between closest ranks over a sorted array
double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return kNaN;
    double h = static_cast<double>(sorted.size() - 1) * p;
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

MetricSummary summarize_values(std::vector<double> values) {
    MetricSummary s;
    s.n = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.q25 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.50);
    s.q75 = quantile_sorted(values, 0.75);
    s.max = values.back();
    double sum = 0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double var = 0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(values.size()));
    return s;
}

struct MetricColumns {
    std::vector<double> age, followers, friends, statuses;
};

GroupSummary build_group(const std::string& language, const MetricColumns& cols,
                         std::uint64_t n_accounts) {
    GroupSummary g;
    g.language = language;
    g.n_accounts = n_accounts;
    g.metrics["age_days"] = summarize_values(cols.age);
    g.metrics["followers"] = summarize_values(cols.followers);
    g.metrics["friends"] = summarize_values(cols.friends);
    g.metrics["statuses"] = summarize_values(cols.statuses);
    return g;
}

std::string group_of(const TweetRecord& rec) {
    if (rec.lang.empty() || rec.lang == "und") return "other";
    return rec.lang;
}

}  // namespace

SummaryTable summarize(const std::vector<TweetRecord>& accounts,
                       std::int64_t snapshot_days, int top_k_languages) {
    if (accounts.empty()) throw data_error("summarize: empty account set");

    SummaryTable table;
    table.total_accounts = accounts.size();

    std::unordered_map<std::string, std::uint64_t> lang_counts;
    for (const auto& rec : accounts) {
        if (group_of(rec) != "other") ++lang_counts[rec.lang];
    }
    std::vector<std::pair<std::string, std::uint64_t>> ranked(lang_counts.begin(),
                                                              lang_counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > static_cast<std::size_t>(top_k_languages)) {
        ranked.resize(top_k_languages);
    }
    std::unordered_map<std::string, std::size_t> group_index;
    for (std::size_t i = 0; i < ranked.size(); ++i) group_index[ranked[i].first] = i;

    std::vector<MetricColumns> columns(ranked.size() + 1);  // +1 for "other"
    std::vector<std::uint64_t> group_counts(ranked.size() + 1, 0);
    MetricColumns overall;

    for (const auto& rec : accounts) {
        std::string grp = group_of(rec);
        std::size_t gi = ranked.size();  // "other"
        if (auto it = group_index.find(grp); it != group_index.end()) gi = it->second;
        ++group_counts[gi];

        auto add = [&](std::vector<MetricColumns*> dests, double v,
                       std::vector<double> MetricColumns::*field) {
            for (auto* d : dests) (d->*field).push_back(v);
        };
        std::vector<MetricColumns*> dests = {&columns[gi], &overall};
        if (rec.created_days) {
            std::int64_t age = snapshot_days - *rec.created_days;
            if (age < 0) {
                ++table.clamped_ages;
                age = 0;
            }
            add(dests, static_cast<double>(age), &MetricColumns::age);
        }
        if (rec.followers_count) {
            add(dests, static_cast<double>(*rec.followers_count),
                &MetricColumns::followers);
        }
        if (rec.friends_count) {
            add(dests, static_cast<double>(*rec.friends_count), &MetricColumns::friends);
        }
        if (rec.statuses_count) {
            add(dests, static_cast<double>(*rec.statuses_count), &MetricColumns::statuses);
        }
    }

    table.overall = build_group("all", overall, accounts.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        table.groups.push_back(build_group(ranked[i].first, columns[i], group_counts[i]));
    }
    table.groups.push_back(
        build_group("other", columns[ranked.size()], group_counts[ranked.size()]));
    return table;
}

ComparisonReport compare(const SummaryTable& left, const SummaryTable& right) {
    ComparisonReport report;
    for (const auto& metric : kAccountMetrics) {
        auto li = left.overall.metrics.find(metric);
        auto ri = right.overall.metrics.find(metric);
        if (li == left.overall.metrics.end() || ri == right.overall.metrics.end()) {
            continue;
        }
        if (li->second.n == 0 || ri->second.n == 0) continue;
        CompareEntry e;
        e.metric = metric;
        e.left_median = li->second.median;
        e.right_median = ri->second.median;
        e.ratio = e.right_median != 0.0 ? e.left_median / e.right_median : kNaN;
        e.difference = e.left_median - e.right_median;
        if (e.left_median < e.right_median) e.direction = "lower";
        else if (e.left_median > e.right_median) e.direction = "higher";
        else e.direction = "equal";
        report.entries.push_back(std::move(e));
    }
    if (report.entries.empty()) {
        throw data_error("compare: tables share no populated metrics");
    }
    return report;
}

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

void write_group_csv(const GroupSummary& g, std::ostream& out) {
    for (const auto& [metric, s] : g.metrics) {
        const std::pair<const char*, double> stats[] = {
            {"min", s.min},   {"q25", s.q25},     {"median", s.median},
            {"q75", s.q75},   {"max", s.max},     {"mean", s.mean},
            {"std", s.stddev}, {"n", static_cast<double>(s.n)},
        };
        for (const auto& [name, value] : stats) {
            out << g.language << ',' << metric << ',' << name << ',' << fmt(value)
                << '\n';
        }
    }
    out << g.language << ",accounts,n,"
        << fmt(static_cast<double>(g.n_accounts)) << '\n';
}

}  // namespace

void write_summary_csv(const SummaryTable& table, std::ostream& out) {
    out << "group,metric,statistic,value\n";
    write_group_csv(table.overall, out);
    for (const auto& g : table.groups) write_group_csv(g, out);
}

SummaryTable read_summary_csv(std::istream& in) {
    SummaryTable table;
    std::map<std::string, GroupSummary> groups;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == "group,metric,statistic,value") continue;
        }
        std::istringstream row(line);
        std::string group, metric, statistic, value_text;
        if (!std::getline(row, group, ',') || !std::getline(row, metric, ',') ||
            !std::getline(row, statistic, ',') || !std::getline(row, value_text)) {
            throw data_error("summary CSV: bad row: " + line);
        }
        double value = 0.0;
        try {
            value = std::stod(value_text);
        } catch (const std::exception&) {
            throw data_error("summary CSV: bad value in row: " + line);
        }
        GroupSummary& g = groups[group];
        g.language = group;
        if (metric == "accounts") {
            g.n_accounts = static_cast<std::uint64_t>(value);
            continue;
        }
        MetricSummary& s = g.metrics[metric];
        if (statistic == "min") s.min = value;
        else if (statistic == "q25") s.q25 = value;
        else if (statistic == "median") s.median = value;
        else if (statistic == "q75") s.q75 = value;
        else if (statistic == "max") s.max = value;
        else if (statistic == "mean") s.mean = value;
        else if (statistic == "std") s.stddev = value;
        else if (statistic == "n") s.n = static_cast<std::uint64_t>(value);
        else throw data_error("summary CSV: unknown statistic '" + statistic + "'");
        if (s.n == 0) s.n = 1;  // fixtures may carry medians only
    }
    for (auto& [name, g] : groups) {
        if (name == "all") {
            table.overall = g;
        } else {
            table.groups.push_back(g);
        }
        table.total_accounts += name == "all" ? 0 : g.n_accounts;
    }
    if (table.overall.metrics.empty() && table.groups.empty()) {
        throw data_error("summary CSV: no rows");
    }
    return table;
}

SummaryTable read_summary_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open summary CSV: " + path);
    return read_summary_csv(in);
}

void write_summary_text(const SummaryTable& table, std::ostream& out) {
    std::vector<const GroupSummary*> cols;
    cols.push_back(&table.overall);
    for (const auto& g : table.groups) cols.push_back(&g);

    auto cell = [](const std::string& text) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%12s", text.c_str());
        return std::string(buf);
    };
    auto num = [&](double v) {
        if (std::isnan(v)) return cell("-");
        char buf[32];
        if (std::abs(v - std::round(v)) < 1e-9 && std::abs(v) < 1e15) {
            std::snprintf(buf, sizeof(buf), "%.0f", v);
        } else {
            std::snprintf(buf, sizeof(buf), "%.1f", v);
        }
        return cell(buf);
    };

    out << "snapshot: " << table.snapshot_date << "  accounts: " << table.total_accounts;
    if (table.clamped_ages > 0) out << "  clamped_ages: " << table.clamped_ages;
    out << '\n';
    out << cell("language");
    for (const auto* g : cols) out << cell(g->language);
    out << '\n' << cell("accounts");
    for (const auto* g : cols) out << num(static_cast<double>(g->n_accounts));
    out << '\n';

    const char* stat_names[] = {"min", "q25", "median", "q75", "max", "mean", "std"};
    for (const auto& metric : kAccountMetrics) {
        out << metric << '\n';
        for (const char* stat : stat_names) {
            out << cell(stat);
            for (const auto* g : cols) {
                auto it = g->metrics.find(metric);
                if (it == g->metrics.end() || it->second.n == 0) {
                    out << cell("-");
                    continue;
                }
                const MetricSummary& s = it->second;
                double v = 0;
                if (std::string(stat) == "min") v = s.min;
                else if (std::string(stat) == "q25") v = s.q25;
                else if (std::string(stat) == "median") v = s.median;
                else if (std::string(stat) == "q75") v = s.q75;
                else if (std::string(stat) == "max") v = s.max;
                else if (std::string(stat) == "mean") v = s.mean;
                else v = s.stddev;
                out << num(v);
            }
            out << '\n';
        }
    }
}

void write_comparison(const ComparisonReport& report, std::ostream& out) {
    out << "metric,left_median,right_median,ratio,difference,direction,reading\n";
    for (const auto& e : report.entries) {
        const char* reading = "";
        if (e.metric == "age_days") {
            reading = e.direction == "lower" ? "younger"
                      : e.direction == "higher" ? "older" : "same age";
        } else if (e.metric == "followers" || e.metric == "friends") {
            reading = e.direction == "lower" ? "less popular"
                      : e.direction == "higher" ? "more popular" : "equally popular";
        } else if (e.metric == "statuses") {
            reading = e.direction == "lower" ? "less active"
                      : e.direction == "higher" ? "more active" : "equally active";
        }
        out << e.metric << ',' << fmt(e.left_median) << ',' << fmt(e.right_median)
            << ',' << fmt(e.ratio) << ',' << fmt(e.difference) << ',' << e.direction
            << ',' << reading << '\n';
    }
}

}  // namespace namesift
