#ifndef NAMESIFT_STATS_HPP
#define NAMESIFT_STATS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "namesift/stream.hpp"

namespace namesift {

// Metric keys used throughout: age_days, followers, friends, statuses.
extern const std::vector<std::string> kAccountMetrics;

struct MetricSummary {
    double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
    double mean = 0, stddev = 0;
    std::uint64_t n = 0;  // accounts with a known value for this metric
};

struct GroupSummary {
    std::string language;
    std::uint64_t n_accounts = 0;
    std::map<std::string, MetricSummary> metrics;
};

struct SummaryTable {
    GroupSummary overall;              // all accounts pooled
    std::vector<GroupSummary> groups;  // top-k languages then "other"
    std::string snapshot_date;
    std::uint64_t total_accounts = 0;
    std::uint64_t clamped_ages = 0;  // created after the snapshot, clamped to 0
};

// Per-language characterization of a deduped account set.  Quantiles use
// linear interpolation between closest ranks; age_days is the floor of the
// day difference to the snapshot date, clamped at 0.  Accounts whose tweet
// language is missing or "und" fall into "other".
SummaryTable summarize(const std::vector<TweetRecord>& accounts,
                       std::int64_t snapshot_days, int top_k_languages);

struct CompareEntry {
    std::string metric;
    double left_median = 0;
    double right_median = 0;
    double ratio = 0;       // left / right; NaN when right is 0
    double difference = 0;  // left - right
    std::string direction;  // "lower", "higher" or "equal"
};

struct ComparisonReport {
    std::vector<CompareEntry> entries;
};

// Median comparison over the overall rows of two tables (e.g. filtered bots
// against a baseline fixture).  Throws data_error when the tables share no
// metrics.
ComparisonReport compare(const SummaryTable& left, const SummaryTable& right);

// CSV schema: group,metric,statistic,value — also the baseline fixture format.
void write_summary_csv(const SummaryTable& table, std::ostream& out);
SummaryTable read_summary_csv(std::istream& in);
SummaryTable read_summary_csv_file(const std::string& path);

// Aligned plain-text table, metric blocks by row and groups by column.
void write_summary_text(const SummaryTable& table, std::ostream& out);

void write_comparison(const ComparisonReport& report, std::ostream& out);

}  // namespace namesift

#endif
