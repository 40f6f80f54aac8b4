#ifndef NAMESIFT_STREAM_HPP
#define NAMESIFT_STREAM_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "namesift/models.hpp"

namespace namesift {

// Minimal projection of a tweet object; everything the filter and the
// per-language report need.
struct TweetRecord {
    std::string tweet_id;
    std::string user_id;
    std::string screen_name;
    std::string created_at;  // original timestamp text, may be empty
    std::optional<std::int64_t> created_days;  // days since epoch, date part
    std::optional<std::int64_t> followers_count;  // absent = unknown, never 0
    std::optional<std::int64_t> friends_count;
    std::optional<std::int64_t> statuses_count;
    std::string lang = "und";
    std::string raw;  // original record text
};

enum class MalformedReason { Parse, NoUser, NoScreenName };
const char* malformed_reason_name(MalformedReason reason);

struct ParsedTweet {
    bool ok = false;
    TweetRecord record;
    MalformedReason reason = MalformedReason::Parse;
};

// Never throws on bad input; anything without a usable user identity or
// screen name comes back Malformed with a reason code.
ParsedTweet parse_tweet(std::string_view line);

// Canonical one-line JSON of the projection fields.
std::string projection_json(const TweetRecord& record);

// Newline-delimited reader over a plain or gzip file ("-" = stdin); gzip is
// detected from the magic bytes.
class LineSource {
  public:
    explicit LineSource(const std::string& path);
    ~LineSource();
    LineSource(const LineSource&) = delete;
    LineSource& operator=(const LineSource&) = delete;

    // false at end of input; the line comes back without the newline
    bool next(std::string& line);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct FilterOptions {
    bool dedupe = true;  // keyed on user_id; first tweet per account wins
    enum class Emit { FullRecord, Projection };
    Emit emit = Emit::FullRecord;
    std::optional<double> threshold_override;
    int workers = 1;      // <=1 runs inline
    bool ordered = false; // output is written in input order either way
    std::size_t batch_lines = 1024;
};

struct FilterStats {
    std::uint64_t records_seen = 0;
    std::uint64_t records_malformed = 0;
    std::uint64_t prefilter_pass = 0;
    std::uint64_t model_positive = 0;
    std::uint64_t unique_accounts = 0;  // distinct user_ids among positives
    std::uint64_t records_emitted = 0;
    double wall_seconds = 0.0;
    double records_per_second = 0.0;
    bool complete = false;
    std::string error;
};

// Single pass over the input; emits every record whose screen name passes
// the prefilter and scores at or above the decision threshold.  Memory is
// bounded by the set of matched account ids plus constant buffers.
FilterStats filter_stream(LineSource& input, std::ostream& matched,
                          const TrainedModel& model,
                          const FilterOptions& options = {});

FilterStats filter_file(const std::string& input_path, const std::string& output_path,
                        const TrainedModel& model, const FilterOptions& options = {});

void write_filter_stats(const FilterStats& stats, std::ostream& out);

struct BenchResult {
    int repetitions = 0;
    std::vector<double> wall_seconds;
    double median_seconds = 0.0;
    double median_rps = 0.0;
    std::uint64_t records = 0;
};

// Repeated filter runs against a null sink; the median wall time is the
// reported figure.
BenchResult throughput_bench(const std::string& input_path, const TrainedModel& model,
                             int repetitions, const FilterOptions& options = {});
void write_bench(const BenchResult& bench, std::ostream& out);

// Reads filter output and keeps the first record per user_id.
std::vector<TweetRecord> load_unique_accounts(const std::string& path);

}  // namespace namesift

#endif
