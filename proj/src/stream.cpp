#include "namesift/stream.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_set>

#include <unistd.h>
#include <zlib.h>

#include <json.hpp>

#include "namesift/dates.hpp"
#include "namesift/error.hpp"

namespace namesift {

using json = nlohmann::json;

const char* malformed_reason_name(MalformedReason reason) {
    switch (reason) {
        case MalformedReason::Parse: return "parse";
        case MalformedReason::NoUser: return "no_user";
        case MalformedReason::NoScreenName: return "no_screen_name";
    }
    return "unknown";
}

namespace {

std::string id_string(const json& obj, const char* str_key, const char* num_key) {
    if (auto it = obj.find(str_key); it != obj.end() && it->is_string()) {
        return it->get<std::string>();
    }
    if (auto it = obj.find(num_key); it != obj.end() && it->is_number_integer()) {
        return std::to_string(it->get<std::int64_t>());
    }
    return {};
}

std::optional<std::int64_t> count_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) return std::nullopt;
    std::int64_t v = it->get<std::int64_t>();
    if (v < 0) return std::nullopt;  // negative counts treated as unknown
    return v;
}

}  // namespace

ParsedTweet parse_tweet(std::string_view line) {
    ParsedTweet out;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        out.reason = MalformedReason::Parse;
        return out;
    }
    auto user_it = doc.find("user");
    if (user_it == doc.end() || !user_it->is_object()) {
        out.reason = MalformedReason::NoUser;
        return out;
    }
    const json& user = *user_it;

    TweetRecord rec;
    rec.user_id = id_string(user, "id_str", "id");
    if (rec.user_id.empty()) {
        out.reason = MalformedReason::NoUser;
        return out;
    }
    if (auto it = user.find("screen_name"); it != user.end() && it->is_string()) {
        rec.screen_name = it->get<std::string>();
    }
    if (rec.screen_name.empty()) {
        out.reason = MalformedReason::NoScreenName;
        return out;
    }

    rec.tweet_id = id_string(doc, "id_str", "id");
    if (auto it = user.find("created_at"); it != user.end() && it->is_string()) {
        rec.created_at = it->get<std::string>();
        rec.created_days = parse_tweet_timestamp(rec.created_at);
    }
    rec.followers_count = count_field(user, "followers_count");
    rec.friends_count = count_field(user, "friends_count");
    rec.statuses_count = count_field(user, "statuses_count");
    if (auto it = doc.find("lang"); it != doc.end() && it->is_string()) {
        rec.lang = it->get<std::string>();
        if (rec.lang.empty()) rec.lang = "und";
    }
    rec.raw.assign(line.data(), line.size());

    out.ok = true;
    out.record = std::move(rec);
    return out;
}

std::string projection_json(const TweetRecord& record) {
    json doc;
    doc["created_at"] = record.created_at;
    doc["followers_count"] =
        record.followers_count ? json(*record.followers_count) : json(nullptr);
    doc["friends_count"] =
        record.friends_count ? json(*record.friends_count) : json(nullptr);
    doc["lang"] = record.lang;
    doc["screen_name"] = record.screen_name;
    doc["statuses_count"] =
        record.statuses_count ? json(*record.statuses_count) : json(nullptr);
    doc["tweet_id"] = record.tweet_id;
    doc["user_id"] = record.user_id;
    return doc.dump();
}

// ---------------------------------------------------------------------------
// LineSource

struct LineSource::Impl {
    gzFile file = nullptr;
    std::string buffer;
    std::size_t pos = 0;
    bool eof = false;

    bool fill() {
        char chunk[1 << 16];
        int got = gzread(file, chunk, sizeof(chunk));
        if (got <= 0) {
            eof = true;
            return false;
        }
        buffer.append(chunk, static_cast<std::size_t>(got));
        return true;
    }
};

LineSource::LineSource(const std::string& path) : impl_(new Impl) {
    // zlib reads both gzip and plain content through the same handle
    if (path == "-") {
        impl_->file = gzdopen(dup(STDIN_FILENO), "rb");
    } else {
        impl_->file = gzopen(path.c_str(), "rb");
    }
    if (!impl_->file) throw io_error("cannot open input: " + path);
    gzbuffer(impl_->file, 1 << 17);
}

LineSource::~LineSource() {
    if (impl_ && impl_->file) gzclose(impl_->file);
}

bool LineSource::next(std::string& line) {
    Impl& s = *impl_;
    for (;;) {
        auto nl = s.buffer.find('\n', s.pos);
        if (nl != std::string::npos) {
            line.assign(s.buffer, s.pos, nl - s.pos);
            s.pos = nl + 1;
            if (s.pos > (1u << 20) || s.pos == s.buffer.size()) {
                s.buffer.erase(0, s.pos);
                s.pos = 0;
            }
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
        if (s.eof || !s.fill()) {
            if (s.pos < s.buffer.size()) {  // trailing line without newline
                line.assign(s.buffer, s.pos, s.buffer.size() - s.pos);
                s.buffer.clear();
                s.pos = 0;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return true;
            }
            return false;
        }
    }
}

// ---------------------------------------------------------------------------
// filter pipeline

namespace {

// Per-record verdict computed by a worker; emission and counting happen
// serially in input order, so the match set is identical for any worker
// count.
struct Item {
    bool malformed = false;
    bool candidate = false;
    bool positive = false;
    std::string user_id;
    std::string payload;
};

struct Batch {
    std::uint64_t seq = 0;
    std::vector<std::string> lines;
};

struct ResultBatch {
    std::vector<Item> items;
};

Item process_line(const std::string& line, const TrainedModel& model,
                  double threshold, FilterOptions::Emit emit) {
    Item item;
    ParsedTweet parsed = parse_tweet(line);
    if (!parsed.ok) {
        item.malformed = true;
        return item;
    }
    const TweetRecord& rec = parsed.record;
    if (!prefilter(rec.screen_name).candidate) return item;
    item.candidate = true;
    if (score_text(model, rec.screen_name) < threshold) return item;
    item.positive = true;
    item.user_id = rec.user_id;
    item.payload = emit == FilterOptions::Emit::FullRecord ? rec.raw
                                                           : projection_json(rec);
    return item;
}

class Accounting {
  public:
    Accounting(FilterStats& stats, std::ostream& out, bool dedupe)
        : stats_(stats), out_(out), dedupe_(dedupe) {}

    // in input order
    bool consume(const Item& item) {
        ++stats_.records_seen;
        if (item.malformed) {
            ++stats_.records_malformed;
            return true;
        }
        if (!item.candidate) return true;
        ++stats_.prefilter_pass;
        if (!item.positive) return true;
        ++stats_.model_positive;
        bool first_sighting = seen_accounts_.insert(item.user_id).second;
        if (first_sighting) ++stats_.unique_accounts;
        if (!dedupe_ || first_sighting) {
            out_ << item.payload << '\n';
            ++stats_.records_emitted;
            if (!out_.good()) {
                stats_.error = "output sink failed";
                return false;
            }
        }
        return true;
    }

  private:
    FilterStats& stats_;
    std::ostream& out_;
    bool dedupe_;
    std::unordered_set<std::string> seen_accounts_;
};

struct PipelineShared {
    std::mutex mu;
    std::condition_variable job_cv;     // workers wait here
    std::condition_variable space_cv;   // reader waits here
    std::condition_variable done_cv;    // writer waits here
    std::deque<Batch> jobs;
    std::map<std::uint64_t, ResultBatch> results;
    std::size_t in_flight = 0;  // read but not yet written
    std::size_t max_in_flight = 0;
    bool closed = false;
    bool abort = false;
    std::string failure;
};

FilterStats run_parallel(LineSource& input, std::ostream& matched,
                         const TrainedModel& model, double threshold,
                         const FilterOptions& options) {
    FilterStats stats;
    Accounting accounting(stats, matched, options.dedupe);

    PipelineShared shared;
    shared.max_in_flight = static_cast<std::size_t>(options.workers) * 4;

    auto worker_fn = [&]() {
        for (;;) {
            Batch batch;
            {
                std::unique_lock lock(shared.mu);
                shared.job_cv.wait(lock, [&] {
                    return !shared.jobs.empty() || shared.closed || shared.abort;
                });
                if (shared.abort || (shared.jobs.empty() && shared.closed)) return;
                batch = std::move(shared.jobs.front());
                shared.jobs.pop_front();
            }
            ResultBatch result;
            try {
                result.items.reserve(batch.lines.size());
                for (const auto& line : batch.lines) {
                    result.items.push_back(
                        process_line(line, model, threshold, options.emit));
                }
            } catch (const std::exception& e) {
                std::lock_guard lock(shared.mu);
                shared.abort = true;
                if (shared.failure.empty()) shared.failure = e.what();
                shared.job_cv.notify_all();
                shared.space_cv.notify_all();
                shared.done_cv.notify_all();
                return;
            }
            {
                std::lock_guard lock(shared.mu);
                shared.results.emplace(batch.seq, std::move(result));
            }
            shared.done_cv.notify_one();
        }
    };

    std::uint64_t total_batches = 0;
    bool writer_failed = false;

    auto writer_fn = [&]() {
        std::uint64_t next = 0;
        for (;;) {
            ResultBatch result;
            {
                std::unique_lock lock(shared.mu);
                shared.done_cv.wait(lock, [&] {
                    return shared.results.count(next) > 0 ||
                           (shared.closed && shared.in_flight == 0) || shared.abort;
                });
                auto it = shared.results.find(next);
                if (it == shared.results.end()) return;  // drained or aborted
                result = std::move(it->second);
                shared.results.erase(it);
            }
            for (const auto& item : result.items) {
                if (!accounting.consume(item)) {
                    std::lock_guard lock(shared.mu);
                    shared.abort = true;
                    writer_failed = true;
                    break;
                }
            }
            {
                std::lock_guard lock(shared.mu);
                --shared.in_flight;
                if (shared.abort) break;
            }
            shared.space_cv.notify_one();
            shared.done_cv.notify_one();
            ++next;
        }
        shared.job_cv.notify_all();
        shared.space_cv.notify_all();
    };

    std::vector<std::thread> workers;
    workers.reserve(options.workers);
    for (int i = 0; i < options.workers; ++i) workers.emplace_back(worker_fn);
    std::thread writer(writer_fn);

    // reader runs on the calling thread
    Batch batch;
    batch.lines.reserve(options.batch_lines);
    std::string line;
    bool aborted = false;
    while (input.next(line)) {
        batch.lines.push_back(std::move(line));
        if (batch.lines.size() >= options.batch_lines) {
            std::unique_lock lock(shared.mu);
            shared.space_cv.wait(lock, [&] {
                return shared.in_flight < shared.max_in_flight || shared.abort;
            });
            if (shared.abort) { aborted = true; break; }
            batch.seq = total_batches++;
            ++shared.in_flight;
            shared.jobs.push_back(std::move(batch));
            lock.unlock();
            shared.job_cv.notify_one();
            batch = Batch{};
            batch.lines.reserve(options.batch_lines);
        }
    }
    if (!aborted && !batch.lines.empty()) {
        std::unique_lock lock(shared.mu);
        shared.space_cv.wait(lock, [&] {
            return shared.in_flight < shared.max_in_flight || shared.abort;
        });
        if (!shared.abort) {
            batch.seq = total_batches++;
            ++shared.in_flight;
            shared.jobs.push_back(std::move(batch));
            lock.unlock();
            shared.job_cv.notify_one();
        }
    }
    {
        std::lock_guard lock(shared.mu);
        shared.closed = true;
    }
    shared.job_cv.notify_all();
    shared.done_cv.notify_all();

    for (auto& w : workers) w.join();
    shared.done_cv.notify_all();
    writer.join();

    stats.complete = !writer_failed && !shared.abort;
    if (!shared.failure.empty() && stats.error.empty()) stats.error = shared.failure;
    if (!stats.complete && stats.error.empty()) stats.error = "pipeline aborted";
    return stats;
}

FilterStats run_serial(LineSource& input, std::ostream& matched,
                       const TrainedModel& model, double threshold,
                       const FilterOptions& options) {
    FilterStats stats;
    Accounting accounting(stats, matched, options.dedupe);
    std::string line;
    try {
        while (input.next(line)) {
            if (!accounting.consume(
                    process_line(line, model, threshold, options.emit))) {
                stats.complete = false;
                return stats;
            }
        }
    } catch (const std::exception& e) {
        stats.complete = false;
        stats.error = e.what();
        return stats;
    }
    stats.complete = true;
    return stats;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct NullBuffer : std::streambuf {
    int overflow(int c) override { return c; }
    std::streamsize xsputn(const char*, std::streamsize n) override { return n; }
};

}  // namespace

FilterStats filter_stream(LineSource& input, std::ostream& matched,
                          const TrainedModel& model, const FilterOptions& options) {
    double threshold = options.threshold_override.value_or(model.threshold);
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw data_error("filter threshold must lie in (0,1)");
    }
    auto start = std::chrono::steady_clock::now();
    FilterStats stats = options.workers > 1
                            ? run_parallel(input, matched, model, threshold, options)
                            : run_serial(input, matched, model, threshold, options);
    matched.flush();
    if (!matched.good() && stats.complete) {
        stats.complete = false;
        stats.error = "output sink failed";
    }
    auto end = std::chrono::steady_clock::now();
    stats.wall_seconds = std::chrono::duration<double>(end - start).count();
    stats.records_per_second =
        stats.wall_seconds > 0.0
            ? static_cast<double>(stats.records_seen) / stats.wall_seconds
            : 0.0;
    return stats;
}

FilterStats filter_file(const std::string& input_path, const std::string& output_path,
                        const TrainedModel& model, const FilterOptions& options) {
    LineSource input(input_path);
    if (output_path == "-") {
        return filter_stream(input, std::cout, model, options);
    }
    std::ofstream out(output_path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open output: " + output_path);
    return filter_stream(input, out, model, options);
}

void write_filter_stats(const FilterStats& stats, std::ostream& out) {
    char buf[64];
    out << "records_seen: " << stats.records_seen << '\n'
        << "records_malformed: " << stats.records_malformed << '\n'
        << "prefilter_pass: " << stats.prefilter_pass << '\n'
        << "model_positive: " << stats.model_positive << '\n'
        << "unique_accounts: " << stats.unique_accounts << '\n'
        << "records_emitted: " << stats.records_emitted << '\n';
    std::snprintf(buf, sizeof(buf), "%.3f", stats.wall_seconds);
    out << "wall_seconds: " << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.1f", stats.records_per_second);
    out << "records_per_second: " << buf << '\n'
        << "complete: " << (stats.complete ? "true" : "false") << '\n';
    if (!stats.error.empty()) out << "error: " << stats.error << '\n';
}

BenchResult throughput_bench(const std::string& input_path, const TrainedModel& model,
                             int repetitions, const FilterOptions& options) {
    if (repetitions < 1) throw data_error("throughput_bench: repetitions must be >= 1");
    BenchResult bench;
    bench.repetitions = repetitions;
    NullBuffer null_buffer;
    std::ostream null_stream(&null_buffer);
    for (int r = 0; r < repetitions; ++r) {
        LineSource input(input_path);
        FilterStats stats = filter_stream(input, null_stream, model, options);
        bench.wall_seconds.push_back(stats.wall_seconds);
        bench.records = stats.records_seen;
    }
    bench.median_seconds = median(bench.wall_seconds);
    bench.median_rps = bench.median_seconds > 0.0 && bench.records > 0
                           ? static_cast<double>(bench.records) / bench.median_seconds
                           : 0.0;
    return bench;
}

void write_bench(const BenchResult& bench, std::ostream& out) {
    out << "records: " << bench.records << '\n'
        << "repetitions: " << bench.repetitions << '\n';
    out << "runs_seconds:";
    for (double s : bench.wall_seconds) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %.3f", s);
        out << buf;
    }
    out << '\n';
    if (bench.records == 0 || bench.median_rps <= 0.0) {
        out << "median_records_per_second: n/a\n";
        return;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", bench.median_rps);
    out << "median_records_per_second: " << buf << '\n';
    // context only: single-node time for a capture of 433M records
    double hours = 433e6 / bench.median_rps / 3600.0;
    std::snprintf(buf, sizeof(buf), "%.1f", hours);
    out << "extrapolated_hours_for_433M_records: " << buf << '\n';
}

std::vector<TweetRecord> load_unique_accounts(const std::string& path) {
    LineSource input(path);
    std::vector<TweetRecord> accounts;
    std::unordered_set<std::string> seen;
    std::string line;
    while (input.next(line)) {
        if (line.empty()) continue;
        ParsedTweet parsed = parse_tweet(line);
        if (!parsed.ok) continue;
        if (seen.insert(parsed.record.user_id).second) {
            accounts.push_back(std::move(parsed.record));
        }
    }
    return accounts;
}

}  // namespace namesift
