#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include <zlib.h>

#include "namesift/dates.hpp"
#include "namesift/error.hpp"
#include "namesift/stream.hpp"
#include "support.hpp"

using namespace namesift;

namespace {

std::string tweet_line(const std::string& tweet_id, const std::string& user_id,
                       const std::string& screen_name,
                       const std::string& created_at = "Sat Jun 09 13:00:00 +0000 2018",
                       long followers = 10, long friends = 20, long statuses = 30,
                       const std::string& lang = "en") {
    std::ostringstream out;
    out << "{\"id_str\":\"" << tweet_id << "\",\"lang\":\"" << lang
        << "\",\"text\":\"hello\",\"user\":{\"id_str\":\"" << user_id
        << "\",\"screen_name\":\"" << screen_name << "\",\"created_at\":\""
        << created_at << "\",\"followers_count\":" << followers
        << ",\"friends_count\":" << friends << ",\"statuses_count\":" << statuses
        << "}}";
    return out.str();
}

TrainedModel small_model() {
    auto corpus = load_corpus({2000, 2000, 71, HumanSource::Generator, ""}).corpus;
    return train_logreg(corpus, FeatureConfig{});
}

// random 15-char handle guaranteed past the heuristic gate
std::string planted_handle(Rng& rng) {
    for (;;) {
        std::string h = generate_random_handle(rng);
        if (prefilter(h).candidate) return h;
    }
}

struct Synthetic {
    std::string ndjson;
    std::set<std::string> planted_users;
    std::uint64_t lines = 0;
};

Synthetic synthetic_stream(std::size_t n_background, std::size_t n_planted,
                           std::uint64_t seed, std::size_t repeats_per_planted = 2) {
    Synthetic out;
    Rng rng(seed);
    auto style = HumanStyleConfig::defaults();
    std::ostringstream buf;
    std::uint64_t tweet_seq = 1;
    for (std::size_t i = 0; i < n_background; ++i) {
        std::string user = "u" + std::to_string(100000 + i);
        buf << tweet_line("t" + std::to_string(tweet_seq++), user,
                          generate_human_handle(rng, style))
            << '\n';
        ++out.lines;
    }
    for (std::size_t i = 0; i < n_planted; ++i) {
        std::string user = "bot" + std::to_string(i);
        std::string handle = planted_handle(rng);
        out.planted_users.insert(user);
        for (std::size_t r = 0; r < repeats_per_planted; ++r) {
            buf << tweet_line("t" + std::to_string(tweet_seq++), user, handle) << '\n';
            ++out.lines;
        }
    }
    out.ndjson = buf.str();
    return out;
}

FilterStats run_filter(const std::string& path, std::ostream& sink,
                       const TrainedModel& model, FilterOptions options) {
    LineSource source(path);
    return filter_stream(source, sink, model, options);
}

}  // namespace

TEST_CASE("parse_tweet extracts the projection") {
    auto parsed = parse_tweet(tweet_line("42", "99", "Wy3wU4HegLlvHgC"));
    REQUIRE(parsed.ok);
    CHECK(parsed.record.tweet_id == "42");
    CHECK(parsed.record.user_id == "99");
    CHECK(parsed.record.screen_name == "Wy3wU4HegLlvHgC");
    CHECK(parsed.record.lang == "en");
    CHECK(parsed.record.followers_count == 10);
    CHECK(parsed.record.created_days == days_from_civil(2018, 6, 9));
    CHECK(parsed.record.raw.find("Wy3wU4HegLlvHgC") != std::string::npos);
}

TEST_CASE("malformed records carry reason codes") {
    CHECK(parse_tweet("not json").reason == MalformedReason::Parse);
    CHECK_FALSE(parse_tweet("not json").ok);
    CHECK(parse_tweet("[1,2,3]").reason == MalformedReason::Parse);
    CHECK(parse_tweet("{\"id\":1}").reason == MalformedReason::NoUser);
    CHECK(parse_tweet("{\"user\":{\"screen_name\":\"abc\"}}").reason ==
          MalformedReason::NoUser);
    CHECK(parse_tweet("{\"user\":{\"id_str\":\"7\"}}").reason ==
          MalformedReason::NoScreenName);
    CHECK(parse_tweet("{\"user\":{\"id\":7,\"screen_name\":\"\"}}").reason ==
          MalformedReason::NoScreenName);
}

TEST_CASE("numeric ids and missing counts normalize sanely") {
    auto parsed = parse_tweet(
        "{\"id\":5,\"user\":{\"id\":12,\"screen_name\":\"abc\","
        "\"followers_count\":-3}}");
    REQUIRE(parsed.ok);
    CHECK(parsed.record.tweet_id == "5");
    CHECK(parsed.record.user_id == "12");
    CHECK_FALSE(parsed.record.followers_count.has_value());  // unknown, not 0
    CHECK_FALSE(parsed.record.created_days.has_value());
    CHECK(parsed.record.lang == "und");
}

TEST_CASE("parser survives fuzzed input") {
    Rng rng(1234);
    int malformed = 0;
    for (int i = 0; i < 100'000; ++i) {
        std::size_t len = uniform_index(rng, 80);
        std::string line;
        for (std::size_t j = 0; j < len; ++j) {
            char c = static_cast<char>(uniform_index(rng, 256));
            if (c == '\n') c = ' ';
            line.push_back(c);
        }
        auto parsed = parse_tweet(line);
        malformed += !parsed.ok;
    }
    CHECK(malformed > 99'000);  // nearly everything, and no crash
}

TEST_CASE("filter survives a fuzzed stream end to end") {
    test_support::TempDir dir;
    Rng rng(4321);
    auto path = dir.file("fuzz.ndjson");
    std::uint64_t lines = 100'000;
    {
        std::ofstream out(path, std::ios::binary);
        for (std::uint64_t i = 0; i < lines; ++i) {
            std::size_t len = uniform_index(rng, 60);
            std::string line;
            for (std::size_t j = 0; j < len; ++j) {
                char c = static_cast<char>(uniform_index(rng, 256));
                if (c == '\n') c = ' ';
                line.push_back(c);
            }
            out << line << '\n';
        }
    }
    auto model = small_model();
    for (int workers : {1, 4}) {
        FilterOptions options;
        options.workers = workers;
        std::ostringstream sink;
        auto stats = run_filter(path, sink, model, options);
        CHECK(stats.records_seen == lines);
        CHECK(stats.records_malformed + stats.prefilter_pass <= stats.records_seen);
        CHECK(stats.complete);
    }
}

TEST_CASE("empty input yields zero counters") {
    test_support::TempDir dir;
    auto path = dir.file("empty.ndjson");
    test_support::write_file(path, "");
    std::ostringstream sink;
    auto stats = run_filter(path, sink, small_model(), {});
    CHECK(stats.records_seen == 0);
    CHECK(stats.records_emitted == 0);
    CHECK(stats.complete);
    CHECK(sink.str().empty());
}

TEST_CASE("planted accounts are recovered with high precision") {
    test_support::TempDir dir;
    auto synth = synthetic_stream(10'000, 200, 555);
    auto path = dir.file("stream.ndjson");
    test_support::write_file(path, synth.ndjson);

    auto model = small_model();
    std::ostringstream sink;
    auto stats = run_filter(path, sink, model, {});
    CHECK(stats.records_seen == synth.lines);
    CHECK(stats.records_malformed == 0);

    std::set<std::string> emitted_users;
    std::istringstream lines(sink.str());
    std::string line;
    while (std::getline(lines, line)) {
        auto parsed = parse_tweet(line);
        REQUIRE(parsed.ok);
        emitted_users.insert(parsed.record.user_id);
        // output closure: re-check offline
        CHECK(prefilter(parsed.record.screen_name).candidate);
        CHECK(score_text(model, parsed.record.screen_name) >= model.threshold);
    }
    CHECK(emitted_users.size() == stats.unique_accounts);

    std::size_t hits = 0;
    for (const auto& user : emitted_users) hits += synth.planted_users.count(user);
    double recall = double(hits) / double(synth.planted_users.size());
    double precision = double(hits) / double(emitted_users.size());
    INFO("recall ", recall, " precision ", precision);
    CHECK(recall >= 0.95);
    CHECK(precision >= 0.95);
}

TEST_CASE("filter counters obey their algebra") {
    test_support::TempDir dir;
    auto synth = synthetic_stream(2000, 50, 777);
    auto path = dir.file("stream.ndjson");
    test_support::write_file(path, synth.ndjson + "garbage line\n{\"user\":{}}\n");

    std::ostringstream sink;
    auto stats = run_filter(path, sink, small_model(), {});
    CHECK(stats.records_seen == synth.lines + 2);
    CHECK(stats.records_malformed == 2);
    CHECK(stats.model_positive <= stats.prefilter_pass);
    CHECK(stats.prefilter_pass <= stats.records_seen);
    CHECK(stats.unique_accounts <= stats.model_positive);
    CHECK(stats.records_emitted <= stats.model_positive);
    CHECK(stats.complete);
}

TEST_CASE("dedupe controls emission but not account counting") {
    test_support::TempDir dir;
    auto synth = synthetic_stream(500, 40, 888, 3);  // 3 tweets per planted account
    auto path = dir.file("stream.ndjson");
    test_support::write_file(path, synth.ndjson);
    auto model = small_model();

    std::ostringstream with_dedupe, without_dedupe;
    FilterOptions on;  on.dedupe = true;
    FilterOptions off; off.dedupe = false;
    auto stats_on = run_filter(path, with_dedupe, model, on);
    auto stats_off = run_filter(path, without_dedupe, model, off);

    CHECK(stats_on.unique_accounts == stats_off.unique_accounts);
    CHECK(stats_on.model_positive == stats_off.model_positive);
    CHECK(stats_on.records_emitted == stats_on.unique_accounts);
    CHECK(stats_off.records_emitted == stats_off.model_positive);
    CHECK(stats_off.records_emitted - stats_on.records_emitted ==
          stats_off.model_positive - stats_off.unique_accounts);

    // dedupe keeps the first tweet per account
    std::istringstream lines(with_dedupe.str());
    std::string line;
    std::set<std::string> seen;
    while (std::getline(lines, line)) {
        auto parsed = parse_tweet(line);
        CHECK(seen.insert(parsed.record.user_id).second);
    }
}

TEST_CASE("parallel and serial runs emit identical output") {
    test_support::TempDir dir;
    auto synth = synthetic_stream(5000, 100, 999);
    auto path = dir.file("stream.ndjson");
    test_support::write_file(path, synth.ndjson);
    auto model = small_model();

    for (bool dedupe : {true, false}) {
        FilterOptions serial;
        serial.workers = 1;
        serial.dedupe = dedupe;
        std::ostringstream serial_sink;
        auto serial_stats = run_filter(path, serial_sink, model, serial);

        for (int workers : {4, 8}) {
            FilterOptions parallel = serial;
            parallel.workers = workers;
            parallel.batch_lines = 256;
            std::ostringstream parallel_sink;
            auto parallel_stats = run_filter(path, parallel_sink, model, parallel);

            CHECK(parallel_sink.str() == serial_sink.str());
            CHECK(parallel_stats.records_seen == serial_stats.records_seen);
            CHECK(parallel_stats.model_positive == serial_stats.model_positive);
            CHECK(parallel_stats.unique_accounts == serial_stats.unique_accounts);
            CHECK(parallel_stats.records_emitted == serial_stats.records_emitted);
        }
    }
}

TEST_CASE("projection emit mode writes the reduced record") {
    test_support::TempDir dir;
    Rng rng(31);
    std::string handle = planted_handle(rng);
    auto path = dir.file("one.ndjson");
    test_support::write_file(path, tweet_line("1", "u1", handle) + "\n");

    FilterOptions options;
    options.emit = FilterOptions::Emit::Projection;
    std::ostringstream sink;
    auto stats = run_filter(path, sink, small_model(), options);
    REQUIRE(stats.records_emitted == 1);
    auto parsed = parse_tweet("{\"user\":{}}");  // silence unused warnings
    (void)parsed;
    CHECK(sink.str().find("\"screen_name\":\"" + handle + "\"") != std::string::npos);
    CHECK(sink.str().find("\"text\"") == std::string::npos);  // projection only
}

TEST_CASE("gzip input is detected and decoded") {
    test_support::TempDir dir;
    auto synth = synthetic_stream(300, 20, 121);
    auto gz_path = dir.file("stream.ndjson.gz");
    gzFile gz = gzopen(gz_path.c_str(), "wb");
    REQUIRE(gz != nullptr);
    gzwrite(gz, synth.ndjson.data(), static_cast<unsigned>(synth.ndjson.size()));
    gzclose(gz);

    auto plain_path = dir.file("stream.ndjson");
    test_support::write_file(plain_path, synth.ndjson);

    auto model = small_model();
    std::ostringstream gz_sink, plain_sink;
    auto gz_stats = run_filter(gz_path, gz_sink, model, {});
    auto plain_stats = run_filter(plain_path, plain_sink, model, {});
    CHECK(gz_stats.records_seen == synth.lines);
    CHECK(gz_sink.str() == plain_sink.str());
    CHECK(gz_stats.records_emitted == plain_stats.records_emitted);
}

TEST_CASE("failing sink flags the run incomplete") {
    struct FailingBuffer : std::streambuf {
        int overflow(int) override { return traits_type::eof(); }
    };
    test_support::TempDir dir;
    auto synth = synthetic_stream(50, 20, 212);
    auto path = dir.file("stream.ndjson");
    test_support::write_file(path, synth.ndjson);

    FailingBuffer buffer;
    std::ostream sink(&buffer);
    auto stats = run_filter(path, sink, small_model(), {});
    CHECK_FALSE(stats.complete);
    CHECK_FALSE(stats.error.empty());
}

TEST_CASE("missing input raises io_error") {
    CHECK_THROWS_AS(LineSource("/nonexistent/input.ndjson"), io_error);
}

TEST_CASE("bench reports median and handles empty input") {
    test_support::TempDir dir;
    auto synth = synthetic_stream(500, 10, 616);
    auto path = dir.file("stream.ndjson");
    test_support::write_file(path, synth.ndjson);

    auto bench = throughput_bench(path, small_model(), 3, {});
    CHECK(bench.repetitions == 3);
    CHECK(bench.records == synth.lines);
    CHECK(bench.median_rps > 0.0);
    std::ostringstream out;
    write_bench(bench, out);
    CHECK(out.str().find("median_records_per_second:") != std::string::npos);
    CHECK(out.str().find("433M") != std::string::npos);

    auto empty_path = dir.file("empty.ndjson");
    test_support::write_file(empty_path, "");
    auto empty_bench = throughput_bench(empty_path, small_model(), 2, {});
    CHECK(empty_bench.records == 0);
    std::ostringstream empty_out;
    write_bench(empty_bench, empty_out);
    CHECK(empty_out.str().find("median_records_per_second: n/a") != std::string::npos);
}

TEST_CASE("filter stats render as a key-value sidecar") {
    FilterStats stats;
    stats.records_seen = 10;
    stats.prefilter_pass = 4;
    stats.model_positive = 3;
    stats.unique_accounts = 2;
    stats.records_emitted = 2;
    stats.complete = true;
    std::ostringstream out;
    write_filter_stats(stats, out);
    CHECK(out.str().find("records_seen: 10") != std::string::npos);
    CHECK(out.str().find("complete: true") != std::string::npos);
}

TEST_CASE("load_unique_accounts keeps first sighting per user") {
    test_support::TempDir dir;
    auto path = dir.file("matches.ndjson");
    std::ostringstream buf;
    buf << tweet_line("1", "a", "FirstHandle1x2Y", "Sat Jun 09 13:00:00 +0000 2018", 1)
        << '\n'
        << tweet_line("2", "a", "SecondHandle3Z4", "Sat Jun 09 13:00:00 +0000 2018", 2)
        << '\n'
        << tweet_line("3", "b", "OtherUser5Qq6Rr", "Sat Jun 09 13:00:00 +0000 2018", 3)
        << '\n';
    test_support::write_file(path, buf.str());
    auto accounts = load_unique_accounts(path);
    REQUIRE(accounts.size() == 2);
    CHECK(accounts[0].user_id == "a");
    CHECK(accounts[0].screen_name == "FirstHandle1x2Y");
    CHECK(accounts[1].user_id == "b");
}
