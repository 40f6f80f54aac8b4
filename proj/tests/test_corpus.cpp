#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <regex>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "namesift/corpus.hpp"
#include "namesift/error.hpp"
#include "namesift/features.hpp"
#include "support.hpp"

using namespace namesift;

TEST_CASE("random handles are 15 chars over the 62-symbol alphabet") {
    Rng rng(42);
    std::regex shape("^[A-Za-z0-9]{15}$");
    for (int i = 0; i < 1000; ++i) {
        std::string h = generate_random_handle(rng);
        CHECK(std::regex_match(h, shape));
    }
}

TEST_CASE("character-class omission rates match the closed forms") {
    // P(no digit) = (52/62)^15, P(no uppercase) = (36/62)^15,
    // P(no upper or no lower) = 2*(36/62)^15 - (10/62)^15
    const int n = 1'000'000;
    Rng rng(7);
    int no_digit = 0, no_upper = 0, no_case = 0;
    for (int i = 0; i < n; ++i) {
        std::string h = generate_random_handle(rng);
        bool d = false, u = false, l = false;
        for (char c : h) {
            d |= (c >= '0' && c <= '9');
            u |= (c >= 'A' && c <= 'Z');
            l |= (c >= 'a' && c <= 'z');
        }
        no_digit += !d;
        no_upper += !u;
        no_case += (!u || !l);
    }
    double p_no_digit = std::pow(52.0 / 62.0, 15);
    double p_no_upper = std::pow(36.0 / 62.0, 15);
    double p_no_case = 2.0 * p_no_upper - std::pow(10.0 / 62.0, 15);
    CHECK(std::abs(no_digit / double(n) - p_no_digit) < 0.002);
    CHECK(std::abs(no_upper / double(n) - p_no_upper) < 0.0001);
    CHECK(std::abs(no_case / double(n) - p_no_case) < 0.0002);
}

TEST_CASE("per-position character frequencies are uniform (chi-square)") {
    const int n = 100'000;
    Rng rng(2024);
    int counts[15][62] = {};
    for (int i = 0; i < n; ++i) {
        std::string h = generate_random_handle(rng);
        for (int pos = 0; pos < 15; ++pos) {
            const char* hit = std::strchr(kHandleAlphabet, h[pos]);
            REQUIRE(hit != nullptr);
            ++counts[pos][hit - kHandleAlphabet];
        }
    }
    boost::math::chi_squared dist(61);
    double critical = boost::math::quantile(dist, 0.999);
    double expected = n / 62.0;
    for (int pos = 0; pos < 15; ++pos) {
        double stat = 0.0;
        for (int s = 0; s < 62; ++s) {
            double d = counts[pos][s] - expected;
            stat += d * d / expected;
        }
        CHECK(stat < critical);
    }
}

TEST_CASE("human handles follow the configured construction") {
    HumanStyleConfig style;
    style.words = {"data", "wolf"};
    style.separators = {"_"};
    style.digit_suffix_prob = 0.0;
    style.second_word_prob = 1.0;
    style.underscore_prefix_prob = 0.0;
    style.vary_case = false;

    Rng rng(5);
    std::regex two_words("^(data|wolf)_(data|wolf)$");
    bool saw_data_wolf = false;
    for (int i = 0; i < 200; ++i) {
        std::string h = generate_human_handle(rng, style);
        CHECK(std::regex_match(h, two_words));
        saw_data_wolf |= (h == "data_wolf");
    }
    CHECK(saw_data_wolf);

    style.separators = {""};
    style.digit_suffix_prob = 1.0;
    std::regex suffixed("^(data|wolf)(data|wolf)[0-9]{1,4}$");
    bool saw_42 = false;
    for (int i = 0; i < 400; ++i) {
        std::string h = generate_human_handle(rng, style);
        CHECK(std::regex_match(h, suffixed));
        saw_42 |= (h == "datawolf42");
    }
    CHECK(saw_42);
}

TEST_CASE("human handle generator rejects an empty dictionary") {
    HumanStyleConfig style;
    style.words.clear();
    Rng rng(1);
    CHECK_THROWS_AS(generate_human_handle(rng, style), data_error);
}

TEST_CASE("default human handles rarely pass the prefilter") {
    Rng rng(11);
    auto style = HumanStyleConfig::defaults();
    int passing = 0;
    const int n = 10'000;
    for (int i = 0; i < n; ++i) {
        if (prefilter(generate_human_handle(rng, style)).candidate) ++passing;
    }
    double fraction = passing / double(n);
    INFO("prefilter pass fraction: ", fraction);
    CHECK(fraction < 0.05);
    CHECK(fraction > 0.0);  // some hard negatives wanted for training
}

TEST_CASE("load_corpus honors counts, determinism and the empty case") {
    CorpusSpec spec{2, 2, 1, HumanSource::Generator, ""};
    auto first = load_corpus(spec);
    CHECK(first.corpus.size() == 4);
    int randoms = 0;
    for (const auto& s : first.corpus) randoms += s.label == Label::Random;
    CHECK(randoms == 2);

    auto second = load_corpus(spec);
    REQUIRE(second.corpus.size() == first.corpus.size());
    for (std::size_t i = 0; i < first.corpus.size(); ++i) {
        CHECK(first.corpus[i].text == second.corpus[i].text);
        CHECK(first.corpus[i].label == second.corpus[i].label);
    }

    CorpusSpec empty{0, 0, 9, HumanSource::Generator, ""};
    CHECK(load_corpus(empty).corpus.empty());
}

TEST_CASE("label balance holds at scale") {
    CorpusSpec spec{500, 300, 77, HumanSource::Generator, ""};
    auto loaded = load_corpus(spec);
    std::size_t randoms = 0;
    for (const auto& s : loaded.corpus) randoms += s.label == Label::Random;
    CHECK(randoms == 500);
    CHECK(loaded.corpus.size() - randoms == 300);
}

TEST_CASE("file-sourced human handles, blank lines skipped") {
    test_support::TempDir dir;
    auto path = dir.file("handles.txt");
    test_support::write_file(path, "alpha\n\nbeta\r\n\ngamma\n");

    CorpusSpec spec{1, 3, 3, HumanSource::File, path};
    auto loaded = load_corpus(spec);
    CHECK(loaded.corpus.size() == 4);
    CHECK(loaded.skipped_blank == 2);
    std::set<std::string> humans;
    for (const auto& s : loaded.corpus) {
        if (s.label == Label::NotRandom) humans.insert(s.text);
    }
    CHECK(humans == std::set<std::string>{"alpha", "beta", "gamma"});

    CorpusSpec missing{1, 1, 3, HumanSource::File, dir.file("nope.txt")};
    CHECK_THROWS_AS(load_corpus(missing), io_error);

    CorpusSpec too_many{0, 10, 3, HumanSource::File, path};
    CHECK_THROWS_AS(load_corpus(too_many), data_error);
}

TEST_CASE("corpus CSV round trip") {
    CorpusSpec spec{20, 20, 99, HumanSource::Generator, ""};
    auto loaded = load_corpus(spec);

    std::ostringstream out;
    write_corpus_csv(loaded.corpus, out);
    std::istringstream in(out.str());
    auto back = read_corpus_csv(in);

    REQUIRE(back.corpus.size() == loaded.corpus.size());
    for (std::size_t i = 0; i < back.corpus.size(); ++i) {
        CHECK(back.corpus[i].text == loaded.corpus[i].text);
        CHECK(back.corpus[i].label == loaded.corpus[i].label);
    }

    std::istringstream bad("text,label\nfoo,banana\n");
    CHECK_THROWS_AS(read_corpus_csv(bad), data_error);
}
