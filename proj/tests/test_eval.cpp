#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "namesift/error.hpp"
#include "namesift/eval.hpp"
#include "namesift/rng.hpp"

using namespace namesift;

namespace {

std::vector<Prediction> from_confusion(std::uint64_t tp, std::uint64_t fp,
                                       std::uint64_t fn, std::uint64_t tn) {
    std::vector<Prediction> preds;
    for (std::uint64_t i = 0; i < tp; ++i) preds.push_back({0.9, Label::Random, Label::Random});
    for (std::uint64_t i = 0; i < fp; ++i) preds.push_back({0.8, Label::Random, Label::NotRandom});
    for (std::uint64_t i = 0; i < fn; ++i) preds.push_back({0.2, Label::NotRandom, Label::Random});
    for (std::uint64_t i = 0; i < tn; ++i) preds.push_back({0.1, Label::NotRandom, Label::NotRandom});
    return preds;
}

// all-pairs AUC oracle: P(score_pos > score_neg) + 0.5 P(tie)
double pairwise_auc(const std::vector<Prediction>& preds) {
    double wins = 0.0;
    std::uint64_t pairs = 0;
    for (const auto& p : preds) {
        if (p.actual != Label::Random) continue;
        for (const auto& q : preds) {
            if (q.actual != Label::NotRandom) continue;
            ++pairs;
            if (p.score > q.score) wins += 1.0;
            else if (p.score == q.score) wins += 0.5;
        }
    }
    return wins / double(pairs);
}

std::vector<LabeledString> entropy_separable_corpus(std::size_t per_class) {
    // Random members have many distinct characters, NotRandom almost one
    std::vector<LabeledString> corpus;
    const std::string alphabet = "abcdefghijklmnop";
    for (std::size_t i = 0; i < per_class; ++i) {
        std::string high;
        for (std::size_t j = 0; j < 12; ++j) {
            high.push_back(alphabet[(i + j * 3) % alphabet.size()]);
        }
        corpus.push_back({high, Label::Random});
        std::string low(10, alphabet[i % alphabet.size()]);
        low.push_back('z');
        corpus.push_back({low, Label::NotRandom});
    }
    return corpus;
}

}  // namespace

TEST_CASE("perfect classifier scores ones across the board") {
    auto metrics = compute_metrics(from_confusion(50, 0, 0, 50));
    CHECK(metrics.values.accuracy == 1.0);
    CHECK(metrics.values.precision == 1.0);
    CHECK(metrics.values.recall == 1.0);
    CHECK(metrics.values.f1 == 1.0);
    CHECK(metrics.values.kappa == 1.0);
    CHECK(metrics.values.roc_auc == 1.0);
    CHECK(metrics.confusion.tp == 50);
    CHECK(metrics.confusion.tn == 50);
}

TEST_CASE("hand-computed confusion matrix") {
    auto metrics = compute_metrics(from_confusion(40, 5, 10, 45));
    CHECK(metrics.values.precision == doctest::Approx(40.0 / 45.0).epsilon(1e-9));
    CHECK(metrics.values.recall == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(metrics.values.f1 == doctest::Approx(0.842105).epsilon(1e-3));
    CHECK(metrics.values.accuracy == doctest::Approx(0.85).epsilon(1e-9));
    CHECK(metrics.values.kappa == doctest::Approx(0.70).epsilon(1e-3));
    CHECK(metrics.confusion.total() == 100);
}

TEST_CASE("metrics agree with brute-force formulas on random matrices") {
    Rng rng(55);
    for (int trial = 0; trial < 1000; ++trial) {
        std::uint64_t tp = 1 + uniform_index(rng, 200);
        std::uint64_t fp = 1 + uniform_index(rng, 200);
        std::uint64_t fn = 1 + uniform_index(rng, 200);
        std::uint64_t tn = 1 + uniform_index(rng, 200);
        auto metrics = compute_metrics(from_confusion(tp, fp, fn, tn));

        CHECK(metrics.confusion.tp == tp);
        CHECK(metrics.confusion.fp == fp);
        CHECK(metrics.confusion.fn == fn);
        CHECK(metrics.confusion.tn == tn);

        double n = double(tp + fp + fn + tn);
        double precision = double(tp) / double(tp + fp);
        double recall = double(tp) / double(tp + fn);
        double f1 = 2.0 * precision * recall / (precision + recall);
        double accuracy = double(tp + tn) / n;
        double po = accuracy;
        double pe = (double(tp + fp) * double(tp + fn) +
                     double(fn + tn) * double(fp + tn)) / (n * n);
        double kappa = (po - pe) / (1.0 - pe);

        CHECK(std::abs(metrics.values.precision - precision) < 1e-9);
        CHECK(std::abs(metrics.values.recall - recall) < 1e-9);
        CHECK(std::abs(metrics.values.f1 - f1) < 1e-9);
        CHECK(std::abs(metrics.values.accuracy - accuracy) < 1e-9);
        CHECK(std::abs(metrics.values.kappa - kappa) < 1e-9);
    }
}

TEST_CASE("rank AUC equals the all-pairs oracle, ties included") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Prediction> preds;
        for (int i = 0; i < 200; ++i) {
            // coarse score grid forces plenty of ties
            double score = double(uniform_index(rng, 40)) / 40.0;
            Label actual = uniform_index(rng, 2) ? Label::Random : Label::NotRandom;
            preds.push_back({score, score >= 0.5 ? Label::Random : Label::NotRandom,
                             actual});
        }
        auto metrics = compute_metrics(preds);
        CHECK(std::abs(metrics.values.roc_auc - pairwise_auc(preds)) < 1e-9);
    }
}

TEST_CASE("single-class actuals leave AUC and kappa undefined") {
    std::vector<Prediction> preds = {{0.9, Label::Random, Label::Random},
                                     {0.4, Label::NotRandom, Label::Random}};
    auto metrics = compute_metrics(preds);
    CHECK(std::isnan(metrics.values.roc_auc));
    CHECK(std::isnan(metrics.values.kappa));
    CHECK(metrics.values.accuracy == 0.5);
    CHECK_THROWS_AS(compute_metrics({}), data_error);
}

TEST_CASE("stratified folds partition the corpus") {
    auto corpus = load_corpus({70, 33, 13, HumanSource::Generator, ""}).corpus;
    auto folds = stratified_folds(corpus, 5, 3);
    REQUIRE(folds.size() == 5);

    std::set<std::size_t> seen;
    for (const auto& fold : folds) {
        for (std::size_t idx : fold) {
            CHECK(seen.insert(idx).second);  // disjoint
        }
    }
    CHECK(seen.size() == corpus.size());  // cover

    // per-fold class counts within one of the even split
    for (const auto& fold : folds) {
        std::size_t randoms = 0;
        for (std::size_t idx : fold) randoms += corpus[idx].label == Label::Random;
        CHECK(randoms >= 70 / 5);
        CHECK(randoms <= 70 / 5 + 1);
        std::size_t humans = fold.size() - randoms;
        CHECK(humans >= 33 / 5);
        CHECK(humans <= 33 / 5 + 1);
    }

    CHECK_THROWS_AS(stratified_folds(corpus, 1, 3), data_error);
    auto tiny = load_corpus({2, 50, 1, HumanSource::Generator, ""}).corpus;
    CHECK_THROWS_AS(stratified_folds(tiny, 5, 3), data_error);
}

TEST_CASE("no test-fold-only token leaks into the fold vocabulary") {
    auto corpus = load_corpus({40, 40, 91, HumanSource::Generator, ""}).corpus;
    FeatureConfig config;
    int k = 4;
    auto folds = stratified_folds(corpus, k, 7);

    for (const auto& fold : folds) {
        std::set<std::size_t> test_idx(fold.begin(), fold.end());
        std::vector<LabeledString> train_split;
        std::set<std::string> train_tokens, test_tokens;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            std::set<std::string>& sink = test_idx.count(i) ? test_tokens : train_tokens;
            for (const auto& [gram, cnt] : char_ngrams(corpus[i].text, 2, true)) {
                sink.insert(gram);
            }
            if (!test_idx.count(i)) train_split.push_back(corpus[i]);
        }
        auto vocab = fit_vocabulary(train_split, config);
        for (const auto& token : test_tokens) {
            if (train_tokens.count(token)) continue;
            CHECK(vocab.token_index.find(token) == vocab.token_index.end());
        }
        for (const auto& token : train_tokens) {
            CHECK(vocab.token_index.find(token) != vocab.token_index.end());
        }
    }
}

TEST_CASE("cross-validation on perfectly separable data") {
    auto corpus = entropy_separable_corpus(20);
    auto report = kfold_cv(corpus, ModelKind::EntropyThreshold, FeatureConfig{}, 4, 11);
    for (const auto& fold : report.fold_values) {
        CHECK(fold.accuracy == 1.0);
        CHECK(fold.kappa == 1.0);
    }
    CHECK(report.pooled.accuracy == 1.0);
    CHECK(report.n_evaluated == corpus.size());
}

TEST_CASE("label-shuffled corpus has near-zero kappa") {
    auto corpus = load_corpus({5000, 5000, 303, HumanSource::Generator, ""}).corpus;
    // reassign labels at random, decoupling text from class
    Rng rng(404);
    std::vector<Label> labels;
    labels.reserve(corpus.size());
    for (const auto& item : corpus) labels.push_back(item.label);
    shuffle_in_place(labels, rng);
    for (std::size_t i = 0; i < corpus.size(); ++i) corpus[i].label = labels[i];

    auto report = kfold_cv(corpus, ModelKind::NaiveBayes, FeatureConfig{}, 5, 500);
    CHECK(std::abs(report.pooled.kappa) < 0.05);
}

TEST_CASE("cross-validation is deterministic") {
    auto corpus = load_corpus({60, 60, 27, HumanSource::Generator, ""}).corpus;
    auto a = kfold_cv(corpus, ModelKind::LogReg, FeatureConfig{}, 3, 9);
    auto b = kfold_cv(corpus, ModelKind::LogReg, FeatureConfig{}, 3, 9);
    std::ostringstream sa, sb;
    write_report(a, ModelKind::LogReg, FeatureConfig{}, sa);
    write_report(b, ModelKind::LogReg, FeatureConfig{}, sb);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("ablation grid shape and determinism") {
    auto corpus = load_corpus({60, 60, 63, HumanSource::Generator, ""}).corpus;
    std::vector<FeatureConfig> grid;
    for (int n : {1, 2}) {
        for (bool entropy : {false, true}) {
            FeatureConfig config;
            config.ngram_orders = {n};
            config.use_entropy = entropy;
            grid.push_back(config);
        }
    }
    auto rows = run_ablation(corpus, grid, ModelKind::NaiveBayes, 3, 21);
    REQUIRE(rows.size() == 4);

    auto rows2 = run_ablation(corpus, grid, ModelKind::NaiveBayes, 3, 21);
    std::ostringstream csv1, csv2;
    write_ablation_csv(rows, csv1);
    write_ablation_csv(rows2, csv2);
    CHECK(csv1.str() == csv2.str());
    CHECK(csv1.str().find("n=2,entropy=on,case=on") != std::string::npos);

    CHECK_THROWS_AS(run_ablation(corpus, {}, ModelKind::NaiveBayes, 3, 21), data_error);
}

TEST_CASE("audit sampling without replacement") {
    std::vector<int> population;
    for (int i = 0; i < 100; ++i) population.push_back(i);

    auto all = sample_for_audit(population, 100, 1);
    CHECK(all.size() == 100);
    CHECK(std::set<int>(all.begin(), all.end()).size() == 100);
    CHECK(all != population);  // order shuffled

    CHECK(sample_for_audit(population, 0, 1).empty());
    CHECK_THROWS_AS(sample_indices(10, 11, 1), data_error);

    auto fixed = sample_for_audit(population, 10, 42);
    CHECK(fixed == sample_for_audit(population, 10, 42));

    int distinct_pairs = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto a = sample_for_audit(population, 10, seed);
        auto b = sample_for_audit(population, 10, seed + 1000);
        distinct_pairs += (a != b);
    }
    CHECK(distinct_pairs >= 99);
}
