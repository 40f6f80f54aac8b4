#include "namesift/features.hpp"

#include <algorithm>
#include <cmath>

#include "namesift/error.hpp"
#include "namesift/utf8.hpp"

namespace namesift {

PrefilterResult prefilter(std::string_view text) {
    auto cps = codepoints(text);
    if (cps.size() != 15) return {false, PrefilterReason::Length};
    bool has_upper = false, has_lower = false, has_digit = false;
    for (const auto& cp : cps) {
        if (cp.size() == 1) {
            char c = cp[0];
            has_upper |= ascii_upper(c);
            has_lower |= ascii_lower(c);
            has_digit |= ascii_digit(c);
        }
    }
    if (!has_upper) return {false, PrefilterReason::NoUppercase};
    if (!has_lower) return {false, PrefilterReason::NoLowercase};
    if (!has_digit) return {false, PrefilterReason::NoDigit};
    return {true, PrefilterReason::None};
}

const char* prefilter_reason_name(PrefilterReason reason) {
    switch (reason) {
        case PrefilterReason::None: return "none";
        case PrefilterReason::Length: return "length";
        case PrefilterReason::NoUppercase: return "no_uppercase";
        case PrefilterReason::NoLowercase: return "no_lowercase";
        case PrefilterReason::NoDigit: return "no_digit";
    }
    return "unknown";
}

void FeatureConfig::validate() const {
    if (ngram_orders.empty()) {
        throw data_error("feature config: ngram_orders must be nonempty");
    }
    for (int n : ngram_orders) {
        if (n < 1 || n > 5) {
            throw data_error("feature config: n-gram order " + std::to_string(n) +
                             " outside [1,5]");
        }
    }
}

std::string FeatureConfig::label() const {
    std::string out = "n=";
    for (std::size_t i = 0; i < ngram_orders.size(); ++i) {
        if (i > 0) out += '+';
        out += std::to_string(ngram_orders[i]);
    }
    out += ",entropy=";
    out += use_entropy ? "on" : "off";
    out += ",case=";
    out += use_case_counts ? "on" : "off";
    return out;
}

std::map<std::string, int> char_ngrams(std::string_view text, int n, bool lowercase) {
    if (n < 1) throw data_error("char_ngrams: order must be >= 1");
    std::map<std::string, int> grams;
    auto cps = codepoints(text);
    if (cps.size() < static_cast<std::size_t>(n)) return grams;
    for (std::size_t i = 0; i + n <= cps.size(); ++i) {
        std::string g;
        for (int j = 0; j < n; ++j) g += cps[i + j];
        if (lowercase) g = ascii_lowercase(g);
        ++grams[g];
    }
    return grams;
}

double shannon_entropy(std::string_view text) {
    if (text.empty()) throw data_error("shannon_entropy: empty string");
    std::map<std::string, int> counts;
    std::size_t m = 0;
    for (const auto& cp : codepoints(text)) {
        ++counts[cp];
        ++m;
    }
    double h = 0.0;
    for (const auto& [cp, count] : counts) {
        double p = static_cast<double>(count) / static_cast<double>(m);
        h -= p * std::log2(p);
    }
    // single-symbol strings give -0.0
    return h == 0.0 ? 0.0 : h;
}

namespace {

// merged counts over all configured orders
std::map<std::string, int> all_ngrams(std::string_view text, const FeatureConfig& config) {
    std::map<std::string, int> merged;
    for (int n : config.ngram_orders) {
        for (auto& [gram, count] : char_ngrams(text, n, config.lowercase_ngrams)) {
            merged[gram] += count;
        }
    }
    return merged;
}

std::vector<double> dense_block(std::string_view text, const FeatureConfig& config) {
    std::vector<double> dense;
    if (config.dense_size() == 0) return dense;
    auto cps = codepoints(text);
    if (cps.empty()) throw data_error("featurize: empty string");
    if (config.use_case_counts) {
        std::size_t lower = 0, upper = 0, digit = 0;
        for (const auto& cp : cps) {
            if (cp.size() == 1) {
                lower += ascii_lower(cp[0]);
                upper += ascii_upper(cp[0]);
                digit += ascii_digit(cp[0]);
            }
        }
        double m = static_cast<double>(cps.size());
        dense.push_back(static_cast<double>(lower) / m);
        dense.push_back(static_cast<double>(upper) / m);
        dense.push_back(static_cast<double>(digit) / m);
    }
    if (config.use_entropy) {
        dense.push_back(shannon_entropy(text));
    }
    return dense;
}

}  // namespace

NgramVocabulary fit_vocabulary(const std::vector<LabeledString>& corpus,
                               const FeatureConfig& config) {
    config.validate();
    if (corpus.empty()) throw data_error("fit_vocabulary: empty corpus");

    // document frequency over both classes pooled; std::map keeps tokens
    // sorted so column ids are canonical
    std::map<std::string, std::uint32_t> df;
    for (const auto& item : corpus) {
        for (const auto& [gram, count] : all_ngrams(item.text, config)) {
            ++df[gram];
        }
    }

    NgramVocabulary vocab;
    vocab.orders = config.ngram_orders;
    vocab.corpus_size = corpus.size();
    vocab.tokens.reserve(df.size());
    vocab.doc_freq.reserve(df.size());
    vocab.idf.reserve(df.size());
    double log_n = std::log(static_cast<double>(corpus.size()));
    for (const auto& [token, count] : df) {
        auto col = static_cast<std::uint32_t>(vocab.tokens.size());
        vocab.token_index.emplace(token, col);
        vocab.tokens.push_back(token);
        vocab.doc_freq.push_back(count);
        double idf = log_n - std::log(static_cast<double>(count));
        vocab.idf.push_back(idf == 0.0 ? 0.0 : idf);
    }

    if (config.standardize_dense && config.dense_size() > 0) {
        std::size_t d = config.dense_size();
        std::vector<double> mean(d, 0.0), var(d, 0.0);
        for (const auto& item : corpus) {
            auto dense = dense_block(item.text, config);
            for (std::size_t j = 0; j < d; ++j) mean[j] += dense[j];
        }
        for (double& v : mean) v /= static_cast<double>(corpus.size());
        for (const auto& item : corpus) {
            auto dense = dense_block(item.text, config);
            for (std::size_t j = 0; j < d; ++j) {
                double delta = dense[j] - mean[j];
                var[j] += delta * delta;
            }
        }
        vocab.dense_shift = mean;
        vocab.dense_scale.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            double sd = std::sqrt(var[j] / static_cast<double>(corpus.size()));
            vocab.dense_scale[j] = sd > 0.0 ? sd : 1.0;
        }
    }

    return vocab;
}

FeatureVector featurize(std::string_view text, const NgramVocabulary& vocab,
                        const FeatureConfig& config) {
    if (text.empty()) throw data_error("featurize: empty string");
    FeatureVector fv;
    for (const auto& [gram, count] : all_ngrams(text, config)) {
        auto it = vocab.token_index.find(gram);
        if (it == vocab.token_index.end()) continue;  // unseen n-grams dropped
        double w = static_cast<double>(count) * vocab.idf[it->second];
        fv.sparse.emplace_back(it->second, w);
    }
    std::sort(fv.sparse.begin(), fv.sparse.end());
    fv.dense = dense_block(text, config);
    if (config.standardize_dense && !vocab.dense_shift.empty()) {
        for (std::size_t j = 0; j < fv.dense.size(); ++j) {
            fv.dense[j] = (fv.dense[j] - vocab.dense_shift[j]) / vocab.dense_scale[j];
        }
    }
    return fv;
}

}  // namespace namesift
