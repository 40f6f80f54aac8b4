#ifndef NAMESIFT_FEATURES_HPP
#define NAMESIFT_FEATURES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "namesift/corpus.hpp"

namespace namesift {

// Heuristic gate applied ahead of the classifier: a string is a candidate
// random handle iff it is exactly 15 code points long and contains at least
// one uppercase letter, one lowercase letter and one decimal digit.
// Rules are checked in that order and the first failure is reported.
enum class PrefilterReason { None, Length, NoUppercase, NoLowercase, NoDigit };

struct PrefilterResult {
    bool candidate = false;
    PrefilterReason reason = PrefilterReason::None;
};

PrefilterResult prefilter(std::string_view text);
const char* prefilter_reason_name(PrefilterReason reason);

struct FeatureConfig {
    std::vector<int> ngram_orders{2};  // character n-gram sizes, each in [1,5]
    bool use_entropy = true;
    bool use_case_counts = true;
    bool lowercase_ngrams = true;
    bool standardize_dense = false;  // z-score the dense block with corpus stats

    int dense_size() const { return (use_case_counts ? 3 : 0) + (use_entropy ? 1 : 0); }
    void validate() const;  // throws data_error on bad settings
    std::string label() const;  // short id, e.g. "n=2,entropy=on,case=on"
};

// The (m-n+1) sequential substrings of length n, with multiplicities.
// Operates on code points; empty result when the string is shorter than n.
std::map<std::string, int> char_ngrams(std::string_view text, int n, bool lowercase);

// H = -sum p_i log2 p_i over the distinct code points of the raw string,
// p_i = count_i / length.  Bits; throws data_error on empty input.
double shannon_entropy(std::string_view text);

// Fitted n-gram index.  idf[t] = ln(corpus_size / doc_freq[t]).
// Column ids are assigned in lexicographic token order, so a vocabulary is
// a pure function of the corpus and config.
struct NgramVocabulary {
    std::vector<int> orders;
    std::unordered_map<std::string, std::uint32_t> token_index;
    std::vector<std::string> tokens;        // by column id
    std::vector<std::uint32_t> doc_freq;    // by column id
    std::uint64_t corpus_size = 0;
    std::vector<double> idf;                // by column id

    // dense standardization parameters; empty unless fitted with
    // standardize_dense set
    std::vector<double> dense_shift;
    std::vector<double> dense_scale;

    std::size_t size() const { return tokens.size(); }
};

NgramVocabulary fit_vocabulary(const std::vector<LabeledString>& corpus,
                               const FeatureConfig& config);

// Sparse TF-IDF block (tf = raw in-string count; out-of-vocabulary n-grams
// dropped) plus the dense block [lower_frac, upper_frac, digit_frac, entropy]
// under the default config.
struct FeatureVector {
    std::vector<std::pair<std::uint32_t, double>> sparse;  // sorted by column
    std::vector<double> dense;
};

FeatureVector featurize(std::string_view text, const NgramVocabulary& vocab,
                        const FeatureConfig& config);

}  // namespace namesift

#endif
