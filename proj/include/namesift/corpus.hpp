#ifndef NAMESIFT_CORPUS_HPP
#define NAMESIFT_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "namesift/rng.hpp"

namespace namesift {

enum class Label { Random, NotRandom };

struct LabeledString {
    std::string text;
    Label label = Label::NotRandom;
};

enum class HumanSource { Generator, File };

struct CorpusSpec {
    std::size_t n_random = 0;
    std::size_t n_human = 0;
    std::uint64_t seed = 0;
    HumanSource human_source = HumanSource::Generator;
    std::string human_path;  // used when human_source == File
};

// Knobs for the synthetic human-handle generator.  Handles are assembled
// from dictionary words, an optional separator, a case style and an
// optional digit suffix, then length-clamped to [min_length, max_length].
struct HumanStyleConfig {
    std::vector<std::string> words;       // must be nonempty
    std::vector<std::string> separators;  // joined between words; "" allowed
    double digit_suffix_prob = 0.45;
    double second_word_prob = 0.65;
    double underscore_prefix_prob = 0.02;
    bool vary_case = true;  // when false, handles stay lowercase
    std::size_t min_length = 4;
    std::size_t max_length = 15;

    static HumanStyleConfig defaults();
};

// 62-symbol alphabet used for random handles.
extern const char kHandleAlphabet[63];

// Exactly 15 characters, each uniform over [a-zA-Z0-9].
std::string generate_random_handle(Rng& rng);

// A plausible non-random handle, e.g. "data_wolf" or "DataWolf1994".
std::string generate_human_handle(Rng& rng, const HumanStyleConfig& style);

struct CorpusLoadResult {
    std::vector<LabeledString> corpus;
    std::size_t skipped_blank = 0;  // blank lines dropped from a handle file
};

// n_random generated + n_human (generated or file-loaded) strings,
// shuffled deterministically by spec.seed.
CorpusLoadResult load_corpus(const CorpusSpec& spec,
                             const HumanStyleConfig& style = HumanStyleConfig::defaults());

// CSV with header "text,label", label in {random,human}.
void write_corpus_csv(const std::vector<LabeledString>& corpus, std::ostream& out);
CorpusLoadResult read_corpus_csv(std::istream& in);
CorpusLoadResult read_corpus_csv_file(const std::string& path);

}  // namespace namesift

#endif
