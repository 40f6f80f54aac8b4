#include "namesift/corpus.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "namesift/error.hpp"
#include "namesift/utf8.hpp"

namespace namesift {

const char kHandleAlphabet[63] =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

namespace {

// Word stock for the synthetic human handles: common first names, nouns,
// adjectives and net slang.  Kept short (<= 8 chars) so two words plus a
// digit suffix still fit in a 15-char handle.
const char* kDefaultWords[] = {
    "alex",    "maria",   "john",    "sara",    "mike",    "anna",
    "david",   "laura",   "chris",   "emma",    "james",   "lucy",
    "peter",   "nina",    "tom",     "kate",    "sam",     "julia",
    "max",     "elena",   "dan",     "sofia",   "ben",     "olivia",
    "jack",    "mia",     "ryan",    "zoe",     "luke",    "ivy",
    "adam",    "ruby",    "noah",    "lily",    "leo",     "chloe",
    "eric",    "grace",   "ivan",    "alice",   "omar",    "diana",
    "carlos",  "irene",   "pedro",   "carmen",  "akira",   "yuki",
    "kenji",   "hana",    "ali",     "fatima",  "amir",    "leila",
    "wolf",    "bear",    "fox",     "hawk",    "lion",    "tiger",
    "eagle",   "raven",   "shark",   "cobra",   "panda",   "otter",
    "falcon",  "viper",   "dragon",  "phoenix", "storm",   "shadow",
    "night",   "moon",    "star",    "sun",     "sky",     "cloud",
    "rain",    "snow",    "fire",    "ice",     "stone",   "river",
    "ocean",   "forest",  "mountain","valley",  "desert",  "island",
    "data",    "pixel",   "cyber",   "tech",    "code",    "byte",
    "net",     "web",     "digital", "crypto",  "gamer",   "player",
    "ninja",   "samurai", "knight",  "wizard",  "mage",    "hunter",
    "rider",   "racer",   "pilot",   "captain", "chief",   "boss",
    "king",    "queen",   "prince",  "lord",    "lady",    "angel",
    "demon",   "ghost",   "spirit",  "soul",    "dream",   "magic",
    "lucky",   "happy",   "crazy",   "wild",    "free",    "true",
    "real",    "dark",    "light",   "silver",  "golden",  "black",
    "white",   "blue",    "red",     "green",   "purple",  "pink",
    "little",  "big",     "super",   "mega",    "ultra",   "hyper",
    "cool",    "hot",     "fast",    "slow",    "smart",   "brave",
    "silent",  "loud",    "sweet",   "bitter",  "young",   "old",
    "music",   "dance",   "song",    "beat",    "rock",    "jazz",
    "art",     "photo",   "film",    "book",    "story",   "poet",
    "coffee",  "tea",     "sugar",   "honey",   "candy",   "cake",
    "pizza",   "taco",    "sushi",   "ramen",   "berry",   "apple",
    "love",    "peace",   "hope",    "faith",   "joy",     "luck",
    "power",   "force",   "energy",  "spark",   "flash",   "bolt",
    "travel",  "nomad",   "runner",  "walker",  "surfer",  "diver",
    "doctor",  "nurse",   "teacher", "student", "writer",  "artist",
    "farmer",  "baker",   "smith",   "miller",  "fisher",  "mason",
    "east",    "west",    "north",   "south",   "home",    "world",
    "city",    "town",    "street",  "road",    "bridge",  "tower",
    "winter",  "summer",  "spring",  "autumn",  "monday",  "sunday",
    "zero",    "one",     "two",     "seven",   "nine",    "eleven",
};

constexpr std::size_t kDefaultWordCount =
    sizeof(kDefaultWords) / sizeof(kDefaultWords[0]);

std::string pick_word(Rng& rng, const HumanStyleConfig& style) {
    return style.words[uniform_index(rng, style.words.size())];
}

std::string digit_suffix(Rng& rng) {
    double kind = uniform_real01(rng);
    std::string out;
    if (kind < 0.30) {
        // birth-year style
        int year = 1970 + static_cast<int>(uniform_index(rng, 55));
        out = std::to_string(year);
        if (uniform_real01(rng) < 0.5) out = out.substr(2);  // "94" style
    } else if (kind < 0.40) {
        // repeated digit, "777"
        char d = static_cast<char>('0' + uniform_index(rng, 10));
        std::size_t reps = 2 + uniform_index(rng, 2);
        out.assign(reps, d);
    } else {
        std::size_t len = 1 + uniform_index(rng, 4);
        for (std::size_t i = 0; i < len; ++i) {
            out.push_back(static_cast<char>('0' + uniform_index(rng, 10)));
        }
    }
    return out;
}

enum class CaseStyle { Lower, TitleFirst, CamelEach, AllCaps };

CaseStyle pick_case(Rng& rng) {
    double r = uniform_real01(rng);
    if (r < 0.55) return CaseStyle::Lower;
    if (r < 0.72) return CaseStyle::TitleFirst;
    if (r < 0.95) return CaseStyle::CamelEach;
    return CaseStyle::AllCaps;
}

std::string apply_case(const std::vector<std::string>& parts,
                       const std::string& sep, CaseStyle cs) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        std::string w = parts[i];
        switch (cs) {
            case CaseStyle::Lower:
                break;
            case CaseStyle::TitleFirst:
                if (i == 0 && !w.empty()) w[0] = static_cast<char>(w[0] - 'a' + 'A');
                break;
            case CaseStyle::CamelEach:
                if (!w.empty()) w[0] = static_cast<char>(w[0] - 'a' + 'A');
                break;
            case CaseStyle::AllCaps:
                for (char& c : w) c = static_cast<char>(c - 'a' + 'A');
                break;
        }
        out += w;
    }
    return out;
}

std::string compose_human(Rng& rng, const HumanStyleConfig& style) {
    std::vector<std::string> parts;
    parts.push_back(pick_word(rng, style));
    if (uniform_real01(rng) < style.second_word_prob) {
        parts.push_back(pick_word(rng, style));
    }
    std::string sep;
    if (!style.separators.empty()) {
        sep = style.separators[uniform_index(rng, style.separators.size())];
    }
    CaseStyle cs = style.vary_case ? pick_case(rng) : CaseStyle::Lower;
    std::string handle = apply_case(parts, sep, cs);
    if (uniform_real01(rng) < style.digit_suffix_prob) {
        handle += digit_suffix(rng);
    }
    if (uniform_real01(rng) < style.underscore_prefix_prob) {
        handle.insert(handle.begin(), '_');
    }
    return handle;
}

}  // namespace

HumanStyleConfig HumanStyleConfig::defaults() {
    HumanStyleConfig cfg;
    cfg.words.assign(kDefaultWords, kDefaultWords + kDefaultWordCount);
    cfg.separators = {"", "", "", "_"};
    return cfg;
}

std::string generate_random_handle(Rng& rng) {
    std::string out;
    out.reserve(15);
    for (int i = 0; i < 15; ++i) {
        out.push_back(kHandleAlphabet[uniform_index(rng, 62)]);
    }
    return out;
}

std::string generate_human_handle(Rng& rng, const HumanStyleConfig& style) {
    if (style.words.empty()) {
        throw data_error("human handle generator: empty dictionary");
    }
    // retry until the length clamp is met; single-word configs can undershoot
    for (;;) {
        std::string handle = compose_human(rng, style);
        std::size_t len = count_codepoints(handle);
        if (len >= style.min_length && len <= style.max_length) return handle;
    }
}

CorpusLoadResult load_corpus(const CorpusSpec& spec, const HumanStyleConfig& style) {
    CorpusLoadResult result;
    result.corpus.reserve(spec.n_random + spec.n_human);
    Rng rng(spec.seed);

    for (std::size_t i = 0; i < spec.n_random; ++i) {
        result.corpus.push_back({generate_random_handle(rng), Label::Random});
    }

    if (spec.human_source == HumanSource::Generator) {
        for (std::size_t i = 0; i < spec.n_human; ++i) {
            result.corpus.push_back({generate_human_handle(rng, style), Label::NotRandom});
        }
    } else {
        std::ifstream in(spec.human_path);
        if (!in) {
            throw io_error("cannot open handle file: " + spec.human_path);
        }
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) {
                ++result.skipped_blank;
                continue;
            }
            lines.push_back(line);
        }
        if (lines.size() < spec.n_human) {
            throw data_error("handle file has " + std::to_string(lines.size()) +
                             " usable lines, need " + std::to_string(spec.n_human));
        }
        for (std::size_t i = 0; i < spec.n_human; ++i) {
            result.corpus.push_back({lines[i], Label::NotRandom});
        }
    }

    shuffle_in_place(result.corpus, rng);
    return result;
}

void write_corpus_csv(const std::vector<LabeledString>& corpus, std::ostream& out) {
    out << "text,label\n";
    for (const auto& item : corpus) {
        out << item.text << ',' << (item.label == Label::Random ? "random" : "human")
            << '\n';
    }
}

CorpusLoadResult read_corpus_csv(std::istream& in) {
    CorpusLoadResult result;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            first = false;
            if (line == "text,label") continue;  // header optional
        }
        if (line.empty()) {
            ++result.skipped_blank;
            continue;
        }
        auto comma = line.rfind(',');
        if (comma == std::string::npos) {
            throw data_error("corpus CSV: missing label column in line: " + line);
        }
        std::string text = line.substr(0, comma);
        std::string label = line.substr(comma + 1);
        if (text.empty()) {
            ++result.skipped_blank;
            continue;
        }
        if (label == "random") {
            result.corpus.push_back({text, Label::Random});
        } else if (label == "human") {
            result.corpus.push_back({text, Label::NotRandom});
        } else {
            throw data_error("corpus CSV: unknown label '" + label + "'");
        }
    }
    return result;
}

CorpusLoadResult read_corpus_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open corpus file: " + path);
    return read_corpus_csv(in);
}

}  // namespace namesift
