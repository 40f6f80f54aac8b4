#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "namesift/error.hpp"
#include "namesift/models.hpp"
#include "namesift/rng.hpp"

namespace namesift {

// Model files are canonical JSON: nlohmann::json keeps keys sorted and emits
// shortest round-trip doubles, so identical models serialize identically and
// save -> load -> save is byte-stable.  The checksum is FNV-1a over the
// document with the checksum field removed.

namespace {

using json = nlohmann::json;

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

json likelihood_to_json(const std::vector<double>& values) {
    json arr = json::array();
    for (double v : values) {
        if (std::isinf(v) && v < 0.0) {
            arr.push_back(nullptr);  // -inf from alpha = 0
        } else {
            arr.push_back(v);
        }
    }
    return arr;
}

std::vector<double> likelihood_from_json(const json& arr) {
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (v.is_null()) {
            out.push_back(-std::numeric_limits<double>::infinity());
        } else {
            out.push_back(v.get<double>());
        }
    }
    return out;
}

json config_to_json(const FeatureConfig& config) {
    return json{{"lowercase_ngrams", config.lowercase_ngrams},
                {"ngram_orders", config.ngram_orders},
                {"standardize_dense", config.standardize_dense},
                {"use_case_counts", config.use_case_counts},
                {"use_entropy", config.use_entropy}};
}

FeatureConfig config_from_json(const json& j) {
    FeatureConfig config;
    config.lowercase_ngrams = j.at("lowercase_ngrams").get<bool>();
    config.ngram_orders = j.at("ngram_orders").get<std::vector<int>>();
    config.standardize_dense = j.at("standardize_dense").get<bool>();
    config.use_case_counts = j.at("use_case_counts").get<bool>();
    config.use_entropy = j.at("use_entropy").get<bool>();
    return config;
}

json vocab_to_json(const NgramVocabulary& vocab) {
    json tokens = json::object();
    for (std::size_t col = 0; col < vocab.tokens.size(); ++col) {
        tokens[vocab.tokens[col]] = json::array({col, vocab.doc_freq[col]});
    }
    return json{{"corpus_size", vocab.corpus_size},
                {"dense_scale", vocab.dense_scale},
                {"dense_shift", vocab.dense_shift},
                {"tokens", std::move(tokens)}};
}

NgramVocabulary vocab_from_json(const json& j, const std::vector<int>& orders) {
    NgramVocabulary vocab;
    vocab.orders = orders;
    vocab.corpus_size = j.at("corpus_size").get<std::uint64_t>();
    vocab.dense_scale = j.at("dense_scale").get<std::vector<double>>();
    vocab.dense_shift = j.at("dense_shift").get<std::vector<double>>();
    const json& tokens = j.at("tokens");
    std::size_t n = tokens.size();
    vocab.tokens.assign(n, std::string());
    vocab.doc_freq.assign(n, 0);
    std::vector<bool> seen(n, false);
    for (auto it = tokens.begin(); it != tokens.end(); ++it) {
        const json& entry = it.value();
        auto col = entry.at(0).get<std::uint64_t>();
        auto df = entry.at(1).get<std::uint64_t>();
        if (col >= n || seen[col]) {
            throw format_error("model file: vocabulary columns are not a bijection");
        }
        if (df < 1 || df > vocab.corpus_size) {
            throw format_error("model file: document frequency out of range");
        }
        seen[col] = true;
        vocab.tokens[col] = it.key();
        vocab.doc_freq[col] = static_cast<std::uint32_t>(df);
        vocab.token_index.emplace(it.key(), static_cast<std::uint32_t>(col));
    }
    vocab.idf.resize(n);
    double log_n = std::log(static_cast<double>(vocab.corpus_size));
    for (std::size_t col = 0; col < n; ++col) {
        double idf = log_n - std::log(static_cast<double>(vocab.doc_freq[col]));
        vocab.idf[col] = idf == 0.0 ? 0.0 : idf;
    }
    return vocab;
}

json params_to_json(const TrainedModel& model) {
    if (const auto* lr = std::get_if<LogRegParams>(&model.params)) {
        return json{{"bias", lr->bias},
                    {"l2_lambda", lr->l2_lambda},
                    {"weights", lr->weights}};
    }
    if (const auto* nb = std::get_if<NaiveBayesParams>(&model.params)) {
        return json{{"alpha", nb->alpha},
                    {"log_likelihood",
                     json::array({likelihood_to_json(nb->log_likelihood[0]),
                                  likelihood_to_json(nb->log_likelihood[1])})},
                    {"log_prior", nb->log_prior}};
    }
    const auto& et = std::get<EntropyThresholdParams>(model.params);
    return json{{"threshold_bits", et.threshold_bits}};
}

void params_from_json(TrainedModel& model, const json& j) {
    switch (model.kind) {
        case ModelKind::LogReg: {
            LogRegParams p;
            p.bias = j.at("bias").get<double>();
            p.l2_lambda = j.at("l2_lambda").get<double>();
            p.weights = j.at("weights").get<std::vector<double>>();
            model.params = std::move(p);
            break;
        }
        case ModelKind::NaiveBayes: {
            NaiveBayesParams p;
            p.alpha = j.at("alpha").get<double>();
            const json& ll = j.at("log_likelihood");
            if (!ll.is_array() || ll.size() != 2) {
                throw format_error("model file: log_likelihood must have two classes");
            }
            p.log_likelihood[0] = likelihood_from_json(ll.at(0));
            p.log_likelihood[1] = likelihood_from_json(ll.at(1));
            auto prior = j.at("log_prior").get<std::vector<double>>();
            if (prior.size() != 2) {
                throw format_error("model file: log_prior must have two classes");
            }
            p.log_prior = {prior[0], prior[1]};
            model.params = std::move(p);
            break;
        }
        case ModelKind::EntropyThreshold: {
            EntropyThresholdParams p;
            p.threshold_bits = j.at("threshold_bits").get<double>();
            model.params = p;
            break;
        }
    }
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
    json doc{{"config", config_to_json(model.config)},
             {"format_version", model.format_version},
             {"kind", model_kind_name(model.kind)},
             {"params", params_to_json(model)},
             {"threshold", model.threshold},
             {"vocab", vocab_to_json(model.vocab)}};
    doc["checksum"] = hex64(fnv1a64(doc.dump()));
    return doc.dump(2) + "\n";
}

TrainedModel parse_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw format_error(std::string("corrupt model file: ") + e.what());
    }
    if (!doc.is_object()) throw format_error("corrupt model file: not an object");

    try {
        if (!doc.contains("format_version")) {
            throw format_error("model file: missing format_version");
        }
        int version = doc.at("format_version").get<int>();
        if (version > kModelFormatVersion) {
            throw version_error("model file format version " + std::to_string(version) +
                                " is newer than supported version " +
                                std::to_string(kModelFormatVersion));
        }

        if (!doc.contains("checksum")) {
            throw format_error("model file: missing checksum");
        }
        std::string stored = doc.at("checksum").get<std::string>();
        json body = doc;
        body.erase("checksum");
        if (hex64(fnv1a64(body.dump())) != stored) {
            throw format_error("model file: checksum mismatch");
        }

        TrainedModel model;
        model.format_version = version;
        model.kind = model_kind_from_name(doc.at("kind").get<std::string>());
        model.config = config_from_json(doc.at("config"));
        model.vocab = vocab_from_json(doc.at("vocab"), model.config.ngram_orders);
        model.threshold = doc.at("threshold").get<double>();
        params_from_json(model, doc.at("params"));
        model.validate();
        return model;
    } catch (const json::exception& e) {
        throw format_error(std::string("corrupt model file: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::string payload = serialize_model(model);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot write model file: " + path);
        out << payload;
        if (!out.flush()) throw io_error("cannot write model file: " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot move model file into place: " + path);
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

}  // namespace namesift
