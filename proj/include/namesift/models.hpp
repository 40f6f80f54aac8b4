#ifndef NAMESIFT_MODELS_HPP
#define NAMESIFT_MODELS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "namesift/features.hpp"

namespace namesift {

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { LogReg, NaiveBayes, EntropyThreshold };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(std::string_view name);

struct LogRegParams {
    std::vector<double> weights;  // one per feature column (sparse + dense)
    double bias = 0.0;
    double l2_lambda = 0.0;
};

// Multinomial NB with Lidstone smoothing over the non-negative feature mass.
// Class index 0 = NotRandom, 1 = Random throughout.
struct NaiveBayesParams {
    double alpha = 1.0;
    std::array<double, 2> log_prior{0.0, 0.0};
    std::array<std::vector<double>, 2> log_likelihood;
};

// 1-D baseline: Random iff entropy >= threshold_bits.
struct EntropyThresholdParams {
    double threshold_bits = 0.0;
};

struct TrainedModel {
    ModelKind kind = ModelKind::LogReg;
    NgramVocabulary vocab;
    FeatureConfig config;
    std::variant<LogRegParams, NaiveBayesParams, EntropyThresholdParams> params;
    double threshold = 0.5;  // decision threshold on the probability, in (0,1)
    int format_version = kModelFormatVersion;

    std::size_t feature_dim() const { return vocab.size() + config.dense_size(); }
    void validate() const;  // dimension/threshold invariants; throws data_error
};

struct LogRegHyper {
    double l2_lambda = 1e-4;
    int max_iters = 500;
    double tol = 1e-6;          // convergence: gradient max-norm below this
    std::uint64_t seed = 0;     // reserved; full-batch training is seed-free
};

struct TrainInfo {
    bool converged = false;
    int iterations = 0;
    double final_grad_norm = 0.0;
    double final_loss = 0.0;
    std::vector<double> loss_trace;  // loss after each accepted step
};

// L2-regularized logistic regression, gradient descent with a backtracking
// line search (steps that fail the sufficient-decrease test are rejected, so
// the loss trace is monotone).
TrainedModel train_logreg(const std::vector<LabeledString>& corpus,
                          const FeatureConfig& config,
                          const LogRegHyper& hyper = {},
                          TrainInfo* info = nullptr);

TrainedModel train_nb(const std::vector<LabeledString>& corpus,
                      const FeatureConfig& config, double alpha = 1.0);

// Sweeps midpoints of adjacent observed entropy values and keeps the
// threshold with the best training accuracy.
TrainedModel train_entropy_baseline(const std::vector<LabeledString>& corpus);

// Raw classifier probability that text is Random; no heuristic gate.
// This is the quantity cross-validation evaluates.
double score_text(const TrainedModel& model, std::string_view text);
double score_features(const TrainedModel& model, const FeatureVector& fv);

// Deployment-path probability: strings rejected by the prefilter score
// exactly 0; candidates get the classifier score.
double predict_proba(const TrainedModel& model, std::string_view text);

// Random iff predict_proba >= model.threshold.
Label classify(const TrainedModel& model, std::string_view text);

// Versioned persistence; canonical serialization, so saving a loaded model
// reproduces the file byte for byte.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);
std::string serialize_model(const TrainedModel& model);
TrainedModel parse_model(std::string_view text);

namespace logreg_detail {

// Featurized training set; y is 1 for Random.
struct Dataset {
    std::vector<FeatureVector> x;
    std::vector<int> y;
    std::size_t dim = 0;
};

Dataset build_dataset(const std::vector<LabeledString>& corpus,
                      const NgramVocabulary& vocab, const FeatureConfig& config);

// Mean cross-entropy plus (lambda/2)*|w|^2 (bias unregularized).
double loss(const Dataset& data, std::span<const double> weights, double bias,
            double lambda);
void gradient(const Dataset& data, std::span<const double> weights, double bias,
              double lambda, std::span<double> grad_w, double& grad_b);

}  // namespace logreg_detail

}  // namespace namesift

#endif
