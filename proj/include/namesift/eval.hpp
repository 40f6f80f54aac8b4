#ifndef NAMESIFT_EVAL_HPP
#define NAMESIFT_EVAL_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "namesift/models.hpp"

namespace namesift {

// Random is the positive class for every metric here.

struct ConfusionMatrix {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct MetricValues {
    double accuracy = 0.0;
    double f1 = 0.0;
    double kappa = 0.0;  // NaN when undefined (single-class actuals)
    double precision = 0.0;
    double recall = 0.0;
    double roc_auc = 0.0;  // NaN when undefined
};

struct Prediction {
    double score = 0.0;
    Label predicted = Label::NotRandom;
    Label actual = Label::NotRandom;
};

struct FoldMetrics {
    MetricValues values;
    ConfusionMatrix confusion;
    std::size_t n = 0;
};

// Accuracy, precision, recall, F1, Cohen's kappa and rank-statistic ROC AUC
// (ties get mean rank).  Throws data_error on an empty prediction set;
// single-class actuals leave kappa and AUC as NaN.
FoldMetrics compute_metrics(const std::vector<Prediction>& predictions);

struct MetricsReport {
    std::vector<MetricValues> fold_values;
    MetricValues fold_mean;
    MetricValues fold_std;  // sample std across folds
    MetricValues pooled;    // metrics over all fold predictions pooled
    ConfusionMatrix confusion;  // pooled
    std::size_t n_evaluated = 0;
    int k = 0;
    std::uint64_t seed = 0;
};

// Deterministic stratified partition: per-class index lists are shuffled by
// seed and dealt round-robin, so per-fold class ratios stay within one
// sample of the global ratios.
std::vector<std::vector<std::size_t>> stratified_folds(
    const std::vector<LabeledString>& corpus, int k, std::uint64_t seed);

struct TrainOptions {
    LogRegHyper logreg;
    double nb_alpha = 1.0;
    double decision_threshold = 0.5;
};

// Stratified k-fold cross-validation.  The vocabulary is refit on each
// training split only.  Folds are scored with the raw classifier
// probability; the deployment prefilter is a separate gate and is not part
// of the measured model.
MetricsReport kfold_cv(const std::vector<LabeledString>& corpus, ModelKind kind,
                       const FeatureConfig& config, int k, std::uint64_t seed,
                       const TrainOptions& options = {});

struct AblationRow {
    FeatureConfig config;
    MetricsReport report;
};
using AblationGrid = std::vector<AblationRow>;

// One report per configuration, all on the fold splits derived from seed.
AblationGrid run_ablation(const std::vector<LabeledString>& corpus,
                          const std::vector<FeatureConfig>& grid, ModelKind kind,
                          int k, std::uint64_t seed,
                          const TrainOptions& options = {});

// Uniform sample of n indices from [0, population) without replacement,
// deterministic by seed.  Throws data_error when n > population.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                        std::uint64_t seed);

template <typename T>
std::vector<T> sample_for_audit(const std::vector<T>& items, std::size_t n,
                                std::uint64_t seed) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t idx : sample_indices(items.size(), n, seed)) {
        out.push_back(items[idx]);
    }
    return out;
}

void write_report(const MetricsReport& report, ModelKind kind,
                  const FeatureConfig& config, std::ostream& out);
void write_folds_csv(const MetricsReport& report, std::ostream& out);
void write_ablation_csv(const AblationGrid& grid, std::ostream& out);

}  // namespace namesift

#endif
