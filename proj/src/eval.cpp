#include "namesift/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "namesift/error.hpp"
#include "namesift/rng.hpp"

namespace namesift {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// AUC via the Mann-Whitney rank statistic; tied scores share the mean rank.
double rank_auc(const std::vector<Prediction>& predictions) {
    std::size_t n = predictions.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return predictions[a].score < predictions[b].score;
    });

    double positive_rank_sum = 0.0;
    std::uint64_t n_pos = 0, n_neg = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && predictions[order[j]].score == predictions[order[i]].score) ++j;
        double mean_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t t = i; t < j; ++t) {
            if (predictions[order[t]].actual == Label::Random) {
                positive_rank_sum += mean_rank;
            }
        }
        i = j;
    }
    for (const auto& p : predictions) {
        if (p.actual == Label::Random) ++n_pos; else ++n_neg;
    }
    if (n_pos == 0 || n_neg == 0) return kNaN;
    double u = positive_rank_sum -
               0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MetricValues metrics_from_confusion(const ConfusionMatrix& cm) {
    MetricValues v;
    double n = static_cast<double>(cm.total());
    double tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp);
    double fn = static_cast<double>(cm.fn), tn = static_cast<double>(cm.tn);
    v.accuracy = (tp + tn) / n;
    v.precision = (tp + fp) > 0.0 ? tp / (tp + fp) : kNaN;
    v.recall = (tp + fn) > 0.0 ? tp / (tp + fn) : kNaN;
    v.f1 = (std::isnan(v.precision) || std::isnan(v.recall) ||
            v.precision + v.recall == 0.0)
               ? kNaN
               : 2.0 * v.precision * v.recall / (v.precision + v.recall);
    double pe = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (n * n);
    // undefined for single-class actuals, like AUC
    bool both_classes = (tp + fn) > 0.0 && (fp + tn) > 0.0;
    v.kappa = both_classes && pe < 1.0 ? ((tp + tn) / n - pe) / (1.0 - pe) : kNaN;
    return v;
}

MetricValues map_metrics(const std::vector<MetricValues>& folds,
                         double (*reduce)(const std::vector<double>&)) {
    auto collect = [&](double MetricValues::*field) {
        std::vector<double> values;
        values.reserve(folds.size());
        for (const auto& f : folds) values.push_back(f.*field);
        return reduce(values);
    };
    MetricValues out;
    out.accuracy = collect(&MetricValues::accuracy);
    out.f1 = collect(&MetricValues::f1);
    out.kappa = collect(&MetricValues::kappa);
    out.precision = collect(&MetricValues::precision);
    out.recall = collect(&MetricValues::recall);
    out.roc_auc = collect(&MetricValues::roc_auc);
    return out;
}

double mean_of(const std::vector<double>& values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_std_of(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double m = mean_of(values);
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
}

TrainedModel train_for(ModelKind kind, const std::vector<LabeledString>& corpus,
                       const FeatureConfig& config, const TrainOptions& options) {
    TrainedModel model;
    switch (kind) {
        case ModelKind::LogReg:
            model = train_logreg(corpus, config, options.logreg);
            break;
        case ModelKind::NaiveBayes:
            model = train_nb(corpus, config, options.nb_alpha);
            break;
        case ModelKind::EntropyThreshold:
            model = train_entropy_baseline(corpus);
            break;
    }
    model.threshold = options.decision_threshold;
    return model;
}

}  // namespace

FoldMetrics compute_metrics(const std::vector<Prediction>& predictions) {
    if (predictions.empty()) throw data_error("compute_metrics: no predictions");
    FoldMetrics fold;
    fold.n = predictions.size();
    for (const auto& p : predictions) {
        bool pred_pos = p.predicted == Label::Random;
        bool act_pos = p.actual == Label::Random;
        if (pred_pos && act_pos) ++fold.confusion.tp;
        else if (pred_pos && !act_pos) ++fold.confusion.fp;
        else if (!pred_pos && act_pos) ++fold.confusion.fn;
        else ++fold.confusion.tn;
    }
    fold.values = metrics_from_confusion(fold.confusion);
    fold.values.roc_auc = rank_auc(predictions);
    return fold;
}

std::vector<std::vector<std::size_t>> stratified_folds(
    const std::vector<LabeledString>& corpus, int k, std::uint64_t seed) {
    if (k < 2) throw data_error("stratified_folds: k must be >= 2");
    std::vector<std::size_t> random_idx, human_idx;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        (corpus[i].label == Label::Random ? random_idx : human_idx).push_back(i);
    }
    if (random_idx.size() < static_cast<std::size_t>(k) ||
        human_idx.size() < static_cast<std::size_t>(k)) {
        throw data_error("stratified_folds: a class has fewer members than folds");
    }
    Rng rng(seed);
    shuffle_in_place(random_idx, rng);
    shuffle_in_place(human_idx, rng);

    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < random_idx.size(); ++i) {
        folds[i % k].push_back(random_idx[i]);
    }
    for (std::size_t i = 0; i < human_idx.size(); ++i) {
        folds[i % k].push_back(human_idx[i]);
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

MetricsReport kfold_cv(const std::vector<LabeledString>& corpus, ModelKind kind,
                       const FeatureConfig& config, int k, std::uint64_t seed,
                       const TrainOptions& options) {
    config.validate();
    auto folds = stratified_folds(corpus, k, seed);

    MetricsReport report;
    report.k = k;
    report.seed = seed;

    std::vector<Prediction> pooled;
    pooled.reserve(corpus.size());
    std::vector<bool> in_test(corpus.size(), false);

    for (const auto& fold : folds) {
        for (std::size_t idx : fold) in_test[idx] = true;
        std::vector<LabeledString> train_split;
        train_split.reserve(corpus.size() - fold.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (!in_test[i]) train_split.push_back(corpus[i]);
        }
        TrainedModel model = train_for(kind, train_split, config, options);

        std::vector<Prediction> fold_preds;
        fold_preds.reserve(fold.size());
        for (std::size_t idx : fold) {
            double s = score_text(model, corpus[idx].text);
            fold_preds.push_back({s,
                                  s >= model.threshold ? Label::Random : Label::NotRandom,
                                  corpus[idx].label});
        }
        FoldMetrics fm = compute_metrics(fold_preds);
        report.fold_values.push_back(fm.values);
        pooled.insert(pooled.end(), fold_preds.begin(), fold_preds.end());
        for (std::size_t idx : fold) in_test[idx] = false;
    }

    FoldMetrics pooled_metrics = compute_metrics(pooled);
    report.pooled = pooled_metrics.values;
    report.confusion = pooled_metrics.confusion;
    report.n_evaluated = pooled.size();
    report.fold_mean = map_metrics(report.fold_values, mean_of);
    report.fold_std = map_metrics(report.fold_values, sample_std_of);
    return report;
}

AblationGrid run_ablation(const std::vector<LabeledString>& corpus,
                          const std::vector<FeatureConfig>& grid, ModelKind kind,
                          int k, std::uint64_t seed, const TrainOptions& options) {
    if (grid.empty()) throw data_error("run_ablation: empty configuration grid");
    AblationGrid rows;
    rows.reserve(grid.size());
    for (const auto& config : grid) {
        // identical seed -> identical fold splits for every configuration
        rows.push_back({config, kfold_cv(corpus, kind, config, k, seed, options)});
    }
    return rows;
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                        std::uint64_t seed) {
    if (n > population) {
        throw data_error("sample_indices: sample size exceeds population");
    }
    std::vector<std::size_t> idx(population);
    for (std::size_t i = 0; i < population; ++i) idx[i] = i;
    Rng rng(seed);
    // partial Fisher-Yates: after i steps the first i entries are the sample
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, population - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    return idx;
}

namespace {

void print_values(std::ostream& out, const char* tag, const MetricValues& v) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", tag,
                  v.accuracy, v.f1, v.kappa, v.precision, v.recall, v.roc_auc);
    out << buf << '\n';
}

}  // namespace

void write_report(const MetricsReport& report, ModelKind kind,
                  const FeatureConfig& config, std::ostream& out) {
    out << "model: " << model_kind_name(kind) << '\n';
    out << "features: " << config.label() << '\n';
    out << "folds: " << report.k << '\n';
    out << "seed: " << report.seed << '\n';
    out << "evaluated: " << report.n_evaluated << '\n';
    out << "fold,accuracy,f1,kappa,precision,recall,roc_auc\n";
    for (std::size_t i = 0; i < report.fold_values.size(); ++i) {
        print_values(out, std::to_string(i).c_str(), report.fold_values[i]);
    }
    print_values(out, "mean", report.fold_mean);
    print_values(out, "std", report.fold_std);
    print_values(out, "pooled", report.pooled);
    out << "confusion: tp=" << report.confusion.tp << " fp=" << report.confusion.fp
        << " fn=" << report.confusion.fn << " tn=" << report.confusion.tn << '\n';
}

void write_folds_csv(const MetricsReport& report, std::ostream& out) {
    out << "fold,accuracy,f1,kappa,precision,recall,roc_auc\n";
    for (std::size_t i = 0; i < report.fold_values.size(); ++i) {
        print_values(out, std::to_string(i).c_str(), report.fold_values[i]);
    }
}

void write_ablation_csv(const AblationGrid& grid, std::ostream& out) {
    out << "config,metric,value\n";
    for (const auto& row : grid) {
        const std::string label = row.config.label();
        const MetricValues& v = row.report.pooled;
        const std::pair<const char*, double> metrics[] = {
            {"accuracy", v.accuracy}, {"f1", v.f1},
            {"kappa", v.kappa},       {"precision", v.precision},
            {"recall", v.recall},     {"roc_auc", v.roc_auc},
        };
        for (const auto& [name, value] : metrics) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", value);
            out << label << ',' << name << ',' << buf << '\n';
        }
    }
}

}  // namespace namesift
