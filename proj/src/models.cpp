#include "namesift/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "namesift/error.hpp"

namespace namesift {

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::LogReg: return "logreg";
        case ModelKind::NaiveBayes: return "naive_bayes";
        case ModelKind::EntropyThreshold: return "entropy_threshold";
    }
    return "unknown";
}

ModelKind model_kind_from_name(std::string_view name) {
    if (name == "logreg") return ModelKind::LogReg;
    if (name == "naive_bayes") return ModelKind::NaiveBayes;
    if (name == "entropy_threshold") return ModelKind::EntropyThreshold;
    throw data_error("unknown model kind: " + std::string(name));
}

void TrainedModel::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw data_error("model threshold must lie in (0,1)");
    }
    config.validate();
    std::size_t dim = feature_dim();
    if (const auto* lr = std::get_if<LogRegParams>(&params)) {
        if (lr->weights.size() != dim) {
            throw data_error("logreg weight count does not match feature dimension");
        }
        for (double w : lr->weights) {
            if (!std::isfinite(w)) throw data_error("non-finite logreg weight");
        }
        if (!std::isfinite(lr->bias)) throw data_error("non-finite logreg bias");
    } else if (const auto* nb = std::get_if<NaiveBayesParams>(&params)) {
        for (int c = 0; c < 2; ++c) {
            if (nb->log_likelihood[c].size() != dim) {
                throw data_error("naive bayes likelihood size does not match dimension");
            }
        }
    }
}

namespace {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

void check_two_classes(const std::vector<LabeledString>& corpus) {
    bool has_random = false, has_human = false;
    for (const auto& item : corpus) {
        has_random |= item.label == Label::Random;
        has_human |= item.label == Label::NotRandom;
    }
    if (!has_random || !has_human) {
        throw data_error("training corpus must contain both classes");
    }
}

double dot_features(const FeatureVector& fv, std::span<const double> weights,
                    std::size_t vocab_size) {
    double z = 0.0;
    for (const auto& [col, value] : fv.sparse) z += weights[col] * value;
    for (std::size_t j = 0; j < fv.dense.size(); ++j) {
        z += weights[vocab_size + j] * fv.dense[j];
    }
    return z;
}

}  // namespace

namespace logreg_detail {

Dataset build_dataset(const std::vector<LabeledString>& corpus,
                      const NgramVocabulary& vocab, const FeatureConfig& config) {
    Dataset data;
    data.dim = vocab.size() + config.dense_size();
    data.x.reserve(corpus.size());
    data.y.reserve(corpus.size());
    for (const auto& item : corpus) {
        data.x.push_back(featurize(item.text, vocab, config));
        data.y.push_back(item.label == Label::Random ? 1 : 0);
    }
    return data;
}

double loss(const Dataset& data, std::span<const double> weights, double bias,
            double lambda) {
    std::size_t vocab_size = data.dim;
    if (!data.x.empty()) vocab_size = data.dim - data.x.front().dense.size();
    double nll = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        double z = dot_features(data.x[i], weights, vocab_size) + bias;
        // log(1+e^z) - y*z, computed stably
        double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        nll += softplus - static_cast<double>(data.y[i]) * z;
    }
    nll /= static_cast<double>(data.x.size());
    double reg = 0.0;
    for (double w : weights) reg += w * w;
    return nll + 0.5 * lambda * reg;
}

void gradient(const Dataset& data, std::span<const double> weights, double bias,
              double lambda, std::span<double> grad_w, double& grad_b) {
    std::size_t vocab_size = data.dim;
    if (!data.x.empty()) vocab_size = data.dim - data.x.front().dense.size();
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const FeatureVector& fv = data.x[i];
        double z = dot_features(fv, weights, vocab_size) + bias;
        double residual = sigmoid(z) - static_cast<double>(data.y[i]);
        for (const auto& [col, value] : fv.sparse) grad_w[col] += residual * value;
        for (std::size_t j = 0; j < fv.dense.size(); ++j) {
            grad_w[vocab_size + j] += residual * fv.dense[j];
        }
        grad_b += residual;
    }
    double inv_n = 1.0 / static_cast<double>(data.x.size());
    for (std::size_t j = 0; j < grad_w.size(); ++j) {
        grad_w[j] = grad_w[j] * inv_n + lambda * weights[j];
    }
    grad_b *= inv_n;
}

}  // namespace logreg_detail

TrainedModel train_logreg(const std::vector<LabeledString>& corpus,
                          const FeatureConfig& config, const LogRegHyper& hyper,
                          TrainInfo* info) {
    check_two_classes(corpus);
    TrainedModel model;
    model.kind = ModelKind::LogReg;
    model.config = config;
    model.vocab = fit_vocabulary(corpus, config);

    auto data = logreg_detail::build_dataset(corpus, model.vocab, config);
    for (const auto& fv : data.x) {
        for (const auto& [col, value] : fv.sparse) {
            if (!std::isfinite(value)) throw data_error("non-finite feature value");
        }
        for (double v : fv.dense) {
            if (!std::isfinite(v)) throw data_error("non-finite feature value");
        }
    }

    std::size_t dim = data.dim;
    std::vector<double> w(dim, 0.0), grad(dim, 0.0), trial(dim, 0.0);
    double bias = 0.0, grad_b = 0.0;

    TrainInfo local;
    TrainInfo& out = info ? *info : local;
    out = TrainInfo{};

    double current_loss = logreg_detail::loss(data, w, bias, hyper.l2_lambda);
    double step = 1.0;

    for (int iter = 0; iter < hyper.max_iters; ++iter) {
        logreg_detail::gradient(data, w, bias, hyper.l2_lambda, grad, grad_b);

        double grad_norm = std::abs(grad_b);
        double grad_sq = grad_b * grad_b;
        for (double g : grad) {
            grad_norm = std::max(grad_norm, std::abs(g));
            grad_sq += g * g;
        }
        out.final_grad_norm = grad_norm;
        if (grad_norm < hyper.tol) {
            out.converged = true;
            break;
        }

        // backtracking line search, Armijo sufficient decrease
        bool accepted = false;
        double trial_bias = bias, trial_loss = current_loss;
        while (step > 1e-14) {
            for (std::size_t j = 0; j < dim; ++j) trial[j] = w[j] - step * grad[j];
            trial_bias = bias - step * grad_b;
            trial_loss = logreg_detail::loss(data, trial, trial_bias, hyper.l2_lambda);
            if (trial_loss <= current_loss - 1e-4 * step * grad_sq) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // step underflow; cannot make progress

        w.swap(trial);
        bias = trial_bias;
        current_loss = trial_loss;
        out.loss_trace.push_back(current_loss);
        ++out.iterations;
        step = std::min(step * 2.0, 64.0);
    }
    out.final_loss = current_loss;

    LogRegParams params;
    params.weights = std::move(w);
    params.bias = bias;
    params.l2_lambda = hyper.l2_lambda;
    model.params = std::move(params);
    model.validate();
    return model;
}

TrainedModel train_nb(const std::vector<LabeledString>& corpus,
                      const FeatureConfig& config, double alpha) {
    check_two_classes(corpus);
    if (alpha < 0.0) throw data_error("naive bayes smoothing alpha must be >= 0");
    TrainedModel model;
    model.kind = ModelKind::NaiveBayes;
    model.config = config;
    model.vocab = fit_vocabulary(corpus, config);

    std::size_t vocab_size = model.vocab.size();
    std::size_t dim = model.feature_dim();
    std::array<std::vector<double>, 2> mass{std::vector<double>(dim, 0.0),
                                            std::vector<double>(dim, 0.0)};
    std::array<std::size_t, 2> class_count{0, 0};

    for (const auto& item : corpus) {
        int c = item.label == Label::Random ? 1 : 0;
        ++class_count[c];
        FeatureVector fv = featurize(item.text, model.vocab, config);
        for (const auto& [col, value] : fv.sparse) {
            if (value < 0.0) throw data_error("naive bayes: negative feature");
            mass[c][col] += value;
        }
        for (std::size_t j = 0; j < fv.dense.size(); ++j) {
            if (fv.dense[j] < 0.0) throw data_error("naive bayes: negative feature");
            mass[c][vocab_size + j] += fv.dense[j];
        }
    }

    NaiveBayesParams params;
    params.alpha = alpha;
    for (int c = 0; c < 2; ++c) {
        params.log_prior[c] = std::log(static_cast<double>(class_count[c]) /
                                       static_cast<double>(corpus.size()));
        double total = alpha * static_cast<double>(dim);
        for (double v : mass[c]) total += v;
        double log_total = std::log(total);
        params.log_likelihood[c].resize(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            double numer = mass[c][j] + alpha;
            params.log_likelihood[c][j] =
                numer > 0.0 ? std::log(numer) - log_total
                            : -std::numeric_limits<double>::infinity();
        }
    }
    model.params = std::move(params);
    model.validate();
    return model;
}

TrainedModel train_entropy_baseline(const std::vector<LabeledString>& corpus) {
    check_two_classes(corpus);
    TrainedModel model;
    model.kind = ModelKind::EntropyThreshold;
    model.config.ngram_orders = {2};
    model.config.use_case_counts = false;
    model.config.use_entropy = true;
    // a minimal vocabulary keeps the persistence format uniform
    model.vocab = fit_vocabulary(corpus, model.config);

    struct Point { double h; int y; };
    std::vector<Point> points;
    points.reserve(corpus.size());
    for (const auto& item : corpus) {
        points.push_back({shannon_entropy(item.text), item.label == Label::Random ? 1 : 0});
    }
    std::sort(points.begin(), points.end(),
              [](const Point& a, const Point& b) { return a.h < b.h; });

    std::size_t n = points.size();
    std::size_t total_random = 0;
    for (const auto& p : points) total_random += p.y;

    // classify Random iff h >= t; sweep t across midpoints of adjacent
    // distinct entropies.  random_below[i] = randoms among points[0..i).
    double best_threshold = points.front().h;
    std::size_t best_correct = total_random;  // t <= min: everything Random
    bool have_midpoint = false;
    std::size_t random_below = 0;
    for (std::size_t i = 1; i < n; ++i) {
        random_below += points[i - 1].y;
        if (points[i].h == points[i - 1].h) continue;
        double mid = 0.5 * (points[i - 1].h + points[i].h);
        // below the cut: NotRandom predictions; above: Random
        std::size_t correct = (i - random_below) + (total_random - random_below);
        if (!have_midpoint || correct > best_correct) {
            best_threshold = mid;
            best_correct = correct;
            have_midpoint = true;
        }
    }

    EntropyThresholdParams params;
    params.threshold_bits = best_threshold;
    model.params = params;
    model.validate();
    return model;
}

double score_features(const TrainedModel& model, const FeatureVector& fv) {
    std::size_t vocab_size = model.vocab.size();
    if (const auto* lr = std::get_if<LogRegParams>(&model.params)) {
        double z = dot_features(fv, lr->weights, vocab_size) + lr->bias;
        return sigmoid(z);
    }
    if (const auto* nb = std::get_if<NaiveBayesParams>(&model.params)) {
        std::array<double, 2> joint = nb->log_prior;
        for (int c = 0; c < 2; ++c) {
            for (const auto& [col, value] : fv.sparse) {
                if (value > 0.0) joint[c] += value * nb->log_likelihood[c][col];
            }
            for (std::size_t j = 0; j < fv.dense.size(); ++j) {
                double v = fv.dense[j];
                if (v > 0.0) joint[c] += v * nb->log_likelihood[c][vocab_size + j];
            }
        }
        double hi = std::max(joint[0], joint[1]);
        if (!std::isfinite(hi)) return joint[1] > joint[0] ? 1.0 : 0.5;
        double e0 = std::exp(joint[0] - hi), e1 = std::exp(joint[1] - hi);
        return e1 / (e0 + e1);
    }
    const auto& et = std::get<EntropyThresholdParams>(model.params);
    // dense layout for the baseline config is [entropy]
    double h = fv.dense.empty() ? 0.0 : fv.dense.back();
    return sigmoid(h - et.threshold_bits);
}

double score_text(const TrainedModel& model, std::string_view text) {
    if (text.empty()) throw data_error("score: empty string");
    return score_features(model, featurize(text, model.vocab, model.config));
}

double predict_proba(const TrainedModel& model, std::string_view text) {
    if (text.empty()) throw data_error("predict_proba: empty string");
    if (!prefilter(text).candidate) return 0.0;
    return score_text(model, text);
}

Label classify(const TrainedModel& model, std::string_view text) {
    return predict_proba(model, text) >= model.threshold ? Label::Random
                                                         : Label::NotRandom;
}

}  // namespace namesift
