// namesift: detect randomly generated 15-character screen names, train and
// evaluate the classifiers behind the detector, and filter tweet streams
// into annotated bot datasets.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "namesift/corpus.hpp"
#include "namesift/dates.hpp"
#include "namesift/error.hpp"
#include "namesift/eval.hpp"
#include "namesift/models.hpp"
#include "namesift/rng.hpp"
#include "namesift/stats.hpp"
#include "namesift/stream.hpp"
#include "namesift/version.hpp"

namespace {

using namespace namesift;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

// stdout or a file, chosen by path ("-" = stdout)
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw io_error("cannot open output: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        stream().flush();
        if (file_.is_open() && !file_) throw io_error("error writing output");
    }

  private:
    std::ofstream file_;
};

std::string config_hash(const std::string& canonical) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical)));
    return buf;
}

void write_header(std::ostream& out, const std::string& seed_text,
                  const std::string& canonical_config) {
    out << "# namesift " << NAMESIFT_VERSION << '\n';
    out << "# seed: " << seed_text << '\n';
    out << "# config-hash: " << config_hash(canonical_config) << '\n';
}

// --- shared option blocks -------------------------------------------------

struct CorpusOptions {
    std::string corpus_path;  // labeled CSV; empty = generate
    std::size_t n_random = 20000;
    std::size_t n_human = 20000;
    std::uint64_t corpus_seed = 1;
    std::string human_file;  // plain handle list for the NotRandom class

    void attach(CLI::App* cmd) {
        cmd->add_option("--corpus", corpus_path,
                        "Labeled corpus CSV (text,label); overrides generation");
        cmd->add_option("--n-random", n_random, "Generated random handles")
            ->capture_default_str();
        cmd->add_option("--n-human", n_human, "Generated human-like handles")
            ->capture_default_str();
        cmd->add_option("--corpus-seed", corpus_seed, "Corpus generation seed")
            ->capture_default_str();
        cmd->add_option("--human-file", human_file,
                        "Plain file of human handles, one per line");
    }

    std::vector<LabeledString> load() const {
        if (!corpus_path.empty()) {
            auto loaded = read_corpus_csv_file(corpus_path);
            if (loaded.skipped_blank > 0) {
                std::cerr << "warning: skipped " << loaded.skipped_blank
                          << " blank corpus lines\n";
            }
            return loaded.corpus;
        }
        CorpusSpec spec{n_random, n_human, corpus_seed,
                        human_file.empty() ? HumanSource::Generator : HumanSource::File,
                        human_file};
        return load_corpus(spec).corpus;
    }

    std::string canonical() const {
        std::ostringstream out;
        out << "corpus=" << corpus_path << ";n_random=" << n_random
            << ";n_human=" << n_human << ";corpus_seed=" << corpus_seed
            << ";human_file=" << human_file;
        return out.str();
    }
};

struct FeatureOptions {
    std::vector<int> orders{2};
    bool no_entropy = false;
    bool no_case_counts = false;
    bool no_lowercase = false;
    bool standardize_dense = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--ngram", orders, "Character n-gram orders (repeatable)")
            ->capture_default_str();
        cmd->add_flag("--no-entropy", no_entropy, "Drop the entropy feature");
        cmd->add_flag("--no-case-counts", no_case_counts,
                      "Drop the case/digit fraction features");
        cmd->add_flag("--no-lowercase", no_lowercase,
                      "Keep case when forming n-grams");
        cmd->add_flag("--standardize-dense", standardize_dense,
                      "Z-score the dense block with corpus statistics");
    }

    FeatureConfig config() const {
        FeatureConfig cfg;
        cfg.ngram_orders = orders;
        cfg.use_entropy = !no_entropy;
        cfg.use_case_counts = !no_case_counts;
        cfg.lowercase_ngrams = !no_lowercase;
        cfg.standardize_dense = standardize_dense;
        cfg.validate();
        return cfg;
    }
};

ModelKind parse_kind(const std::string& name) {
    if (name == "logreg") return ModelKind::LogReg;
    if (name == "nb" || name == "naive_bayes") return ModelKind::NaiveBayes;
    if (name == "entropy" || name == "entropy_threshold") {
        return ModelKind::EntropyThreshold;
    }
    throw data_error("unknown model kind: " + name);
}

// --- subcommands ------------------------------------------------------------

void cmd_gen_corpus(const CorpusOptions& corpus_opts, const std::string& out_path) {
    auto corpus = corpus_opts.load();
    OutputTarget out(out_path);
    write_corpus_csv(corpus, out.stream());
    out.finish();
    write_header(std::cerr, std::to_string(corpus_opts.corpus_seed),
                 "gen-corpus;" + corpus_opts.canonical());
    std::cerr << "wrote " << corpus.size() << " labeled handles\n";
}

struct TrainOpts {
    std::string kind = "logreg";
    double l2 = 1e-4;
    int max_iters = 500;
    double tol = 1e-6;
    double alpha = 1.0;
    double threshold = 0.5;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model-kind", kind, "logreg | nb | entropy")
            ->capture_default_str();
        cmd->add_option("--l2", l2, "LogReg L2 penalty")->capture_default_str();
        cmd->add_option("--max-iters", max_iters, "LogReg iteration cap")
            ->capture_default_str();
        cmd->add_option("--tol", tol, "LogReg gradient max-norm tolerance")
            ->capture_default_str();
        cmd->add_option("--alpha", alpha, "Naive Bayes smoothing")
            ->capture_default_str();
        cmd->add_option("--threshold", threshold, "Decision threshold in (0,1)")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Training seed")->capture_default_str();
    }

    TrainOptions options() const {
        TrainOptions opts;
        opts.logreg = {l2, max_iters, tol, seed};
        opts.nb_alpha = alpha;
        opts.decision_threshold = threshold;
        return opts;
    }

    std::string canonical() const {
        std::ostringstream out;
        out << "kind=" << kind << ";l2=" << l2 << ";max_iters=" << max_iters
            << ";tol=" << tol << ";alpha=" << alpha << ";threshold=" << threshold
            << ";seed=" << seed;
        return out.str();
    }
};

void cmd_train(const CorpusOptions& corpus_opts, const FeatureOptions& feature_opts,
               const TrainOpts& train_opts, const std::string& model_out) {
    auto corpus = corpus_opts.load();
    FeatureConfig config = feature_opts.config();
    ModelKind kind = parse_kind(train_opts.kind);

    TrainInfo info;
    TrainedModel model;
    switch (kind) {
        case ModelKind::LogReg:
            model = train_logreg(corpus, config, train_opts.options().logreg, &info);
            break;
        case ModelKind::NaiveBayes:
            model = train_nb(corpus, config, train_opts.alpha);
            break;
        case ModelKind::EntropyThreshold:
            model = train_entropy_baseline(corpus);
            break;
    }
    model.threshold = train_opts.threshold;
    model.validate();
    save_model(model, model_out);

    std::size_t correct = 0;
    for (const auto& item : corpus) {
        bool random = score_text(model, item.text) >= model.threshold;
        correct += random == (item.label == Label::Random);
    }

    write_header(std::cout, std::to_string(train_opts.seed),
                 "train;" + corpus_opts.canonical() + ";" + config.label() + ";" +
                     train_opts.canonical());
    std::cout << "model: " << model_kind_name(kind) << '\n'
              << "corpus: " << corpus.size() << " strings\n"
              << "features: " << config.label() << '\n';
    if (kind == ModelKind::LogReg) {
        std::cout << "converged: " << (info.converged ? "yes" : "no") << " after "
                  << info.iterations << " iterations\n";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6e", info.final_grad_norm);
        std::cout << "final_grad_max_norm: " << buf << '\n';
    }
    char acc[32];
    std::snprintf(acc, sizeof(acc), "%.6f", double(correct) / double(corpus.size()));
    std::cout << "training_accuracy: " << acc << '\n'
              << "model_file: " << model_out << '\n';
}

void cmd_eval(const CorpusOptions& corpus_opts, const FeatureOptions& feature_opts,
              const TrainOpts& train_opts, int k, std::uint64_t seed,
              const std::string& report_path, const std::string& folds_csv_path) {
    auto corpus = corpus_opts.load();
    FeatureConfig config = feature_opts.config();
    ModelKind kind = parse_kind(train_opts.kind);

    auto report = kfold_cv(corpus, kind, config, k, seed, train_opts.options());

    OutputTarget out(report_path);
    write_header(out.stream(), std::to_string(seed),
                 "eval;" + corpus_opts.canonical() + ";" + config.label() + ";" +
                     train_opts.canonical() + ";k=" + std::to_string(k));
    write_report(report, kind, config, out.stream());
    out.finish();

    if (!folds_csv_path.empty()) {
        OutputTarget csv(folds_csv_path);
        write_folds_csv(report, csv.stream());
        csv.finish();
    }
}

void cmd_ablate(const CorpusOptions& corpus_opts, const TrainOpts& train_opts,
                const std::vector<int>& orders, int k, std::uint64_t seed,
                const std::string& out_path) {
    auto corpus = corpus_opts.load();
    ModelKind kind = parse_kind(train_opts.kind);

    std::vector<FeatureConfig> grid;
    for (int n : orders) {
        for (bool entropy : {false, true}) {
            FeatureConfig config;
            config.ngram_orders = {n};
            config.use_entropy = entropy;
            config.validate();
            grid.push_back(config);
        }
    }
    auto rows = run_ablation(corpus, grid, kind, k, seed, train_opts.options());

    OutputTarget out(out_path);
    std::ostringstream orders_text;
    for (int n : orders) orders_text << n << ' ';
    write_header(out.stream(), std::to_string(seed),
                 "ablate;" + corpus_opts.canonical() + ";orders=" + orders_text.str() +
                     ";k=" + std::to_string(k) + ";" + train_opts.canonical());
    write_ablation_csv(rows, out.stream());
    out.finish();
}

void cmd_classify(const std::string& model_path, const std::string& name,
                  const std::string& input_path, const std::string& out_path) {
    TrainedModel model = load_model(model_path);

    if (!name.empty()) {
        double p = predict_proba(model, name);
        const char* label = p >= model.threshold ? "random" : "human";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", p);
        std::cout << label << ' ' << buf << '\n';
        return;
    }

    std::istream* in = &std::cin;
    std::ifstream file;
    if (input_path != "-") {
        file.open(input_path);
        if (!file) throw io_error("cannot open names file: " + input_path);
        in = &file;
    }

    OutputTarget out(out_path);
    out.stream() << "name,score,label\n";
    std::string line;
    std::size_t blank = 0;
    while (std::getline(*in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            ++blank;
            continue;
        }
        double p = predict_proba(model, line);
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", p);
        out.stream() << line << ',' << buf << ','
                     << (p >= model.threshold ? "random" : "human") << '\n';
    }
    out.finish();
    if (blank > 0) std::cerr << "warning: skipped " << blank << " blank lines\n";
}

int cmd_filter(const std::string& model_path, const std::string& input_path,
               const std::string& output_path, const std::string& stats_path,
               bool no_dedupe, const std::string& emit, double threshold,
               int workers, bool ordered, int bench) {
    TrainedModel model = load_model(model_path);

    FilterOptions options;
    options.dedupe = !no_dedupe;
    options.workers = workers;
    options.ordered = ordered;
    if (emit == "projection") {
        options.emit = FilterOptions::Emit::Projection;
    } else if (emit != "full") {
        throw data_error("unknown emit mode: " + emit);
    }
    if (threshold > 0.0) options.threshold_override = threshold;

    std::string canonical = "filter;model=" + model_path + ";input=" + input_path +
                            ";dedupe=" + (no_dedupe ? "off" : "on") + ";emit=" + emit +
                            ";workers=" + std::to_string(workers);

    if (bench > 0) {
        auto result = throughput_bench(input_path, model, bench, options);
        write_header(std::cout, "n/a", canonical + ";bench=" + std::to_string(bench));
        write_bench(result, std::cout);
        return kExitOk;
    }

    FilterStats stats = filter_file(input_path, output_path, model, options);

    if (!stats_path.empty()) {
        OutputTarget side(stats_path);
        write_header(side.stream(), "n/a", canonical);
        write_filter_stats(stats, side.stream());
        side.finish();
    }
    std::cerr << "seen=" << stats.records_seen
              << " malformed=" << stats.records_malformed
              << " prefilter=" << stats.prefilter_pass
              << " positive=" << stats.model_positive
              << " accounts=" << stats.unique_accounts
              << " emitted=" << stats.records_emitted
              << (stats.complete ? "" : " [INCOMPLETE]") << '\n';
    if (!stats.complete) {
        std::cerr << "error: " << stats.error << '\n';
        return kExitIo;
    }
    return kExitOk;
}

void cmd_stats(const std::string& input_path, const std::string& snapshot, int top_k,
               const std::string& baseline_path, const std::string& report_path,
               const std::string& csv_path) {
    auto snapshot_days = parse_iso_date(snapshot);
    if (!snapshot_days) {
        throw data_error("snapshot date must be YYYY-MM-DD, got: " + snapshot);
    }
    auto accounts = load_unique_accounts(input_path);
    auto table = summarize(accounts, *snapshot_days, top_k);
    table.snapshot_date = snapshot;

    OutputTarget out(report_path);
    write_header(out.stream(), "n/a",
                 "stats;input=" + input_path + ";snapshot=" + snapshot +
                     ";top_k=" + std::to_string(top_k) + ";baseline=" + baseline_path);
    write_summary_text(table, out.stream());
    if (!baseline_path.empty()) {
        auto baseline = read_summary_csv_file(baseline_path);
        auto comparison = compare(table, baseline);
        out.stream() << "\ncomparison (this sample vs baseline medians)\n";
        write_comparison(comparison, out.stream());
    }
    out.finish();

    if (!csv_path.empty()) {
        OutputTarget csv(csv_path);
        write_summary_csv(table, csv.stream());
        csv.finish();
    }
}

void cmd_audit_sample(const std::string& input_path, std::size_t n,
                      std::uint64_t seed, const std::string& out_path) {
    LineSource source(input_path);
    std::vector<std::string> lines;
    std::string line;
    while (source.next(line)) {
        if (!line.empty()) lines.push_back(line);
    }
    auto sampled = sample_for_audit(lines, n, seed);

    OutputTarget out(out_path);
    out.stream() << "screen_name,user_id,tweet_id,lang\n";
    for (const auto& record_line : sampled) {
        auto parsed = parse_tweet(record_line);
        if (!parsed.ok) continue;
        out.stream() << parsed.record.screen_name << ',' << parsed.record.user_id << ','
                     << parsed.record.tweet_id << ',' << parsed.record.lang << '\n';
    }
    out.finish();
    write_header(std::cerr, std::to_string(seed),
                 "audit-sample;input=" + input_path + ";n=" + std::to_string(n));
    std::cerr << "sampled " << sampled.size() << " of " << lines.size() << " records\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random screen-name detector and tweet-stream bot filter"};
    app.name("namesift");
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from a config file");

    // gen-corpus
    auto* gen = app.add_subcommand("gen-corpus",
                                   "Generate a labeled handle corpus as CSV");
    CorpusOptions gen_corpus_opts;
    gen_corpus_opts.attach(gen);
    std::string gen_out = "-";
    gen->add_option("-o,--output", gen_out, "Output CSV path, - for stdout")
        ->capture_default_str();

    // train
    auto* train = app.add_subcommand("train", "Train a classifier and save it");
    CorpusOptions train_corpus;
    FeatureOptions train_features;
    TrainOpts train_opts;
    train_corpus.attach(train);
    train_features.attach(train);
    train_opts.attach(train);
    std::string model_out;
    train->add_option("-o,--model-out", model_out, "Model file to write")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Stratified k-fold cross-validation");
    CorpusOptions eval_corpus;
    FeatureOptions eval_features;
    TrainOpts eval_train;
    eval_corpus.attach(eval);
    eval_features.attach(eval);
    eval_train.attach(eval);
    int eval_k = 10;
    std::uint64_t eval_seed = 42;
    std::string eval_report = "-", eval_folds_csv;
    eval->add_option("-k,--folds", eval_k, "Fold count")->capture_default_str();
    eval->add_option("--cv-seed", eval_seed, "Fold split seed")->capture_default_str();
    eval->add_option("--report", eval_report, "Report path, - for stdout")
        ->capture_default_str();
    eval->add_option("--folds-csv", eval_folds_csv, "Optional per-fold metrics CSV");

    // ablate
    auto* ablate = app.add_subcommand(
        "ablate", "Metric grid over n-gram order x entropy on/off");
    CorpusOptions ablate_corpus;
    TrainOpts ablate_train;
    ablate_corpus.attach(ablate);
    ablate_train.attach(ablate);
    std::vector<int> ablate_orders{1, 2, 3};
    int ablate_k = 5;
    std::uint64_t ablate_seed = 42;
    std::string ablate_out = "-";
    ablate->add_option("--orders", ablate_orders, "N-gram orders in the grid")
        ->capture_default_str();
    ablate->add_option("-k,--folds", ablate_k, "Fold count")->capture_default_str();
    ablate->add_option("--cv-seed", ablate_seed, "Fold split seed")
        ->capture_default_str();
    ablate->add_option("-o,--output", ablate_out, "Plot-data CSV path, - for stdout")
        ->capture_default_str();

    // classify
    auto* classify = app.add_subcommand("classify",
                                        "Score one name or a file of names");
    std::string classify_model, classify_name, classify_input = "-",
                classify_out = "-";
    classify->add_option("--model", classify_model, "Trained model file")->required();
    classify->add_option("--name", classify_name, "Single screen name to classify");
    classify->add_option("--input", classify_input,
                         "Names file, one per line, - for stdin")
        ->capture_default_str();
    classify->add_option("-o,--output", classify_out, "CSV output path, - for stdout")
        ->capture_default_str();

    // filter
    auto* filter = app.add_subcommand(
        "filter", "Stream NDJSON tweets through the detector");
    std::string filter_model, filter_input = "-", filter_output = "-", filter_stats;
    bool filter_no_dedupe = false, filter_ordered = false;
    std::string filter_emit = "full";
    double filter_threshold = 0.0;
    int filter_workers = 1, filter_bench = 0;
    filter->add_option("--model", filter_model, "Trained model file")->required();
    filter->add_option("--input", filter_input,
                       "NDJSON input (.gz detected), - for stdin")
        ->capture_default_str();
    filter->add_option("--output", filter_output, "Matched-record sink, - for stdout")
        ->capture_default_str();
    filter->add_option("--stats", filter_stats, "Sidecar stats file");
    filter->add_flag("--no-dedupe", filter_no_dedupe,
                     "Emit every matching tweet, not just the first per account");
    filter->add_option("--emit", filter_emit, "full | projection")
        ->capture_default_str();
    filter->add_option("--threshold", filter_threshold,
                       "Override the model decision threshold");
    filter->add_option("--workers", filter_workers, "Classify worker threads")
        ->capture_default_str();
    filter->add_flag("--ordered", filter_ordered,
                     "Guarantee input-order output (currently always holds)");
    filter->add_option("--bench", filter_bench,
                       "Run N timed repetitions against a null sink");

    // stats
    auto* stats = app.add_subcommand("stats",
                                     "Per-language summary of filtered accounts");
    std::string stats_input, stats_snapshot, stats_baseline, stats_report = "-",
                stats_csv;
    int stats_top_k = 7;
    stats->add_option("--input", stats_input, "Filter output NDJSON")->required();
    stats->add_option("--snapshot-date", stats_snapshot,
                      "Age reference date, YYYY-MM-DD")
        ->required();
    stats->add_option("--top-k", stats_top_k, "Language groups before pooling")
        ->capture_default_str();
    stats->add_option("--baseline", stats_baseline,
                      "Baseline summary CSV for comparison");
    stats->add_option("--report", stats_report, "Report path, - for stdout")
        ->capture_default_str();
    stats->add_option("--csv", stats_csv, "Optional summary CSV path");

    // audit-sample
    auto* audit = app.add_subcommand(
        "audit-sample", "Uniform sample of filter output for manual review");
    std::string audit_input, audit_out = "-";
    std::size_t audit_n = 1000;
    std::uint64_t audit_seed = 42;
    audit->add_option("--input", audit_input, "Filter output NDJSON")->required();
    audit->add_option("-n,--sample-size", audit_n, "Records to sample")
        ->capture_default_str();
    audit->add_option("--seed", audit_seed, "Sampling seed")->capture_default_str();
    audit->add_option("-o,--output", audit_out, "Sample CSV path, - for stdout")
        ->capture_default_str();

    // parent options (--config) may appear after the subcommand name
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);

        if (gen->parsed()) {
            cmd_gen_corpus(gen_corpus_opts, gen_out);
        } else if (train->parsed()) {
            cmd_train(train_corpus, train_features, train_opts, model_out);
        } else if (eval->parsed()) {
            cmd_eval(eval_corpus, eval_features, eval_train, eval_k, eval_seed,
                     eval_report, eval_folds_csv);
        } else if (ablate->parsed()) {
            cmd_ablate(ablate_corpus, ablate_train, ablate_orders, ablate_k,
                       ablate_seed, ablate_out);
        } else if (classify->parsed()) {
            cmd_classify(classify_model, classify_name, classify_input, classify_out);
        } else if (filter->parsed()) {
            return cmd_filter(filter_model, filter_input, filter_output, filter_stats,
                              filter_no_dedupe, filter_emit, filter_threshold,
                              filter_workers, filter_ordered, filter_bench);
        } else if (stats->parsed()) {
            cmd_stats(stats_input, stats_snapshot, stats_top_k, stats_baseline,
                      stats_report, stats_csv);
        } else if (audit->parsed()) {
            cmd_audit_sample(audit_input, audit_n, audit_seed, audit_out);
        }
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
