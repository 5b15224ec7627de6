#include "cli/cli.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "lmvs/condenser/condense.hpp"
#include "lmvs/datamodel/interchange.hpp"
#include "lmvs/datamodel/manifest.hpp"
#include "lmvs/error.hpp"
#include "lmvs/evaluator/protocol.hpp"
#include "lmvs/evaluator/size_report.hpp"
#include "lmvs/evaluator/splits.hpp"
#include "lmvs/evaluator/synthetic.hpp"
#include "lmvs/scorer/checkpoint.hpp"
#include "lmvs/scorer/predict.hpp"
#include "lmvs/scorer/train.hpp"
#include "lmvs/summarizer/report.hpp"
#include "lmvs/util/atomic_file.hpp"

namespace lmvs::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::map<std::string, evaluator::PipelineMethod> kPipelineMethods = {
    {"cosine", evaluator::PipelineMethod::cosine},
    {"kmeans", evaluator::PipelineMethod::kmeans},
    {"unfiltered", evaluator::PipelineMethod::unfiltered},
    {"no-input", evaluator::PipelineMethod::no_input}};

const std::map<std::string, condenser::CondenseMethod> kCondenseMethods = {
    {"cosine", condenser::CondenseMethod::cosine},
    {"kmeans", condenser::CondenseMethod::kmeans},
    {"unfiltered", condenser::CondenseMethod::unfiltered}};

const std::map<std::string, evaluator::Aggregation> kAggregations = {{"max", evaluator::Aggregation::max},
                                                                     {"mean", evaluator::Aggregation::mean}};

const std::map<std::string, scorer::Optimizer> kOptimizers = {{"adam", scorer::Optimizer::adam},
                                                              {"sgd", scorer::Optimizer::sgd}};

const std::map<std::string, scorer::PositionalEncoding> kPositional = {
    {"sinusoidal", scorer::PositionalEncoding::sinusoidal}, {"none", scorer::PositionalEncoding::none}};

/// Enum-valued option parsed as one of the names in `names`.
template <typename T>
CLI::Option* add_enum(CLI::App& app, const std::string& flag, T& target, const std::map<std::string, T>& names,
                      const std::string& description) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : names) keys.push_back(k);
    return app
        .add_option_function<std::string>(
            flag, [&target, &names](const std::string& v) { target = names.at(CLI::detail::to_lower(v)); }, description)
        ->check(CLI::IsMember(keys, CLI::ignore_case));
}

/// Model and training flags shared by `train` and `evaluate`.
struct LearningFlags {
    scorer::ModelConfig model;
    scorer::TrainConfig train;
    double grad_clip = 0.0;

    void add_to(CLI::App& app) {
        app.add_option("--layers", model.n_layers, "Encoder layers")->capture_default_str();
        app.add_option("--heads", model.n_heads, "Attention heads")->capture_default_str();
        app.add_option("--d-ff", model.d_ff, "Feed-forward width (default 4 x d_model)");
        app.add_option("--max-seq-len", model.max_seq_len, "Longest accepted sequence")->capture_default_str();
        app.add_option("--dropout", model.dropout, "Dropout rate")->capture_default_str();
        add_enum(app, "--positional", model.positional_encoding, kPositional, "Positional encoding");
        app.add_option("--lr", train.learning_rate, "Learning rate")->capture_default_str();
        app.add_option("--epochs", train.epochs, "Training epochs")->capture_default_str();
        app.add_option("--batch-size", train.batch_size, "Sequences per minibatch")->capture_default_str();
        app.add_option("--grad-clip", grad_clip, "Global gradient-norm clip (0 disables)");
        add_enum(app, "--optimizer", train.optimizer, kOptimizers, "adam or sgd");
    }

    /// Fills data-dependent defaults once the embedding dimension is known.
    void finalize(int d_model, bool d_ff_given) {
        model.d_model = d_model;
        if (!d_ff_given) model.d_ff = 4 * d_model;
        train.grad_clip = grad_clip > 0.0 ? std::optional<double>(grad_clip) : std::nullopt;
    }
};

std::string number(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

std::map<std::string, std::string> learning_metadata(const LearningFlags& f) {
    return {{"model.n_layers", std::to_string(f.model.n_layers)},
            {"model.n_heads", std::to_string(f.model.n_heads)},
            {"model.d_ff", std::to_string(f.model.d_ff)},
            {"model.max_seq_len", std::to_string(f.model.max_seq_len)},
            {"model.dropout", number(f.model.dropout)},
            {"model.positional_encoding", std::string(scorer::to_string(f.model.positional_encoding))},
            {"train.optimizer", std::string(scorer::to_string(f.train.optimizer))},
            {"train.learning_rate", number(f.train.learning_rate)},
            {"train.epochs", std::to_string(f.train.epochs)},
            {"train.batch_size", std::to_string(f.train.batch_size)},
            {"train.grad_clip", f.train.grad_clip ? number(*f.train.grad_clip) : "none"}};
}

void ensure_distinct(const fs::path& input, const fs::path& output) {
    std::error_code ec;
    if (fs::exists(output, ec) && fs::equivalent(input, output, ec)) {
        throw ConfigError("output path must differ from the input file; inputs are never modified");
    }
}

/// Condensed input for `method`: the stored section when present, otherwise
/// condensed now. The no-input variant replaces the embeddings with ones.
condenser::CondensedSequence scorer_input(const datamodel::CaptionedVideo& video,
                                          evaluator::PipelineMethod method, std::uint64_t seed) {
    const auto cm = method == evaluator::PipelineMethod::kmeans       ? condenser::CondenseMethod::kmeans
                    : method == evaluator::PipelineMethod::unfiltered ? condenser::CondenseMethod::unfiltered
                                                                      : condenser::CondenseMethod::cosine;
    const auto stored = video.condensed.find(std::string(condenser::to_string(cm)));
    auto seq = stored != video.condensed.end() ? stored->second : condenser::condense_video(video, cm, seed);
    if (method == evaluator::PipelineMethod::no_input) seq = scorer::make_no_input_baseline(seq);
    return seq;
}

bool is_manifest(const fs::path& path) {
    try {
        const auto doc = ordered_json::parse(util::read_file(path));
        return doc.is_object() && doc.value("format", "") == datamodel::kManifestFormat;
    } catch (const nlohmann::json::exception&) {
        return false;
    }
}

// ---------------------------------------------------------------------------

struct ValidateCmd {
    std::vector<fs::path> paths;

    int run(std::ostream& out) const {
        bool clean = true;
        for (const auto& path : paths) {
            if (is_manifest(path)) {
                const auto report = datamodel::validate_manifest(datamodel::load_manifest(path));
                for (const auto& e : report.entries) {
                    out << path.string() << ": " << (e.video.empty() ? "" : e.video + ": ") << e.message << '\n';
                }
                clean = clean && report.clean();
                if (report.clean()) out << path.string() << ": ok\n";
                continue;
            }
            try {
                datamodel::load_captioned_video(path);
                out << path.string() << ": ok\n";
            } catch (const ValidationError& e) {
                out << path.string() << ": " << e.what() << '\n';
                clean = false;
            } catch (const ParseError& e) {
                out << path.string() << ": " << e.what() << '\n';
                clean = false;
            }
        }
        return clean ? kSuccess : kDataError;
    }
};

struct GenSyntheticCmd {
    fs::path out_dir;
    evaluator::SyntheticSpec spec;

    int run(std::ostream& out) const {
        const auto manifest = evaluator::write_synthetic_dataset(out_dir, spec);
        out << manifest.string() << '\n';
        return kSuccess;
    }
};

struct CondenseCmd {
    fs::path input;
    fs::path output;
    condenser::CondenseMethod method = condenser::CondenseMethod::cosine;
    std::uint64_t seed = 0;
    int jobs = 1;

    int run(std::ostream& out) const {
        ensure_distinct(input, output);
        auto video = datamodel::load_captioned_video(input);
        video.condensed[std::string(condenser::to_string(method))] =
            condenser::condense_video(video, method, seed, jobs);
        datamodel::save_captioned_video(output, video);
        out << output.string() << '\n';
        return kSuccess;
    }
};

struct TrainCmd {
    fs::path manifest;
    fs::path model_out;
    fs::path loss_out;
    evaluator::PipelineMethod method = evaluator::PipelineMethod::cosine;
    std::uint64_t seed = 0;
    int jobs = 1;
    LearningFlags flags;
    CLI::Option* d_ff = nullptr;

    int run(std::ostream& out) {
        const auto m = datamodel::load_manifest(manifest);
        const auto videos = datamodel::load_dataset(m, jobs);
        if (videos.empty()) throw ValidationError("manifest", "no videos listed");
        flags.finalize(videos.front().embedding_dim, d_ff->count() > 0);
        flags.model.seed = mix_seed(seed, 1);
        flags.train.seed = mix_seed(seed, 2);

        const auto inputs = evaluator::prepare_inputs(videos, method, seed, jobs);
        std::vector<scorer::Example> examples;
        for (std::size_t i = 0; i < videos.size(); ++i) examples.push_back(scorer::make_example(videos[i], inputs[i]));
        const auto result = scorer::train(scorer::init_model(flags.model), examples, flags.train);

        scorer::Checkpoint ckpt{result.model, learning_metadata(flags)};
        ckpt.metadata["method"] = std::string(evaluator::to_string(method));
        ckpt.metadata["seed"] = std::to_string(seed);
        ckpt.metadata["model_seed"] = std::to_string(flags.model.seed);
        ckpt.metadata["train_seed"] = std::to_string(flags.train.seed);
        ckpt.metadata["dataset"] = m.name;
        scorer::save_checkpoint(model_out, ckpt);
        if (!loss_out.empty()) util::write_file_atomic(loss_out, scorer::format_loss_history(result.history));
        out << "final train loss " << number(result.history.back().train_loss) << '\n';
        return kSuccess;
    }
};

/// Shared by `predict` and `summarize`.
struct ScoringInputs {
    fs::path model;
    fs::path input;
    fs::path output;
    std::string method_override;
    std::uint64_t seed = 0;

    void add_to(CLI::App& app) {
        app.add_option("--model", model, "Checkpoint written by `train`")->required()->check(CLI::ExistingFile);
        app.add_option("--input", input, "Interchange file")->required()->check(CLI::ExistingFile);
        app.add_option("--output", output, "Report path")->required();
        app.add_option("--method", method_override, "Override the checkpoint's input method")
            ->check(CLI::IsMember({"cosine", "kmeans", "unfiltered", "no-input"}));
        app.add_option("--seed", seed, "Seed for condensing when the file has no condensed section")
            ->capture_default_str();
    }

    struct Loaded {
        scorer::Checkpoint checkpoint;
        datamodel::CaptionedVideo video;
        evaluator::PipelineMethod method;
        condenser::CondensedSequence condensed;
        scorer::ScorePrediction prediction;
    };

    Loaded load() const {
        ensure_distinct(input, output);
        Loaded l{scorer::load_checkpoint(model), datamodel::load_captioned_video(input),
                 evaluator::PipelineMethod::cosine, {}, {}};
        std::string name = method_override;
        if (name.empty()) {
            const auto it = l.checkpoint.metadata.find("method");
            name = it == l.checkpoint.metadata.end() ? "cosine" : it->second;
        }
        const auto method = evaluator::parse_pipeline_method(name);
        if (!method) throw ParseError("checkpoint names unknown method '" + name + "'");
        l.method = *method;
        l.condensed = scorer_input(l.video, l.method, seed);
        l.prediction = scorer::predict(l.checkpoint.model, l.condensed, l.video);
        return l;
    }

    std::map<std::string, std::string> metadata(const Loaded& l) const {
        auto meta = l.checkpoint.metadata;
        meta["method"] = std::string(evaluator::to_string(l.method));
        meta["condense_seed"] = std::to_string(seed);
        return meta;
    }
};

struct PredictCmd {
    ScoringInputs io;

    int run(std::ostream& out) const {
        const auto l = io.load();
        ordered_json doc;
        doc["format"] = "lmvs-prediction";
        doc["format_version"] = 1;
        doc["video_id"] = l.video.video_id;
        doc["method"] = evaluator::to_string(l.method);
        doc["native_fps"] = l.video.native_fps;
        doc["per_second"] = l.prediction.per_second;
        doc["per_frame"] = l.prediction.per_frame;
        doc["metadata"] = io.metadata(l);
        util::write_file_atomic(io.output, doc.dump(2) + "\n");
        out << io.output.string() << '\n';
        return kSuccess;
    }
};

struct SummarizeCmd {
    ScoringInputs io;
    double budget = summarizer::kDefaultBudgetFraction;
    bool full_captions = false;

    int run(std::ostream& out) const {
        const auto l = io.load();
        const auto summary = summarizer::build_summary(l.video, l.condensed, l.prediction, budget);
        summarizer::SummaryReportOptions options;
        options.full_captions = full_captions;
        options.metadata = io.metadata(l);
        options.metadata["budget_fraction"] = number(budget);
        util::write_file_atomic(io.output, summarizer::format_summary_report(summary, l.video, l.condensed, options));
        out << "selected " << summary.total_selected_frames << " of " << l.video.native_frame_count()
            << " frames (budget " << summary.budget_frames << ")\n";
        for (const auto& line : summary.text_summary) out << "  [" << line.second << "s] " << line.caption << '\n';
        return kSuccess;
    }
};

struct EvaluateCmd {
    fs::path manifest;
    fs::path output;
    evaluator::PipelineConfig config;
    int n_splits = evaluator::kDefaultSplits;
    double test_fraction = evaluator::kDefaultTestFraction;
    LearningFlags flags;
    CLI::Option* d_ff = nullptr;

    int run(std::ostream& out) {
        const auto m = datamodel::load_manifest(manifest);
        const auto videos = datamodel::load_dataset(m, config.jobs);
        if (videos.empty()) throw ValidationError("manifest", "no videos listed");
        flags.finalize(videos.front().embedding_dim, d_ff->count() > 0);
        config.model = flags.model;
        config.train = flags.train;

        std::vector<std::string> ids;
        for (const auto& v : videos) ids.push_back(v.video_id);
        const auto plan = evaluator::make_splits(ids, n_splits, test_fraction, config.seed);
        const auto result = evaluator::evaluate_protocol(videos, config, plan);
        util::write_file_atomic(output, evaluator::format_eval_report(result, config, plan, {{"dataset", m.name}}));
        for (const auto& s : result.splits) {
            out << "split " << s.split_id << ": F " << number(s.mean.f_score) << '\n';
        }
        out << "mean F " << number(result.mean.f_score) << " (random " << number(result.random_f) << ")\n";
        return kSuccess;
    }
};

struct SizeReportCmd {
    fs::path manifest;
    std::vector<std::string> entries;
    std::string baseline;
    fs::path output;

    int run(std::ostream& out) const {
        std::vector<std::pair<std::string, double>> sizes;
        if (!manifest.empty()) {
            const auto videos = datamodel::load_dataset(datamodel::load_manifest(manifest));
            sizes = evaluator::dataset_input_sizes(videos);
        }
        for (const auto& e : entries) {
            const auto eq = e.rfind('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError("--entry expects LABEL=MEGABYTES, got '" + e + "'");
            double mb = 0.0;
            try {
                std::size_t used = 0;
                mb = std::stod(e.substr(eq + 1), &used);
                if (used != e.size() - eq - 1) throw std::invalid_argument(e);
            } catch (const std::exception&) {
                throw ConfigError("--entry has a non-numeric size: '" + e + "'");
            }
            sizes.emplace_back(e.substr(0, eq), mb);
        }
        const auto text = evaluator::format_size_report(evaluator::size_report(sizes, baseline));
        if (output.empty()) {
            out << text;
        } else {
            util::write_file_atomic(output, text);
        }
        return kSuccess;
    }
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Language-only video summarization pipeline", "lmvs"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI file supplying any flag; command-line flags win");
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    ValidateCmd validate;
    auto* validate_app = app.add_subcommand("validate", "Check interchange files or dataset manifests");
    validate_app->add_option("paths", validate.paths, "Files to check")->required()->check(CLI::ExistingFile);

    GenSyntheticCmd gen;
    auto* gen_app = app.add_subcommand("gen-synthetic", "Write a planted-signal synthetic dataset");
    gen_app->add_option("--out", gen.out_dir, "Output directory")->required();
    gen_app->add_option("--seed", gen.spec.seed, "Generator seed")->required();
    gen_app->add_option("--videos", gen.spec.n_videos, "Number of videos")->capture_default_str();
    gen_app->add_option("--seconds", gen.spec.seconds, "Duration of each video")->capture_default_str();
    gen_app->add_option("--dim", gen.spec.dim, "Embedding dimension")->capture_default_str();
    gen_app->add_option("--users", gen.spec.n_users, "Annotators per video")->capture_default_str();
    gen_app->add_option("--native-fps", gen.spec.native_fps, "Native frame rate")->capture_default_str();
    gen_app->add_option("--annotation-noise", gen.spec.annotation_noise, "Annotator noise")->capture_default_str();
    gen_app->add_option("--caption-noise", gen.spec.caption_noise, "Caption embedding noise")->capture_default_str();
    gen_app->add_option("--outlier-prob", gen.spec.outlier_prob, "Per-frame outlier caption probability")
        ->capture_default_str();

    CondenseCmd condense;
    auto* condense_app = app.add_subcommand("condense", "Add a condensed section to an interchange file");
    condense_app->add_option("--input", condense.input, "Interchange file")->required()->check(CLI::ExistingFile);
    condense_app->add_option("--output", condense.output, "Output interchange file")->required();
    add_enum(*condense_app, "--method", condense.method, kCondenseMethods, "cosine, kmeans or unfiltered");
    condense_app->add_option("--seed", condense.seed, "k-means tie-break seed")->capture_default_str();
    condense_app->add_option("--jobs", condense.jobs, "Worker threads")->capture_default_str();

    TrainCmd train;
    auto* train_app = app.add_subcommand("train", "Train the scorer on every video of a manifest");
    train_app->add_option("--manifest", train.manifest, "Dataset manifest")->required()->check(CLI::ExistingFile);
    train_app->add_option("--model-out", train.model_out, "Checkpoint path")->required();
    train_app->add_option("--loss-out", train.loss_out, "Loss history CSV path");
    add_enum(*train_app, "--method", train.method, kPipelineMethods, "cosine, kmeans, unfiltered or no-input");
    train_app->add_option("--seed", train.seed, "Run seed")->required();
    train_app->add_option("--jobs", train.jobs, "Worker threads for loading and condensing")->capture_default_str();
    train.flags.add_to(*train_app);
    train.d_ff = train_app->get_option("--d-ff");

    PredictCmd predict;
    auto* predict_app = app.add_subcommand("predict", "Score one video with a trained checkpoint");
    predict.io.add_to(*predict_app);

    SummarizeCmd summarize;
    auto* summarize_app = app.add_subcommand("summarize", "Build the keyshot and text summary of one video");
    summarize.io.add_to(*summarize_app);
    summarize_app->add_option("--budget", summarize.budget, "Summary length as a fraction of the video")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    summarize_app->add_flag("--full-captions", summarize.full_captions, "List every caption of the selected shots");

    EvaluateCmd evaluate;
    auto* evaluate_app = app.add_subcommand("evaluate", "Run the random-split train/test protocol");
    evaluate_app->add_option("--manifest", evaluate.manifest, "Dataset manifest")->required()->check(CLI::ExistingFile);
    evaluate_app->add_option("--output", evaluate.output, "Report path")->required();
    add_enum(*evaluate_app, "--method", evaluate.config.method, kPipelineMethods, "cosine, kmeans, unfiltered or no-input");
    evaluate_app->add_option("--seed", evaluate.config.seed, "Run seed")->required();
    evaluate_app->add_option("--splits", evaluate.n_splits, "Number of random splits")->capture_default_str();
    evaluate_app->add_option("--test-fraction", evaluate.test_fraction, "Test share per split")->capture_default_str();
    evaluate_app->add_option("--budget", evaluate.config.budget_fraction, "Summary budget fraction")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    add_enum(*evaluate_app, "--aggregation", evaluate.config.aggregation, kAggregations, "Annotator aggregation: max or mean");
    evaluate_app->add_option("--jobs", evaluate.config.jobs, "Worker threads")->capture_default_str();
    evaluate.flags.add_to(*evaluate_app);
    evaluate.d_ff = evaluate_app->get_option("--d-ff");

    SizeReportCmd size;
    auto* size_app = app.add_subcommand("size-report", "Tabulate input sizes against a baseline");
    size_app->add_option("--manifest", size.manifest, "Dataset whose pipeline input sizes to include")
        ->check(CLI::ExistingFile);
    size_app->add_option("--entry", size.entries, "Extra LABEL=MEGABYTES row (repeatable)");
    size_app->add_option("--baseline", size.baseline, "Label to compare against")->required();
    size_app->add_option("--output", size.output, "Write the table here instead of stdout");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "lmvs: usage error: " << e.what() << '\n';
        return kUsageError;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string context = sub->get_name();
    try {
        if (sub == validate_app) return validate.run(out);
        if (sub == gen_app) return gen.run(out);
        if (sub == condense_app) return condense.run(out);
        if (sub == train_app) return train.run(out);
        if (sub == predict_app) return predict.run(out);
        if (sub == summarize_app) return summarize.run(out);
        if (sub == evaluate_app) return evaluate.run(out);
        if (sub == size_app) return size.run(out);
    } catch (const ConfigError& e) {
        err << "lmvs " << context << ": invalid configuration: " << e.what() << '\n';
        return kUsageError;
    } catch (const ValidationError& e) {
        err << "lmvs " << context << ": validation error: " << e.what() << '\n';
        return kDataError;
    } catch (const ParseError& e) {
        err << "lmvs " << context << ": parse error: " << e.what() << '\n';
        return kDataError;
    } catch (const IoError& e) {
        err << "lmvs " << context << ": i/o error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "lmvs " << context << ": runtime failure: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    err << "lmvs: unknown subcommand\n";
    return kUsageError;
}

}  // namespace lmvs::cli
