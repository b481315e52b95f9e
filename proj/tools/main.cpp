#include "argex/analysis.hpp"
#include "argex/corpus.hpp"
#include "argex/explain.hpp"
#include "argex/miner.hpp"
#include "argex/model.hpp"
#include "argex/properties.hpp"
#include "argex/qbaf.hpp"
#include "argex/text.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"

namespace fs = std::filesystem;
using namespace argex;

namespace {

constexpr uint64_t kDefaultSeed = 20240405;

uint64_t default_seed() {
    if (const char* env = std::getenv("ARGEX_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::runtime_error("ARGEX_SEED is not an unsigned integer");
        }
    }
    return kDefaultSeed;
}

std::vector<Lexicon> load_lexicons(const std::vector<std::string>& paths) {
    std::vector<Lexicon> lexicons;
    for (const auto& path : paths) lexicons.push_back(load_lexicon(path));
    return lexicons;
}

Dataset load_annotated(const std::string& corpus_path,
                       const std::vector<std::string>& lexicon_paths) {
    return annotate(load_corpus(corpus_path), load_lexicons(lexicon_paths));
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    out << content;
}

struct ExplainOptions {
    std::string model_path;
    std::string input_path;
    std::vector<std::string> lexicon_paths;
    std::string method = "shallow";
    std::string variant = "bottom_up";
    std::string format = "json";
    std::string output;
    int k = 10;
    int jobs = 1;
};

int run_explain(const ExplainOptions& opt) {
    PlrModel model = load_model(opt.model_path);
    Dataset data = load_annotated(opt.input_path, opt.lexicon_paths);
    if (data.documents.empty()) {
        std::cerr << "warning: no documents in " << opt.input_path << "\n";
        return 0;
    }
    std::sort(data.documents.begin(), data.documents.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    Variant variant = variant_from_name(opt.variant);
    RenderFormat format = render_format_from_name(opt.format);

    std::vector<std::string> rendered(data.documents.size());
    std::atomic<size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= data.documents.size() || failed.load()) break;
            try {
                Explanation e = explain_document(model, data.documents[i], opt.method,
                                                 variant, opt.k);
                rendered[i] = render(e, format);
            } catch (const std::exception& ex) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = ex.what();
            }
        }
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || data.documents.size() == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error(first_error);

    bool many = data.documents.size() > 1;
    if (format == RenderFormat::Html && many) {
        if (opt.output.empty()) {
            throw std::runtime_error("html output for several documents needs --output <dir>");
        }
        fs::create_directories(opt.output);
        for (size_t i = 0; i < data.documents.size(); ++i) {
            std::ofstream out(fs::path(opt.output) / (data.documents[i].id + ".html"));
            out << rendered[i];
        }
        return 0;
    }
    std::string joined;
    for (size_t i = 0; i < rendered.size(); ++i) {
        joined += rendered[i];
        if (format == RenderFormat::Text && i + 1 < rendered.size()) joined += "\n";
    }
    write_output(opt.output, joined);
    return 0;
}

struct StatsRow {
    FrameworkStats stats;
    int true_label;
    int predicted_label;
};

int run_stats(const std::string& model_path, const std::string& input_path,
              const std::vector<std::string>& lexicon_paths, const std::string& format,
              const std::string& output) {
    PlrModel model = load_model(model_path);
    Dataset data = load_annotated(input_path, lexicon_paths);
    struct Column {
        std::string name;
        std::vector<FrameworkStats> stats;
    };
    std::vector<Column> columns = {{"TQBAFc", {}}, {"TQBAFc'", {}},
                                   {"BQBAFc", {}}, {"BQBAFc'", {}}};
    std::vector<std::pair<int, int>> labels;
    for (const auto& doc : data.documents) {
        if (!doc.label) {
            throw std::runtime_error("document '" + doc.id + "' has no label; stats need a labeled corpus");
        }
        FeatureVector f = extract_features(model, doc);
        int predicted = predicted_class(predict_proba(model, f));
        labels.emplace_back(*doc.label, predicted);
        int col = 0;
        for (Variant variant : {Variant::TopDown, Variant::BottomUp}) {
            Qbafc fw = build_qbafc(model, doc, variant);
            StrengthMap sigma = compute_strengths(fw);
            auto [post_fw, post_sigma] = postprocess(fw, sigma);
            columns[col++].stats.push_back(framework_stats(fw));
            columns[col++].stats.push_back(framework_stats(post_fw));
        }
    }
    std::string out;
    if (format == "json") {
        out = "{\n";
        for (size_t c = 0; c < columns.size(); ++c) {
            out += "\"" + columns[c].name + "\": " +
                   aggregate_stats_json_text(aggregate_stats(columns[c].stats, labels));
            out += c + 1 < columns.size() ? ",\n" : "\n";
        }
        out += "}\n";
    } else if (format == "text") {
        for (const auto& column : columns) {
            out += aggregate_stats_table(aggregate_stats(column.stats, labels),
                                         "== " + column.name + " ==");
            out += "\n";
        }
    } else {
        throw std::runtime_error("unknown stats format '" + format + "'");
    }
    write_output(output, out);
    return 0;
}

int run_sufficiency(const std::string& model_path, const std::string& input_path,
                    const std::vector<std::string>& lexicon_paths,
                    const std::string& out_dir) {
    PlrModel model = load_model(model_path);
    Dataset data = load_annotated(input_path, lexicon_paths);
    fs::create_directories(out_dir);
    for (Variant variant : {Variant::TopDown, Variant::BottomUp}) {
        std::vector<PostFramework> cases;
        for (const auto& doc : data.documents) {
            Qbafc fw = build_qbafc(model, doc, variant);
            StrengthMap sigma = compute_strengths(fw);
            auto [post_fw, post_sigma] = postprocess(fw, sigma);
            cases.push_back(PostFramework{std::move(post_fw), std::move(post_sigma),
                                          flipped_classes(sigma)});
        }
        for (TargetKind kind : {TargetKind::Default, TargetKind::Intermediate}) {
            for (FlipFilter filter :
                 {FlipFilter::All, FlipFilter::Flipped, FlipFilter::NotFlipped}) {
                auto curve = sufficiency_curve(cases, kind, filter);
                std::string name =
                    std::string("sufficiency_") + variant_name(variant) + "_" +
                    (kind == TargetKind::Default ? "default" : "intermediate") + "_" +
                    (filter == FlipFilter::All
                         ? "all"
                         : filter == FlipFilter::Flipped ? "flipped" : "not_flipped") +
                    ".csv";
                std::ofstream out(fs::path(out_dir) / name);
                out << sufficiency_curve_csv(curve);
            }
        }
    }
    std::cerr << "wrote 12 curve files to " << out_dir << "\n";
    return 0;
}

int run_graph(const std::string& model_path, const std::string& input_path,
              const std::vector<std::string>& lexicon_paths, const std::string& variant,
              bool post, const std::string& format, const std::string& output) {
    PlrModel model = load_model(model_path);
    Dataset data = load_annotated(input_path, lexicon_paths);
    if (data.documents.empty()) throw std::runtime_error("input has no documents");
    const Document& doc = data.documents.front();
    Qbafc fw = build_qbafc(model, doc, variant_from_name(variant));
    StrengthMap sigma = compute_strengths(fw);
    if (post) {
        std::tie(fw, sigma) = postprocess(fw, sigma);
    }
    std::string out;
    if (format == "dot") {
        std::vector<std::string> labels;
        for (const auto& arg : fw.arguments) {
            labels.push_back(arg.is_default() ? ""
                                              : encode_pattern(model.patterns[arg.pattern_index]));
        }
        out = qbafc_to_dot(fw, &sigma, &labels);
    } else if (format == "json") {
        out = qbafc_to_json_text(fw, &sigma) + "\n";
    } else {
        throw std::runtime_error("unknown graph format '" + format + "'");
    }
    write_output(output, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pattern-based logistic regression with argumentative explanations"};
    app.require_subcommand(1);

    try {
        // --- annotate ---
        auto* cmd_annotate = app.add_subcommand(
            "annotate", "attach TEXT and lexicon attributes to a corpus");
        std::string an_input, an_output;
        std::vector<std::string> an_lexicons;
        cmd_annotate->add_option("--input", an_input, "corpus jsonl")->required();
        cmd_annotate->add_option("--lexicon", an_lexicons, "lexicon file (repeatable)");
        cmd_annotate->add_option("--output", an_output, "output path (default stdout)");

        // --- mine ---
        auto* cmd_mine = app.add_subcommand("mine", "mine discriminative patterns");
        std::string mi_input, mi_output;
        std::vector<std::string> mi_lexicons;
        MinerConfig miner_config;
        miner_config.seed = default_seed();
        cmd_mine->add_option("--input", mi_input, "labeled corpus jsonl")->required();
        cmd_mine->add_option("--lexicon", mi_lexicons, "lexicon file (repeatable)");
        cmd_mine->add_option("--output", mi_output, "pattern file (default stdout)");
        cmd_mine->add_option("--alphabet-size", miner_config.alphabet_size);
        cmd_mine->add_option("--gaps", miner_config.gap_budget);
        cmd_mine->add_option("--max-slots", miner_config.max_slots);
        cmd_mine->add_option("--max-attrs", miner_config.max_attrs_per_pattern);
        cmd_mine->add_option("--num-patterns", miner_config.num_patterns);
        cmd_mine->add_option("--beam-width", miner_config.beam_width);
        cmd_mine->add_option("--seed", miner_config.seed);

        // --- train ---
        auto* cmd_train = app.add_subcommand("train", "train the classifier");
        std::string tr_input, tr_patterns, tr_output;
        std::vector<std::string> tr_lexicons;
        TrainConfig train_config;
        train_config.seed = default_seed();
        cmd_train->add_option("--input", tr_input, "labeled corpus jsonl")->required();
        cmd_train->add_option("--lexicon", tr_lexicons, "lexicon file (repeatable)");
        cmd_train->add_option("--patterns", tr_patterns, "pattern file")->required();
        cmd_train->add_option("--output", tr_output, "model file")->required();
        cmd_train->add_option("--lr", train_config.learning_rate);
        cmd_train->add_option("--l2", train_config.l2_lambda);
        cmd_train->add_option("--epochs", train_config.epochs);
        cmd_train->add_option("--seed", train_config.seed);

        // --- explain ---
        auto* cmd_explain =
            app.add_subcommand("explain", "explain predictions for documents");
        ExplainOptions explain_opt;
        cmd_explain->add_option("--model", explain_opt.model_path)->required();
        cmd_explain->add_option("--input", explain_opt.input_path, "documents jsonl")
            ->required();
        cmd_explain->add_option("--lexicon", explain_opt.lexicon_paths);
        cmd_explain->add_option("--method", explain_opt.method)
            ->check(CLI::IsMember({"flx", "shallow", "deep"}));
        cmd_explain->add_option("--variant", explain_opt.variant)
            ->check(CLI::IsMember({"top_down", "bottom_up"}));
        cmd_explain->add_option("--k", explain_opt.k);
        cmd_explain->add_option("--format", explain_opt.format)
            ->check(CLI::IsMember({"text", "json", "html"}));
        cmd_explain->add_option("--output", explain_opt.output);
        cmd_explain->add_option("--jobs", explain_opt.jobs);

        // --- stats ---
        auto* cmd_stats =
            app.add_subcommand("stats", "framework statistics over a labeled corpus");
        std::string st_model, st_input, st_output, st_format = "text";
        std::vector<std::string> st_lexicons;
        cmd_stats->add_option("--model", st_model)->required();
        cmd_stats->add_option("--input", st_input)->required();
        cmd_stats->add_option("--lexicon", st_lexicons);
        cmd_stats->add_option("--format", st_format)
            ->check(CLI::IsMember({"text", "json"}));
        cmd_stats->add_option("--output", st_output);

        // --- sufficiency ---
        auto* cmd_suff = app.add_subcommand(
            "sufficiency", "emit sufficiency curves as CSV files");
        std::string su_model, su_input, su_outdir;
        std::vector<std::string> su_lexicons;
        cmd_suff->add_option("--model", su_model)->required();
        cmd_suff->add_option("--input", su_input)->required();
        cmd_suff->add_option("--lexicon", su_lexicons);
        cmd_suff->add_option("--output-dir", su_outdir)->required();

        // --- check-gps ---
        auto* cmd_gps = app.add_subcommand(
            "check-gps", "audit the group properties on random frameworks");
        long gp_trials = 1000;
        RandomFrameworkSpec gp_spec;
        gp_spec.seed = default_seed();
        std::string gp_json_path;
        cmd_gps->add_option("--trials", gp_trials);
        cmd_gps->add_option("--seed", gp_spec.seed);
        cmd_gps->add_option("--min-args", gp_spec.min_arguments);
        cmd_gps->add_option("--max-args", gp_spec.max_arguments);
        cmd_gps->add_option("--density", gp_spec.edge_density);
        cmd_gps->add_option("--class-prob", gp_spec.class1_probability);
        cmd_gps->add_option("--json", gp_json_path, "also write a JSON report here");

        // --- graph ---
        auto* cmd_graph =
            app.add_subcommand("graph", "dump the framework for one document");
        std::string gr_model, gr_input, gr_output, gr_variant = "bottom_up",
                    gr_format = "dot";
        std::vector<std::string> gr_lexicons;
        bool gr_post = false;
        cmd_graph->add_option("--model", gr_model)->required();
        cmd_graph->add_option("--input", gr_input)->required();
        cmd_graph->add_option("--lexicon", gr_lexicons);
        cmd_graph->add_option("--variant", gr_variant)
            ->check(CLI::IsMember({"top_down", "bottom_up"}));
        cmd_graph->add_flag("--post", gr_post, "post-process before dumping");
        cmd_graph->add_option("--format", gr_format)
            ->check(CLI::IsMember({"dot", "json"}));
        cmd_graph->add_option("--output", gr_output);

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e); // help on stdout, exit 0
        } catch (const CLI::ParseError& e) {
            std::cerr << e.what() << "\n\n" << app.help();
            return 1;
        }

        if (cmd_annotate->parsed()) {
            Dataset data = load_annotated(an_input, an_lexicons);
            std::string out;
            for (const auto& doc : data.documents) out += document_to_line(doc) + "\n";
            write_output(an_output, out);
            return 0;
        }
        if (cmd_mine->parsed()) {
            Dataset data = load_annotated(mi_input, mi_lexicons);
            std::vector<Pattern> patterns = mine_patterns(data, miner_config);
            std::cerr << "mined " << patterns.size() << " patterns\n";
            if (mi_output.empty()) {
                for (const auto& p : patterns) std::cout << encode_pattern(p) << "\n";
            } else {
                save_patterns(patterns, mi_output);
            }
            return 0;
        }
        if (cmd_train->parsed()) {
            Dataset data = load_annotated(tr_input, tr_lexicons);
            std::vector<Pattern> patterns = load_patterns(tr_patterns);
            TrainResult result = train(data, std::move(patterns), train_config);
            long correct = 0;
            for (const auto& doc : data.documents) {
                FeatureVector f = extract_features(result.model, doc);
                if (predicted_class(predict_proba(result.model, f)) == *doc.label) {
                    ++correct;
                }
            }
            result.model.meta["trained_epochs"] = std::to_string(train_config.epochs);
            result.model.meta["final_loss"] = format_double(result.final_loss);
            save_model(result.model, tr_output);
            std::cerr << "final loss " << format_double(result.final_loss)
                      << ", training accuracy "
                      << format_double(static_cast<double>(correct) /
                                       static_cast<double>(data.documents.size()))
                      << "\n";
            return 0;
        }
        if (cmd_explain->parsed()) return run_explain(explain_opt);
        if (cmd_stats->parsed()) {
            return run_stats(st_model, st_input, st_lexicons, st_format, st_output);
        }
        if (cmd_suff->parsed()) {
            return run_sufficiency(su_model, su_input, su_lexicons, su_outdir);
        }
        if (cmd_gps->parsed()) {
            GpSummary summary = gp_summary(gp_spec, gp_trials);
            std::cout << gp_summary_table(summary);
            if (!gp_json_path.empty()) {
                write_output(gp_json_path, gp_summary_json_text(summary) + "\n");
            }
            return 0;
        }
        if (cmd_graph->parsed()) {
            return run_graph(gr_model, gr_input, gr_lexicons, gr_variant, gr_post,
                             gr_format, gr_output);
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
