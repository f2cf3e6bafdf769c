// svmap: MapReduce-style iterative SVM training with global support-vector
// exchange. Subcommands: train, predict, cv, bench, inspect.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svmap/dataset.hpp"
#include "svmap/distributed.hpp"
#include "svmap/errors.hpp"
#include "svmap/evaluation.hpp"
#include "svmap/harness.hpp"
#include "svmap/log.hpp"
#include "svmap/oracle.hpp"
#include "svmap/solver.hpp"
#include "svmap/textio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string input;
    std::string format = "sparse";  // sparse | csv
    int label_column = -1;          // csv only; -1 = last
    std::string positive;           // binarization target; empty = labels already -1/+1
    bool scale = false;

    std::size_t L = 10;
    double C = 1.0;
    std::string kernel = "linear";
    double gamma = 1.0;
    double kkt_tol = 1e-3;
    std::uint64_t max_solver_passes = 0;  // 0 = 10*n
    double conv_tol = 1e-6;
    int max_iterations = 10;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    bool warm_start = false;
    bool retrain_on_svs = false;

    std::string out = "svmap_out";
    std::string nodes = "1,2,4,6,8,10";
    std::size_t folds = 10;
    int repeats = 5;
    bool parallel_folds = false;

    std::string model_path;
    bool decision_values = false;
    std::string config_path;
};

void add_data_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "Input data file");
    cmd->add_option("--format", o.format, "Input format: sparse or csv")
        ->check(CLI::IsMember({"sparse", "csv"}));
    cmd->add_option("--label-column", o.label_column,
                    "CSV label column (0-based, -1 = last)");
    cmd->add_option("--positive", o.positive,
                    "Raw label mapped to +1; all others become -1");
    cmd->add_flag("--scale", o.scale, "Min-max scale features to [0,1]");
    cmd->add_option("--config", o.config_path, "Flat JSON config file (flag names as keys)");
}

void add_train_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--L", o.L, "Partition / map-task count");
    cmd->add_option("--C", o.C, "Soft-margin cost");
    cmd->add_option("--kernel", o.kernel, "Kernel: linear or rbf")
        ->check(CLI::IsMember({"linear", "rbf"}));
    cmd->add_option("--gamma", o.gamma, "RBF gamma (ignored for linear)");
    cmd->add_option("--kkt-tol", o.kkt_tol, "SMO stopping tolerance");
    cmd->add_option("--max-solver-passes", o.max_solver_passes,
                    "SMO pair-update cap (0 = 10*n, hard cap 10,000,000)");
    cmd->add_option("--conv-tol", o.conv_tol, "Risk-stabilization stopping tolerance");
    cmd->add_option("--max-iterations", o.max_iterations, "Outer iteration cap");
    cmd->add_option("--seed", o.seed, "Seed for all partitioning and folds");
    cmd->add_option("--workers", o.workers, "Map-phase worker threads (0 = cores)");
    cmd->add_flag("--warm-start", o.warm_start,
                  "Seed node solves from their previous iteration's alphas");
    cmd->add_flag("--retrain-on-global-svs", o.retrain_on_svs,
                  "Deliver one extra SVM trained on the final global SV set");
}

// Flags override config-file values override defaults.
void apply_config_file(CLI::App* cmd, Options& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw svmap::UsageError("cannot open config file: " + o.config_path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw svmap::UsageError("bad config JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw svmap::UsageError("config file must be a JSON object");

    auto given = [&](const std::string& flag) {
        auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    for (auto& [key, value] : doc.items()) {
        const std::string flag = "--" + key;
        if (cmd->get_option_no_throw(flag) == nullptr)
            throw svmap::UsageError("unknown config key '" + key + "'");
        if (given(flag)) continue;
        if (key == "input") o.input = value.get<std::string>();
        else if (key == "format") o.format = value.get<std::string>();
        else if (key == "label-column") o.label_column = value.get<int>();
        else if (key == "positive") o.positive = value.get<std::string>();
        else if (key == "scale") o.scale = value.get<bool>();
        else if (key == "L") o.L = value.get<std::size_t>();
        else if (key == "C") o.C = value.get<double>();
        else if (key == "kernel") o.kernel = value.get<std::string>();
        else if (key == "gamma") o.gamma = value.get<double>();
        else if (key == "kkt-tol") o.kkt_tol = value.get<double>();
        else if (key == "max-solver-passes") o.max_solver_passes = value.get<std::uint64_t>();
        else if (key == "conv-tol") o.conv_tol = value.get<double>();
        else if (key == "max-iterations") o.max_iterations = value.get<int>();
        else if (key == "seed") o.seed = value.get<std::uint64_t>();
        else if (key == "workers") o.workers = value.get<unsigned>();
        else if (key == "warm-start") o.warm_start = value.get<bool>();
        else if (key == "out") o.out = value.get<std::string>();
        else if (key == "nodes") o.nodes = value.get<std::string>();
        else if (key == "folds") o.folds = value.get<std::size_t>();
        else if (key == "repeats") o.repeats = value.get<int>();
        else throw svmap::UsageError("config key '" + key + "' is not settable from a file");
    }
}

svmap::Dataset load_dataset(const Options& o, bool for_training) {
    if (o.input.empty()) throw svmap::UsageError("--input is required");
    svmap::Dataset d = o.format == "csv" ? svmap::parse_csv(o.input, o.label_column)
                                         : svmap::parse_sparse(o.input);
    if (!o.positive.empty()) d = svmap::binarize(d, o.positive);
    if (for_training && !d.empty() && !d.is_binary())
        throw svmap::DataError("labels are not -1/+1; pass --positive to binarize");
    return d;
}

svmap::TrainConfig train_config(const Options& o) {
    svmap::TrainConfig c;
    c.C = o.C;
    c.kernel.kind = svmap::kernel_from_name(o.kernel);
    c.kernel.gamma = o.gamma;
    c.kkt_tol = o.kkt_tol;
    c.max_solver_passes = o.max_solver_passes;
    return c;
}

svmap::DistributedConfig distributed_config(const Options& o) {
    svmap::DistributedConfig c;
    c.L = o.L;
    c.train = train_config(o);
    c.conv_tol = o.conv_tol;
    c.max_iterations = o.max_iterations;
    c.seed = o.seed;
    c.workers = o.workers;
    c.warm_start = o.warm_start;
    c.retrain_on_global_svs = o.retrain_on_svs;
    return c;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw svmap::DataError("cannot write " + path.string());
    out << text;
}

int cmd_train(const Options& o) {
    svmap::Dataset d = load_dataset(o, true);
    std::optional<svmap::ScaleRange> range;
    if (o.scale) {
        range = svmap::fit_scale(d);
        d = svmap::apply_scale(d, *range);
    }

    svmap::TrainRun run = svmap::train_distributed(d, distributed_config(o));
    if (range) run.final_model.scale = range;

    fs::create_directories(o.out);
    svmap::save_model(run.final_model, (fs::path(o.out) / "model.svmap").string());

    std::ostringstream jsonl, csv;
    svmap::write_history_jsonl(run.history, jsonl);
    svmap::write_history_csv(run.history, csv);
    write_text_file(fs::path(o.out) / "history.jsonl", jsonl.str());
    write_text_file(fs::path(o.out) / "history.csv", csv.str());

    json summary;
    summary["iterations"] = run.history.size();
    summary["stop_reason"] = svmap::stop_reason_name(run.stop_reason);
    summary["final_risk"] = run.history.back().best_risk;
    summary["global_sv_count"] = run.history.back().global_sv_count;
    // the risk trend usually decreases but is not guaranteed to; count the
    // exceptions rather than hiding them
    std::size_t risk_increases = 0;
    for (std::size_t t = 1; t < run.history.size(); ++t)
        if (run.history[t].best_risk > run.history[t - 1].best_risk) ++risk_increases;
    summary["risk_increases"] = risk_increases;
    summary["seed"] = o.seed;
    summary["L"] = o.L;
    summary["C"] = o.C;
    summary["kernel"] = o.kernel;
    summary["scaled"] = o.scale;
    write_text_file(fs::path(o.out) / "summary.json", summary.dump(2) + "\n");

    std::cout << "trained in " << run.history.size() << " iterations ("
              << svmap::stop_reason_name(run.stop_reason)
              << "), final risk " << svmap::fmt_g10(run.history.back().best_risk)
              << ", model written to " << (fs::path(o.out) / "model.svmap").string() << "\n";
    return 0;
}

int cmd_predict(const Options& o) {
    if (o.model_path.empty()) throw svmap::UsageError("--model is required");
    svmap::SvmModel model = svmap::load_model(o.model_path);
    svmap::Dataset d = load_dataset(o, false);

    std::size_t want = model.dim();
    if (d.dim > want)
        throw svmap::DataError("input dimension " + std::to_string(d.dim) +
                               " exceeds model dimension " + std::to_string(want));

    std::ostringstream lines;
    for (svmap::Sample s : d.samples) {
        s.features.resize(want, 0.0);  // sparse inputs may omit trailing zeros
        if (model.scale) {
            svmap::Dataset one;
            one.dim = want;
            one.samples = {s};
            s = svmap::apply_scale(one, *model.scale).samples[0];
        }
        double f = svmap::decision_value(model, s.features);
        int label = f >= 0.0 ? 1 : -1;
        lines << label;
        if (o.decision_values) lines << '\t' << svmap::fmt_g17(f);
        lines << '\n';
    }

    if (o.out.empty() || o.out == "-") {
        std::cout << lines.str();
    } else {
        write_text_file(o.out, lines.str());
    }
    return 0;
}

int cmd_cv(const Options& o) {
    svmap::Dataset d = load_dataset(o, true);
    if (o.scale) d = svmap::apply_scale(d, svmap::fit_scale(d));

    svmap::CvReport report =
        svmap::cross_validate(d, distributed_config(o), o.folds, o.parallel_folds);
    fs::create_directories(o.out);
    std::ostringstream csv;
    svmap::write_cv_csv(report, csv);
    write_text_file(fs::path(o.out) / "cv_report.csv", csv.str());
    std::cout << "cv report (" << o.folds << " folds) written to "
              << (fs::path(o.out) / "cv_report.csv").string() << "\n";
    return 0;
}

int cmd_bench(const Options& o) {
    svmap::Dataset d = load_dataset(o, true);
    if (o.scale) d = svmap::apply_scale(d, svmap::fit_scale(d));

    std::vector<std::size_t> nodes;
    std::stringstream ss(o.nodes);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto v = svmap::parse_int_token(svmap::trim(tok));
        if (!v || *v < 1) throw svmap::UsageError("bad --nodes entry '" + tok + "'");
        nodes.push_back(static_cast<std::size_t>(*v));
    }

    svmap::SpeedupReport report = svmap::speedup_benchmark(d, nodes, o.repeats,
                                                           distributed_config(o));
    fs::create_directories(o.out);
    std::ostringstream csv;
    svmap::write_speedup_csv(report, csv);
    write_text_file(fs::path(o.out) / "speedup.csv", csv.str());
    std::cout << "speedup table written to " << (fs::path(o.out) / "speedup.csv").string()
              << "\n";
    return 0;
}

int cmd_inspect(const Options& o) {
    if (!o.model_path.empty()) {
        svmap::SvmModel m = svmap::load_model(o.model_path);
        std::cout << "kernel: " << svmap::kernel_name(m.kernel.kind);
        if (m.kernel.kind == svmap::KernelKind::rbf)
            std::cout << " gamma=" << svmap::fmt_g10(m.kernel.gamma);
        std::cout << "\nsupport vectors: " << m.support_vectors.size()
                  << "\nbias: " << svmap::fmt_g10(m.bias)
                  << "\nobjective: " << svmap::fmt_g10(m.objective)
                  << "\ndim: " << m.dim()
                  << "\nconverged: " << (m.converged ? "yes" : "no")
                  << "\nscaled: " << (m.scale ? "yes" : "no") << "\n";
        return 0;
    }
    svmap::Dataset d = load_dataset(o, false);
    std::cout << "samples: " << d.size() << "\ndim: " << d.dim << "\n";
    if (d.is_binary()) {
        auto counts = d.class_counts();
        std::cout << "labels: +1 x " << counts.positive << ", -1 x " << counts.negative << "\n";
    } else {
        std::map<std::string, std::size_t> kinds;
        for (std::size_t i = 0; i < d.size(); ++i)
            ++kinds[d.raw_labels.empty() ? std::to_string(d.samples[i].label)
                                         : d.raw_labels[i]];
        std::cout << "raw labels: " << kinds.size() << " distinct\n";
        for (const auto& [label, count] : kinds)
            std::cout << "  " << label << ": " << count << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MapReduce-style iterative SVM trainer with support-vector exchange"};
    app.require_subcommand(1);

    Options o;
    CLI::App* train = app.add_subcommand("train", "Train a distributed SVM");
    add_data_flags(train, o);
    add_train_flags(train, o);
    train->add_option("--out", o.out, "Output directory");

    CLI::App* predict = app.add_subcommand("predict", "Predict labels with a saved model");
    add_data_flags(predict, o);
    predict->add_option("--model", o.model_path, "Model file");
    predict->add_option("--out", o.out, "Output file (- for stdout)")->default_val("-");
    predict->add_flag("--decision-values", o.decision_values,
                      "Emit decision values next to labels");

    CLI::App* cv = app.add_subcommand("cv", "k-fold cross-validation report");
    add_data_flags(cv, o);
    add_train_flags(cv, o);
    cv->add_option("--folds", o.folds, "Fold count");
    cv->add_flag("--parallel-folds", o.parallel_folds, "Run folds concurrently");
    cv->add_option("--out", o.out, "Output directory");

    CLI::App* bench = app.add_subcommand("bench", "Speedup benchmark across node counts");
    add_data_flags(bench, o);
    add_train_flags(bench, o);
    bench->add_option("--nodes", o.nodes, "Comma-separated node counts; must include 1");
    bench->add_option("--repeats", o.repeats, "Timing repeats per node count");
    bench->add_option("--out", o.out, "Output directory");

    CLI::App* inspect = app.add_subcommand("inspect", "Describe a dataset or model file");
    add_data_flags(inspect, o);
    inspect->add_option("--model", o.model_path, "Model file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config_file(sub, o);
        if (sub == train) return cmd_train(o);
        if (sub == predict) return cmd_predict(o);
        if (sub == cv) return cmd_cv(o);
        if (sub == bench) return cmd_bench(o);
        return cmd_inspect(o);
    } catch (const svmap::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const svmap::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const svmap::TrainingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
