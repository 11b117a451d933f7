#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stratgraph/constructions.hpp"
#include "stratgraph/datasets.hpp"
#include "stratgraph/experiments.hpp"
#include "stratgraph/graph_ops.hpp"
#include "stratgraph/io_util.hpp"
#include "stratgraph/response.hpp"
#include "stratgraph/smooth.hpp"
#include "stratgraph/training.hpp"

namespace fs = std::filesystem;
using namespace stratgraph;

namespace {

constexpr const char* kVersion =
    "stratgraph 1.0.0 (formats: bundle=1 model=1 trace=1)";

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw io_error("cannot write " + out_path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Response parameters: CLI flags win, then the model's config echo, then the
// bundle's meta defaults.
ResponseConfig response_for(const DatasetBundle& bundle,
                            const TrainedModel* model,
                            std::optional<double> d_flag,
                            std::optional<double> tol_flag) {
    ResponseConfig cfg;
    cfg.beta = model ? model->config.beta : bundle.meta.beta;
    cfg.tol = model ? model->config.tol : bundle.meta.tol;
    if (d_flag) {
        if (!(*d_flag > 0.0)) throw std::invalid_argument("--d must be > 0");
        cfg.beta = 2.0 / *d_flag;
    }
    if (tol_flag) cfg.tol = *tol_flag;
    return cfg;
}

TrainedModel model_echo_for_instance(const ConstructionInstance& inst) {
    TrainedModel m;
    m.classifier = inst.classifier;
    m.config.layers = 0;
    m.config.beta = inst.response.beta;
    m.config.tol = inst.response.tol;
    return m;
}

struct EvalViews {
    DatasetBundle view;
    std::vector<int> eval_nodes;
};

// Test view: the graph without train nodes; constructions (no train mask)
// evaluate on the full graph.
EvalViews test_view_of(const DatasetBundle& bundle) {
    std::vector<int> keep;
    std::set<int> train(bundle.train_mask.begin(), bundle.train_mask.end());
    for (int i = 0; i < bundle.graph.n; ++i)
        if (!train.count(i)) keep.push_back(i);
    SubgraphView view = induced_subgraph(bundle, keep);
    EvalViews out;
    out.eval_nodes = view.bundle.test_mask;
    out.view = std::move(view.bundle);
    return out;
}

EmbeddingWeights weights_for(const DatasetBundle& bundle) {
    return bundle_weights(bundle);
}

int run(int argc, char** argv) {
    CLI::App app{"Strategic response simulation and robust training for "
                 "linear graph classifiers"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic bundle");
    int synth_n = 1000;
    double synth_alpha = 0.7;
    uint64_t synth_seed = 1;
    std::string synth_out;
    bool synth_binary = false;
    synth->add_option("--n", synth_n, "Nodes per split");
    synth->add_option("--alpha", synth_alpha, "Graph reliance in [0,1]");
    synth->add_option("--seed", synth_seed, "RNG seed");
    synth->add_option("--out", synth_out, "Output bundle directory")->required();
    synth->add_flag("--binary-features", synth_binary, "Write features.f32");

    // construct
    auto* construct =
        app.add_subcommand("construct", "Emit a named worked instance");
    std::string c_name;
    int c_n = 3, c_k = 1;
    uint64_t c_seed = 1;
    std::string c_out;
    construct
        ->add_option("name", c_name,
                     "hitchhike | cascade | cascade-late | gap-large | "
                     "gap-none | clique | circular")
        ->required();
    construct->add_option("--n", c_n, "Instance size parameter");
    construct->add_option("--k", c_k, "Trigger round (cascade-late)");
    construct->add_option("--seed", c_seed, "Feature seed (clique)");
    construct->add_option("--out", c_out, "Output bundle directory")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a classifier on a bundle");
    std::string t_bundle, t_out;
    TrainConfig t_cfg;
    t_cfg.layers = 3;
    std::optional<double> t_d;
    train_cmd->add_option("--bundle", t_bundle, "Bundle directory")->required();
    train_cmd->add_option("--out", t_out, "Model JSON path");
    train_cmd->add_option("--T", t_cfg.layers, "Response layers (0 = naive)");
    train_cmd->add_option("--tau", t_cfg.tau, "Gate temperature");
    train_cmd->add_option("--lr", t_cfg.learning_rate, "Learning rate");
    train_cmd->add_option("--weight-decay", t_cfg.weight_decay, "L2 on theta");
    train_cmd->add_option("--epochs", t_cfg.epochs, "Epochs");
    train_cmd->add_option("--d", t_d, "Max move distance (sets beta = 2/d)");
    train_cmd->add_option("--beta", t_cfg.beta, "Cost scale");
    train_cmd->add_option("--tol", t_cfg.tol, "Boundary tolerance");
    train_cmd->add_option("--seed", t_cfg.seed, "RNG seed");
    train_cmd->add_flag("--fix-theta", t_cfg.fix_theta,
                        "Threshold-class training: learn the bias only");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run exact dynamics, emit trace");
    std::string s_bundle, s_model, s_out;
    std::optional<double> s_d, s_tol;
    sim->add_option("--bundle", s_bundle, "Bundle directory")->required();
    sim->add_option("--model", s_model, "Model JSON path")->required();
    sim->add_option("--out", s_out, "Trace JSON path (default stdout)");
    sim->add_option("--d", s_d, "Max move distance (sets beta = 2/d)");
    sim->add_option("--tol", s_tol, "Boundary tolerance");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on the test view");
    std::string e_bundle, e_model, e_out;
    std::optional<double> e_d, e_tol;
    bool e_non_strategic = false;
    eval_cmd->add_option("--bundle", e_bundle, "Bundle directory")->required();
    eval_cmd->add_option("--model", e_model, "Model JSON path")->required();
    eval_cmd->add_option("--out", e_out, "Metrics JSON path (default stdout)");
    eval_cmd->add_option("--d", e_d, "Max move distance (sets beta = 2/d)");
    eval_cmd->add_option("--tol", e_tol, "Boundary tolerance");
    eval_cmd->add_flag("--non-strategic", e_non_strategic,
                       "Score raw features instead of the converged state");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a configured experiment sweep");
    std::string w_config, w_out, w_summary;
    sweep_cmd->add_option("--config", w_config, "Experiment config JSON")->required();
    sweep_cmd->add_option("--out", w_out, "Per-seed CSV path (default stdout)");
    sweep_cmd->add_option("--summary", w_summary, "Aggregated CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    if (synth->parsed()) {
        const DatasetBundle b = generate_synthetic(synth_n, synth_alpha, synth_seed);
        save_bundle(b, synth_out, synth_binary);
        std::cout << "wrote bundle (" << b.graph.n << " nodes) to " << synth_out
                  << '\n';
        return 0;
    }
    if (construct->parsed()) {
        ConstructionInstance inst;
        if (c_name == "hitchhike") {
            inst = hitchhike_example();
        } else if (c_name == "cascade") {
            inst = cascade_graph(c_n);
        } else if (c_name == "cascade-late") {
            inst = cascade_with_late_movers(c_n, c_k);
        } else if (c_name == "gap-large") {
            inst = gap_examples().first;
        } else if (c_name == "gap-none") {
            inst = gap_examples().second;
        } else if (c_name == "clique") {
            std::mt19937_64 rng(c_seed);
            std::normal_distribution<double> noise(0.0, 1.5);
            NodeFeatures f = NodeFeatures::zeros(c_n, 1);
            for (int i = 0; i < c_n; ++i) f.at(i, 0) = noise(rng);
            inst = clique(c_n, f, {{1.0}, 0.0});
        } else if (c_name == "circular") {
            inst = circular_diameter_graph(c_n);
        } else {
            throw std::invalid_argument("unknown construction '" + c_name + "'");
        }
        const DatasetBundle b = to_bundle(inst);
        save_bundle(b, c_out);
        {
            std::ofstream out(fs::path(c_out) / "model.json", std::ios::binary);
            if (!out) throw io_error("cannot write model.json");
            out << model_to_json(model_echo_for_instance(inst)) << '\n';
        }
        std::cout << "wrote " << inst.name << " (" << b.graph.n << " nodes) to "
                  << c_out << '\n';
        return 0;
    }
    if (train_cmd->parsed()) {
        const DatasetBundle bundle = load_bundle(t_bundle);
        if (t_d) {
            if (!(*t_d > 0.0)) throw std::invalid_argument("--d must be > 0");
            t_cfg.beta = 2.0 / *t_d;
        }
        DatasetBundle view = bundle;
        if (!bundle.train_mask.empty())
            view = induced_subgraph(bundle, bundle.train_mask).bundle;
        const TrainedModel model =
            train(view.features, view.labels, weights_for(view), t_cfg);
        write_output(model_to_json(model) + "\n", t_out);
        return 0;
    }
    if (sim->parsed()) {
        const DatasetBundle bundle = load_bundle(s_bundle);
        const TrainedModel model = model_from_json(read_file(s_model));
        const ResponseConfig cfg = response_for(bundle, &model, s_d, s_tol);
        const DynamicsTrace trace = simulate_dynamics(
            model.classifier, bundle.features, weights_for(bundle), cfg);
        write_output(trace_to_json(trace) + "\n", s_out);
        return 0;
    }
    if (eval_cmd->parsed()) {
        const DatasetBundle bundle = load_bundle(e_bundle);
        const TrainedModel model = model_from_json(read_file(e_model));
        const ResponseConfig cfg = response_for(bundle, &model, e_d, e_tol);
        const EvalViews views = test_view_of(bundle);
        const MetricsRow row =
            evaluate(model.classifier, views.view.features, views.view.labels,
                     weights_for(views.view), cfg, !e_non_strategic,
                     views.eval_nodes);
        nlohmann::json j;
        j["accuracy"] = row.accuracy;
        j["moved_fraction"] = row.moved_fraction;
        j["crossed_fraction"] = row.crossed_fraction;
        j["moved_fraction_pos"] = row.moved_fraction_pos;
        j["moved_fraction_neg"] = row.moved_fraction_neg;
        j["crossed_fraction_pos"] = row.crossed_fraction_pos;
        j["crossed_fraction_neg"] = row.crossed_fraction_neg;
        j["rounds"] = row.rounds;
        j["moves_per_round"] = row.moves_per_round;
        write_output(j.dump(2) + "\n", e_out);
        return 0;
    }
    if (sweep_cmd->parsed()) {
        const ExperimentConfig cfg = experiment_config_from_json(read_file(w_config));
        const std::vector<SweepRow> rows = run_sweep(cfg);
        write_output(sweep_to_csv(rows), w_out);
        if (!w_summary.empty())
            write_output(aggregate_to_csv(aggregate_sweep(rows)), w_summary);
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
