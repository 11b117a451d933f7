#include "stratgraph/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stratgraph/graph_ops.hpp"
#include "stratgraph/io_util.hpp"

namespace stratgraph {

namespace {

std::vector<int> all_nodes(int n) {
    std::vector<int> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = i;
    return ids;
}

double fraction(int num, int den) {
    return den > 0 ? static_cast<double>(num) / den : 0.0;
}

// Weights for a bundle view, with an optional SGC depth override. The alpha
// scheme is rebuilt leniently so ablated graphs with freshly isolated nodes
// still embed (such nodes keep self-weight 1).
EmbeddingWeights view_weights(const DatasetBundle& view, int k_override) {
    if (view.meta.weight_scheme == "alpha")
        return build_alpha_weights(view.graph, view.meta.alpha, true);
    if (view.meta.weight_scheme == "explicit") return bundle_weights(view);
    const int k = k_override > 0 ? k_override : view.meta.sgc_k;
    return build_sgc_weights(view.graph, k, true);
}

struct PreparedViews {
    DatasetBundle train_view;
    DatasetBundle test_view;
    std::vector<int> test_eval;  // ids inside test_view
};

PreparedViews make_views(const DatasetBundle& bundle) {
    PreparedViews out;
    out.train_view = induced_subgraph(bundle, bundle.train_mask).bundle;

    std::vector<int> keep;
    std::set<int> train_set(bundle.train_mask.begin(), bundle.train_mask.end());
    for (int i = 0; i < bundle.graph.n; ++i)
        if (!train_set.count(i)) keep.push_back(i);
    SubgraphView test = induced_subgraph(bundle, keep);
    out.test_eval = test.bundle.test_mask;
    out.test_view = std::move(test.bundle);
    return out;
}

}  // namespace

MetricsRow movement_metrics(const DynamicsTrace& trace, const Labels& y,
                            const std::vector<int>& eval_nodes) {
    const int n = static_cast<int>(trace.moved_round.size());
    validate_labels(y, n);
    const std::vector<int> nodes = eval_nodes.empty() ? all_nodes(n) : eval_nodes;

    const Labels& first = trace.predictions_by_round.front();
    const Labels& last = trace.predictions_by_round.back();

    int moved = 0, crossed = 0;
    int pos = 0, neg = 0, moved_pos = 0, moved_neg = 0;
    int crossed_pos = 0, crossed_neg = 0;
    for (int id : nodes) {
        const size_t i = static_cast<size_t>(id);
        const bool m = trace.moved_round[i].has_value();
        const bool c = first[i] == -1 && last[i] == 1;
        const bool is_pos = y[i] == 1;
        (is_pos ? pos : neg)++;
        if (m) {
            ++moved;
            (is_pos ? moved_pos : moved_neg)++;
        }
        if (c) {
            ++crossed;
            (is_pos ? crossed_pos : crossed_neg)++;
        }
    }

    MetricsRow row;
    const int total = static_cast<int>(nodes.size());
    row.moved_fraction = fraction(moved, total);
    row.crossed_fraction = fraction(crossed, total);
    row.moved_fraction_pos = fraction(moved_pos, pos);
    row.moved_fraction_neg = fraction(moved_neg, neg);
    row.crossed_fraction_pos = fraction(crossed_pos, pos);
    row.crossed_fraction_neg = fraction(crossed_neg, neg);
    row.moves_per_round = trace.moves_per_round;
    row.rounds = trace.rounds;
    return row;
}

MetricsRow evaluate(const LinearGraphClassifier& clf, const NodeFeatures& X,
                    const Labels& y, const EmbeddingWeights& W,
                    const ResponseConfig& cfg, bool strategic,
                    const std::vector<int>& eval_nodes) {
    validate_labels(y, X.n);
    const std::vector<int> nodes = eval_nodes.empty() ? all_nodes(X.n) : eval_nodes;

    MetricsRow row;
    if (strategic) {
        const DynamicsTrace trace = simulate_dynamics(clf, X, W, cfg);
        row = movement_metrics(trace, y, nodes);
        const Labels& pred = trace.final_predictions();
        int correct = 0;
        for (int id : nodes)
            if (pred[static_cast<size_t>(id)] == y[static_cast<size_t>(id)]) ++correct;
        row.accuracy = fraction(correct, static_cast<int>(nodes.size()));
    } else {
        const Labels pred = score_and_predict(clf, embed(X, W)).labels;
        int correct = 0;
        for (int id : nodes)
            if (pred[static_cast<size_t>(id)] == y[static_cast<size_t>(id)]) ++correct;
        row.accuracy = fraction(correct, static_cast<int>(nodes.size()));
    }
    return row;
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("experiment config: ") + e.what());
    }
    try {
        ExperimentConfig cfg;
        if (j.contains("dataset")) {
            const nlohmann::json& d = j["dataset"];
            cfg.dataset.type = d.value("type", std::string("synthetic"));
            cfg.dataset.n = d.value("n", 1000);
            cfg.dataset.alpha = d.value("alpha", 0.7);
            cfg.dataset.path = d.value("path", std::string());
        }
        if (j.contains("arms"))
            cfg.arms = j["arms"].get<std::vector<std::string>>();
        cfg.axis = j.value("axis", std::string("alpha"));
        if (j.contains("values"))
            cfg.values = j["values"].get<std::vector<double>>();
        if (j.contains("seeds"))
            cfg.seeds = j["seeds"].get<std::vector<uint64_t>>();
        cfg.d = j.value("d", cfg.dataset.type == "synthetic" ? 2.0 : 0.25);
        cfg.ordering = j.value("ordering", std::string("by-out-degree"));
        if (j.contains("train")) {
            const nlohmann::json& t = j["train"];
            cfg.train.learning_rate = t.value("learning_rate", 0.2);
            cfg.train.weight_decay = t.value("weight_decay", 1.3e-5);
            cfg.train.epochs = t.value("epochs", 20);
            cfg.train.layers = t.value("layers", 3);
            cfg.train.tau = t.value("tau", 0.05);
            cfg.train.tol = t.value("tol", 1e-6);
            cfg.train.fix_theta = t.value("fix_theta", false);
        }
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("experiment config: ") + e.what());
    }
}

namespace {

// Train the requested arms on the train view and evaluate them on the test
// view; d <= 0 means no movement is possible, so strategic arms score the
// untouched features.
void run_arms(const ExperimentConfig& cfg, const PreparedViews& views,
              int k_override, double d, double sweep_value, uint64_t seed,
              std::vector<SweepRow>* out) {
    const EmbeddingWeights train_w = view_weights(views.train_view, k_override);
    const EmbeddingWeights test_w = view_weights(views.test_view, k_override);

    const double beta = d > 0.0 ? 2.0 / d : 1.0;
    ResponseConfig response;
    response.beta = beta;
    response.tol = cfg.train.tol;

    const bool want_t0 =
        std::count(cfg.arms.begin(), cfg.arms.end(), "naive") ||
        std::count(cfg.arms.begin(), cfg.arms.end(), "benchmark");

    TrainedModel t0_model, robust_model;
    if (want_t0) {
        TrainConfig tc = cfg.train;
        tc.layers = 0;
        tc.beta = beta;
        tc.seed = seed;
        t0_model = train(views.train_view.features, views.train_view.labels,
                         train_w, tc);
    }
    if (std::count(cfg.arms.begin(), cfg.arms.end(), "robust")) {
        TrainConfig tc = cfg.train;
        tc.beta = beta;
        tc.seed = seed;
        if (d <= 0.0) tc.layers = 0;  // nobody can move; layers would be inert
        robust_model = train(views.train_view.features, views.train_view.labels,
                             train_w, tc);
    }

    for (const std::string& arm : cfg.arms) {
        const bool strategic = arm != "benchmark" && d > 0.0;
        const LinearGraphClassifier& clf =
            arm == "robust" ? robust_model.classifier : t0_model.classifier;
        SweepRow row;
        row.axis = cfg.axis;
        row.value = sweep_value;
        row.seed = seed;
        row.arm = arm;
        row.metrics = evaluate(clf, views.test_view.features,
                               views.test_view.labels, test_w, response,
                               strategic, views.test_eval);
        out->push_back(std::move(row));
    }
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    if (cfg.values.empty())
        throw std::invalid_argument("sweep: no values for axis " + cfg.axis);
    if (cfg.seeds.empty()) throw std::invalid_argument("sweep: no seeds");

    const bool synthetic = cfg.dataset.type == "synthetic";
    DatasetBundle loaded;
    if (!synthetic) loaded = load_bundle(cfg.dataset.path);

    if (cfg.axis == "q") {
        const DatasetBundle& base = synthetic
            ? (loaded = generate_synthetic(cfg.dataset.n, cfg.dataset.alpha,
                                           cfg.seeds.front()))
            : loaded;
        return centrality_ablation(base, cfg.values, cfg.ordering, cfg,
                                   cfg.seeds.front());
    }

    std::vector<SweepRow> rows;
    for (double value : cfg.values) {
        for (uint64_t seed : cfg.seeds) {
            DatasetBundle bundle;
            if (synthetic) {
                const double alpha =
                    cfg.axis == "alpha" ? value : cfg.dataset.alpha;
                bundle = generate_synthetic(cfg.dataset.n, alpha, seed);
            } else {
                bundle = loaded;
            }

            int k_override = 0;
            if (cfg.axis == "K") {
                if (synthetic)
                    throw std::invalid_argument("sweep: K axis needs a bundle dataset");
                k_override = static_cast<int>(value);
                bundle = make_inductive_split(bundle, k_override).bundle;
            }

            double d = cfg.d;
            if (cfg.axis == "d") d = value;

            ExperimentConfig point = cfg;
            if (cfg.axis == "T") point.train.layers = static_cast<int>(value);

            const PreparedViews views = make_views(bundle);
            run_arms(point, views, k_override, d, value, seed, &rows);
        }
    }
    return rows;
}

std::vector<SweepRow> centrality_ablation(const DatasetBundle& bundle,
                                          const std::vector<double>& q_values,
                                          const std::string& ordering,
                                          const ExperimentConfig& cfg,
                                          uint64_t order_seed) {
    bundle.validate();
    for (double q : q_values)
        if (q < 0.0 || q > 100.0)
            throw std::invalid_argument("ablation: q must be in [0,100]");

    const int n = bundle.graph.n;
    std::vector<int> ranking = all_nodes(n);
    if (ordering == "by-out-degree") {
        std::vector<int> out_deg(static_cast<size_t>(n), 0);
        for (const Edge& e : bundle.graph.edges)
            if (e.src != e.dst) out_deg[static_cast<size_t>(e.src)]++;
        std::sort(ranking.begin(), ranking.end(), [&](int a, int b) {
            if (out_deg[static_cast<size_t>(a)] != out_deg[static_cast<size_t>(b)])
                return out_deg[static_cast<size_t>(a)] > out_deg[static_cast<size_t>(b)];
            return a < b;
        });
    } else if (ordering == "random") {
        std::mt19937_64 rng(order_seed);
        std::shuffle(ranking.begin(), ranking.end(), rng);
    } else {
        throw std::invalid_argument("ablation: unknown ordering '" + ordering + "'");
    }

    ExperimentConfig point = cfg;
    point.axis = "q";

    std::vector<SweepRow> rows;
    for (double q : q_values) {
        const int removed = static_cast<int>(std::llround(q * n / 100.0));
        std::set<int> cut(ranking.begin(), ranking.begin() + removed);

        DatasetBundle ablated = bundle;
        ablated.graph.edges.clear();
        for (const Edge& e : bundle.graph.edges) {
            // Self-loops carry self-weights in explicit bundles; keep them.
            if (e.src != e.dst && cut.count(e.src)) continue;
            ablated.graph.edges.push_back(e);
        }

        for (uint64_t seed : cfg.seeds) {
            const PreparedViews views = make_views(ablated);
            run_arms(point, views, 0, cfg.d, q, seed, &rows);
        }
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "axis,value,seed,arm,accuracy,moved_fraction,crossed_fraction,"
           "moved_fraction_pos,moved_fraction_neg,crossed_fraction_pos,"
           "crossed_fraction_neg,rounds\n";
    for (const SweepRow& r : rows) {
        out << r.axis << ',' << format_double(r.value) << ',' << r.seed << ','
            << r.arm << ',' << format_double(r.metrics.accuracy) << ','
            << format_double(r.metrics.moved_fraction) << ','
            << format_double(r.metrics.crossed_fraction) << ','
            << format_double(r.metrics.moved_fraction_pos) << ','
            << format_double(r.metrics.moved_fraction_neg) << ','
            << format_double(r.metrics.crossed_fraction_pos) << ','
            << format_double(r.metrics.crossed_fraction_neg) << ','
            << r.metrics.rounds << '\n';
    }
    return out.str();
}

std::vector<AggregateRow> aggregate_sweep(const std::vector<SweepRow>& rows) {
    std::map<std::pair<double, std::string>, std::vector<const SweepRow*>> groups;
    std::vector<std::pair<double, std::string>> order;
    for (const SweepRow& r : rows) {
        const auto key = std::make_pair(r.value, r.arm);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(&r);
    }
    std::vector<AggregateRow> out;
    for (const auto& key : order) {
        const auto& group = groups[key];
        AggregateRow agg;
        agg.axis = group.front()->axis;
        agg.value = key.first;
        agg.arm = key.second;
        agg.seeds = static_cast<int>(group.size());
        double sum = 0.0, moved = 0.0, crossed = 0.0;
        for (const SweepRow* r : group) {
            sum += r->metrics.accuracy;
            moved += r->metrics.moved_fraction;
            crossed += r->metrics.crossed_fraction;
        }
        agg.accuracy_mean = sum / agg.seeds;
        agg.moved_mean = moved / agg.seeds;
        agg.crossed_mean = crossed / agg.seeds;
        if (agg.seeds > 1) {
            double ss = 0.0;
            for (const SweepRow* r : group) {
                const double d = r->metrics.accuracy - agg.accuracy_mean;
                ss += d * d;
            }
            agg.accuracy_stderr =
                std::sqrt(ss / (agg.seeds - 1)) / std::sqrt(agg.seeds);
        }
        out.push_back(agg);
    }
    return out;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
    std::ostringstream out;
    out << "axis,value,arm,seeds,accuracy_mean,accuracy_stderr,moved_mean,"
           "crossed_mean\n";
    for (const AggregateRow& r : rows) {
        out << r.axis << ',' << format_double(r.value) << ',' << r.arm << ','
            << r.seeds << ',' << format_double(r.accuracy_mean) << ','
            << format_double(r.accuracy_stderr) << ','
            << format_double(r.moved_mean) << ','
            << format_double(r.crossed_mean) << '\n';
    }
    return out.str();
}

}  // namespace stratgraph
