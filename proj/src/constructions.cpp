#include "stratgraph/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace stratgraph {

namespace {

// Max move distance 3 under the fixed budget of 2.
constexpr double kCascadeBeta = 2.0 / 3.0;

NodeFeatures features_1d(const std::vector<double>& values) {
    NodeFeatures f = NodeFeatures::zeros(static_cast<int>(values.size()), 1);
    for (size_t i = 0; i < values.size(); ++i) f.at(static_cast<int>(i), 0) = values[i];
    return f;
}

DirectedGraph graph_from_entries(int n,
                                 const std::vector<EmbeddingWeights::Entry>& entries) {
    DirectedGraph g;
    g.n = n;
    for (const auto& e : entries)
        if (e.src != e.dst) g.edges.push_back({e.src, e.dst, e.weight});
    return g;
}

double cascade_feature(int i) { return i % 3 == 1 ? 2.0 : -4.0; }

}  // namespace

ConstructionInstance hitchhike_example() {
    ConstructionInstance inst;
    inst.name = "hitchhike";
    // ids: i = 0, j = 1, k = 2
    const std::vector<EmbeddingWeights::Entry> entries = {
        {0, 0, 0.4}, {1, 0, 0.6},          // i listens to itself and j
        {1, 1, 2.0 / 3.0}, {2, 1, 1.0 / 3.0},  // j listens to itself and k
        {2, 2, 1.0},
    };
    inst.weights = EmbeddingWeights(3, entries);
    inst.graph = graph_from_entries(3, entries);
    inst.features = features_1d({-2.1, -0.5, -3.0});
    inst.labels = {1, 1, -1};
    inst.classifier = {{1.0}, 0.0};
    inst.response = {1.0, 2.0, 0.0, 0};

    inst.expected_move_round = {{1, 1}};
    inst.expected_post_move_feature = {{1, 1.5}};
    inst.expected_rounds = 1;
    inst.expected_final_predictions = Labels{1, 1, -1};
    return inst;
}

ConstructionInstance cascade_graph(int n) {
    if (n < 1) throw std::invalid_argument("cascade: n must be >= 1");
    ConstructionInstance inst;
    inst.name = "cascade";
    const int total = n + 2;

    std::vector<EmbeddingWeights::Entry> entries;
    entries.push_back({0, 0, 0.5});
    entries.push_back({1, 0, 0.5});
    for (int i = 1; i <= n; ++i) {
        entries.push_back({i, i, 1.0 / 3.0});
        entries.push_back({i - 1, i, 1.0 / 3.0});
        entries.push_back({i + 1, i, 1.0 / 3.0});
    }
    entries.push_back({n + 1, n + 1, 0.5});  // the finish anchor hears nobody
    inst.weights = EmbeddingWeights(total, entries);
    inst.graph = graph_from_entries(total, entries);

    std::vector<double> x(static_cast<size_t>(total));
    x[0] = -1.0;
    for (int i = 1; i <= n + 1; ++i) x[static_cast<size_t>(i)] = cascade_feature(i);
    inst.features = features_1d(x);

    inst.labels.assign(static_cast<size_t>(total), -1);
    inst.labels[0] = 1;
    inst.labels[static_cast<size_t>(n + 1)] = (n + 1) % 3 == 1 ? 1 : -1;

    inst.classifier = {{1.0}, 0.0};
    inst.response = {kCascadeBeta, 2.0, 0.0, 0};
    for (int i = 1; i <= n; ++i) inst.eval_nodes.push_back(i);

    for (int i = 1; i <= n; ++i) {
        inst.expected_move_round[i] = i;
        inst.expected_post_move_feature[i] = i % 3 == 1 ? 5.0 : -1.0;
    }
    inst.expected_rounds = n;
    Labels final(static_cast<size_t>(total), 1);
    final[static_cast<size_t>(n + 1)] = (n + 1) % 3 == 1 ? 1 : -1;
    inst.expected_final_predictions = std::move(final);
    return inst;
}

ConstructionInstance cascade_with_late_movers(int n, int k) {
    if (k < 1 || k > n)
        throw std::invalid_argument("late movers: need 1 <= k <= n");
    ConstructionInstance inst = cascade_graph(k);
    inst.name = "cascade_late_movers";
    const int base = k + 2;
    const int total = n + 2;

    // Satellites listen to node k-1, whose move at round k-1 becomes visible
    // to their round-k decisions. The trigger is that node's settled value
    // (node 0 never moves; chain nodes land 3 above their start).
    const int anchor = k - 1;
    const double trigger =
        anchor == 0 ? -1.0 : cascade_feature(anchor) + 3.0;

    std::vector<EmbeddingWeights::Entry> entries;
    for (int i = 0; i < base; ++i)
        for (const auto& [src, w] : inst.weights.in_list(i))
            entries.push_back({src, i, w});
    std::vector<double> x(inst.features.data);
    Labels labels = inst.labels;
    for (int j = base; j < total; ++j) {
        entries.push_back({j, j, 0.5});
        entries.push_back({anchor, j, 0.5});
        // crosses exactly when moving the full distance 3 against `trigger`
        x.push_back(-trigger - 3.0);
        labels.push_back(-1);
        inst.expected_move_round[j] = k;
        inst.expected_post_move_feature[j] = -trigger;
    }
    inst.weights = EmbeddingWeights(total, entries);
    inst.graph = graph_from_entries(total, entries);
    inst.features = features_1d(x);
    inst.labels = std::move(labels);
    inst.expected_rounds = k;
    inst.expected_final_predictions.reset();
    return inst;
}

std::pair<ConstructionInstance, ConstructionInstance> gap_examples() {
    auto make = [](const char* name, double x0) {
        ConstructionInstance inst;
        inst.name = name;
        const std::vector<EmbeddingWeights::Entry> entries = {
            {0, 0, 0.5},       {1, 0, 0.5},
            {0, 1, 1.0 / 3.0}, {1, 1, 1.0 / 3.0}, {2, 1, 1.0 / 3.0},
            {1, 2, 0.5},       {2, 2, 0.5},
        };
        inst.weights = EmbeddingWeights(3, entries);
        inst.graph = graph_from_entries(3, entries);
        inst.features = features_1d({x0, -1.0, -1.0});
        inst.labels = {1, -1, -1};
        inst.classifier = {{1.0}, 0.0};  // threshold chosen by line search
        inst.response = {1.0, 2.0, 0.0, 0};
        return inst;
    };
    return {make("gap_large", 1.0), make("gap_none", 1.2)};
}

ConstructionInstance clique(int n, const NodeFeatures& features,
                            const LinearGraphClassifier& clf) {
    if (n < 2) throw std::invalid_argument("clique: n must be >= 2");
    features.validate();
    if (features.n != n)
        throw std::invalid_argument("clique: feature rows must match n");

    ConstructionInstance inst;
    inst.name = "clique";
    std::vector<EmbeddingWeights::Entry> entries;
    const double w = 1.0 / static_cast<double>(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) entries.push_back({j, i, w});
    inst.weights = EmbeddingWeights(n, entries);
    inst.graph = graph_from_entries(n, entries);
    inst.features = features;
    inst.labels.assign(static_cast<size_t>(n), 1);
    inst.classifier = clf;
    inst.response = {1.0, 2.0, 0.0, 0};
    return inst;
}

ConstructionInstance circular_diameter_graph(int n) {
    if (n < 3) throw std::invalid_argument("circular cascade: n must be >= 3");
    ConstructionInstance inst;
    inst.name = "circular_cascade";
    const int total = n + 3;  // cycle 0,1,...,n+1,n+2,0

    std::vector<EmbeddingWeights::Entry> entries;
    const double w = 1.0 / 3.0;
    for (int i = 0; i < total; ++i) {
        const int prev = (i + total - 1) % total;
        const int next = (i + 1) % total;
        entries.push_back({i, i, w});
        entries.push_back({prev, i, w});
        entries.push_back({next, i, w});
    }
    inst.weights = EmbeddingWeights(total, entries);
    inst.graph = graph_from_entries(total, entries);

    std::vector<double> x(static_cast<size_t>(total));
    x[0] = -1.0;
    for (int i = 1; i <= n + 1; ++i) x[static_cast<size_t>(i)] = cascade_feature(i);
    x[static_cast<size_t>(n + 2)] = -8.0;
    inst.features = features_1d(x);
    inst.labels.assign(static_cast<size_t>(total), -1);

    inst.classifier = {{1.0}, 0.0};
    inst.response = {kCascadeBeta, 2.0, 0.0, 0};

    for (int i = 1; i <= n; ++i) {
        inst.expected_move_round[i] = i;
        inst.expected_post_move_feature[i] = i % 3 == 1 ? 5.0 : -1.0;
    }
    inst.expected_rounds = n;
    return inst;
}

DatasetBundle to_bundle(const ConstructionInstance& instance) {
    DatasetBundle b;
    b.graph.n = instance.weights.size();
    for (int i = 0; i < instance.weights.size(); ++i)
        for (const auto& [src, w] : instance.weights.in_list(i))
            b.graph.edges.push_back({src, i, w});
    std::sort(b.graph.edges.begin(), b.graph.edges.end(),
              [](const Edge& a, const Edge& c) {
                  return std::tie(a.src, a.dst) < std::tie(c.src, c.dst);
              });
    b.features = instance.features;
    b.labels = instance.labels;
    b.test_mask = instance.eval_nodes;
    if (b.test_mask.empty())
        for (int i = 0; i < b.graph.n; ++i) b.test_mask.push_back(i);
    b.meta.name = instance.name;
    b.meta.n = b.graph.n;
    b.meta.feature_dim = instance.features.dim;
    b.meta.weight_scheme = "explicit";
    b.meta.beta = instance.response.beta;
    b.meta.tol = instance.response.tol;
    b.validate();
    return b;
}

}  // namespace stratgraph
