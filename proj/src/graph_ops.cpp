#include "stratgraph/graph_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace stratgraph {

namespace {

using SparseRows = std::vector<std::map<int, double>>;

SparseRows sparse_multiply(const SparseRows& a, const SparseRows& b) {
    SparseRows c(a.size());
    for (size_t r = 0; r < a.size(); ++r) {
        for (const auto& [k, av] : a[r]) {
            for (const auto& [j, bv] : b[static_cast<size_t>(k)])
                c[r][j] += av * bv;
        }
    }
    return c;
}

}  // namespace

EmbeddingWeights build_sgc_weights(const DirectedGraph& graph, int K,
                                   bool add_self_loops) {
    graph.validate();
    if (graph.n == 0) throw std::invalid_argument("sgc weights: empty graph");
    if (K < 1) throw std::invalid_argument("sgc weights: K must be >= 1");

    const size_t n = static_cast<size_t>(graph.n);
    SparseRows adj(n);
    for (const Edge& e : graph.edges)
        adj[static_cast<size_t>(e.src)][e.dst] += e.weight;
    if (add_self_loops)
        for (size_t i = 0; i < n; ++i) adj[i][static_cast<int>(i)] += 1.0;

    // Weighted in-degrees of the augmented adjacency; isolated columns get 1.
    std::vector<double> degree(n, 0.0);
    for (size_t j = 0; j < n; ++j)
        for (const auto& [i, w] : adj[j]) degree[static_cast<size_t>(i)] += w;
    for (double& d : degree)
        if (d == 0.0) d = 1.0;

    SparseRows power = adj;
    for (int k = 1; k < K; ++k) power = sparse_multiply(power, adj);

    std::vector<EmbeddingWeights::Entry> entries;
    for (size_t j = 0; j < n; ++j) {
        const double dj = std::sqrt(degree[j]);
        for (const auto& [i, w] : power[j]) {
            const double di = std::sqrt(degree[static_cast<size_t>(i)]);
            entries.push_back({static_cast<int>(j), i, w / (dj * di)});
        }
    }
    return EmbeddingWeights(graph.n, entries);
}

EmbeddingWeights build_alpha_weights(const DirectedGraph& graph, double alpha,
                                     bool allow_isolated) {
    graph.validate();
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha weights: alpha must be in [0,1]");
    for (const Edge& e : graph.edges)
        if (e.src == e.dst)
            throw std::invalid_argument("alpha weights: graph must have no self-edges");

    const std::vector<int> deg = graph.in_degree_counts();
    std::vector<EmbeddingWeights::Entry> entries;
    for (int i = 0; i < graph.n; ++i) {
        if (deg[static_cast<size_t>(i)] == 0 && alpha > 0.0) {
            if (!allow_isolated)
                throw std::invalid_argument(
                    "alpha weights: node with no in-neighbors and alpha > 0");
            entries.push_back({i, i, 1.0});
            continue;
        }
        entries.push_back({i, i, 1.0 - alpha});
    }
    if (alpha > 0.0) {
        for (const Edge& e : graph.edges)
            entries.push_back(
                {e.src, e.dst, alpha / deg[static_cast<size_t>(e.dst)]});
    }
    return EmbeddingWeights(graph.n, entries);
}

NodeFeatures embed(const NodeFeatures& X, const EmbeddingWeights& W) {
    X.validate();
    if (X.n != W.size())
        throw std::invalid_argument("embed: feature rows do not match weights");
    NodeFeatures phi = NodeFeatures::zeros(X.n, X.dim);
    for (int i = 0; i < X.n; ++i) {
        double* out = phi.row(i);
        for (const auto& [j, w] : W.in_list(i)) {
            const double* xj = X.row(j);
            for (int k = 0; k < X.dim; ++k) out[k] += w * xj[k];
        }
    }
    return phi;
}

ScoredPrediction score_and_predict(const LinearGraphClassifier& clf,
                                   const NodeFeatures& phi) {
    if (clf.dim() != phi.dim)
        throw std::invalid_argument("score: classifier dimension mismatch");
    ScoredPrediction out;
    out.scores.resize(static_cast<size_t>(phi.n));
    out.labels.resize(static_cast<size_t>(phi.n));
    for (int i = 0; i < phi.n; ++i) {
        double s = clf.bias;
        const double* p = phi.row(i);
        for (int k = 0; k < phi.dim; ++k) s += clf.theta[static_cast<size_t>(k)] * p[k];
        out.scores[static_cast<size_t>(i)] = s;
        out.labels[static_cast<size_t>(i)] = s >= 0.0 ? 1 : -1;
    }
    return out;
}

DirectedGraph direct_edges_by_degree(
    const std::vector<std::pair<int, int>>& undirected_edges, int n) {
    std::set<std::pair<int, int>> canonical;
    int max_id = -1;
    for (const auto& [u, v] : undirected_edges) {
        if (u < 0 || v < 0)
            throw std::invalid_argument("direct edges: negative node id");
        if (u == v) throw std::invalid_argument("direct edges: self-edge");
        canonical.insert({std::min(u, v), std::max(u, v)});
        max_id = std::max({max_id, u, v});
    }
    if (n < 0) n = max_id + 1;
    if (max_id >= n)
        throw std::invalid_argument("direct edges: node id exceeds node count");

    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (const auto& [u, v] : canonical) {
        deg[static_cast<size_t>(u)]++;
        deg[static_cast<size_t>(v)]++;
    }

    DirectedGraph g;
    g.n = n;
    for (const auto& [u, v] : canonical) {
        // u < v here, so the degree tie resolves to u -> v.
        if (deg[static_cast<size_t>(u)] >= deg[static_cast<size_t>(v)])
            g.edges.push_back({u, v, 1.0});
        else
            g.edges.push_back({v, u, 1.0});
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
    return g;
}

}  // namespace stratgraph
