#include "stratgraph/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace stratgraph {

void DirectedGraph::validate() const {
    if (n < 0) throw std::invalid_argument("graph: negative node count");
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            throw std::invalid_argument("graph: edge weight must be finite and >= 0");
        if (!seen.insert({e.src, e.dst}).second)
            throw std::invalid_argument("graph: duplicate edge (" +
                                        std::to_string(e.src) + "," +
                                        std::to_string(e.dst) + ")");
    }
}

std::vector<int> DirectedGraph::in_degree_counts() const {
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (const Edge& e : edges) deg[static_cast<size_t>(e.dst)]++;
    return deg;
}

std::vector<std::vector<int>> DirectedGraph::out_adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const Edge& e : edges) adj[static_cast<size_t>(e.src)].push_back(e.dst);
    for (auto& lst : adj) std::sort(lst.begin(), lst.end());
    return adj;
}

EmbeddingWeights::EmbeddingWeights(int n, const std::vector<Entry>& entries)
    : n_(n), in_(static_cast<size_t>(n)), self_(static_cast<size_t>(n), 0.0) {
    if (n < 0) throw std::invalid_argument("weights: negative node count");
    for (const Entry& e : entries) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
            throw std::invalid_argument("weights: entry index out of range");
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            throw std::invalid_argument("weights: entries must be finite and >= 0");
        if (e.weight == 0.0) continue;
        in_[static_cast<size_t>(e.dst)].push_back({e.src, e.weight});
    }
    for (size_t i = 0; i < in_.size(); ++i) {
        auto& lst = in_[i];
        std::sort(lst.begin(), lst.end());
        for (size_t k = 1; k < lst.size(); ++k)
            if (lst[k].first == lst[k - 1].first)
                throw std::invalid_argument("weights: duplicate entry");
        for (const auto& [src, w] : lst)
            if (src == static_cast<int>(i)) self_[i] = w;
    }
}

EmbeddingWeights EmbeddingWeights::identity(int n) {
    std::vector<Entry> entries;
    entries.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    return EmbeddingWeights(n, entries);
}

double EmbeddingWeights::entry(int src, int dst) const {
    if (dst < 0 || dst >= n_) return 0.0;
    for (const auto& [j, w] : in_[static_cast<size_t>(dst)])
        if (j == src) return w;
    return 0.0;
}

bool EmbeddingWeights::all_self_weights_positive() const {
    for (double w : self_)
        if (w <= 0.0) return false;
    return true;
}

NodeFeatures NodeFeatures::zeros(int n, int dim) {
    NodeFeatures f;
    f.n = n;
    f.dim = dim;
    f.data.assign(static_cast<size_t>(n) * static_cast<size_t>(dim), 0.0);
    return f;
}

void NodeFeatures::validate() const {
    if (n < 0 || dim < 1)
        throw std::invalid_argument("features: need n >= 0 and dim >= 1");
    if (data.size() != static_cast<size_t>(n) * static_cast<size_t>(dim))
        throw std::invalid_argument("features: data size does not match n x dim");
    for (double v : data)
        if (!std::isfinite(v))
            throw std::invalid_argument("features: non-finite entry");
}

void validate_labels(const Labels& y, int n) {
    if (y.size() != static_cast<size_t>(n))
        throw std::invalid_argument("labels: size does not match node count");
    for (int v : y)
        if (v != -1 && v != 1)
            throw std::invalid_argument("labels: entries must be -1 or +1");
}

double LinearGraphClassifier::theta_norm_sq() const {
    double s = 0.0;
    for (double t : theta) s += t * t;
    return s;
}

}  // namespace stratgraph
