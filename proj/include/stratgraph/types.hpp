#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stratgraph/errors.hpp"

namespace stratgraph {

struct Edge {
    int src = 0;
    int dst = 0;
    double weight = 1.0;
};

// Weighted directed social graph. Edge j->i means j can influence i.
struct DirectedGraph {
    int n = 0;
    std::vector<Edge> edges;

    // Throws std::invalid_argument on out-of-range ids, duplicate (src,dst)
    // pairs, negative weights, or non-finite weights.
    void validate() const;

    // Number of incoming edges per node (unweighted count).
    std::vector<int> in_degree_counts() const;

    // Forward adjacency lists (dst ids per src), each sorted ascending.
    std::vector<std::vector<int>> out_adjacency() const;
};

// Sparse nonnegative influence matrix. entry(j, i) is the weight of node j's
// features in node i's embedding; entry(i, i) is node i's self-weight.
class EmbeddingWeights {
public:
    struct Entry {
        int src = 0;
        int dst = 0;
        double weight = 0.0;
    };

    EmbeddingWeights() = default;
    EmbeddingWeights(int n, const std::vector<Entry>& entries);

    static EmbeddingWeights identity(int n);

    int size() const { return n_; }
    double self_weight(int i) const { return self_[static_cast<size_t>(i)]; }
    double entry(int src, int dst) const;

    // Incoming (src, weight) pairs for a destination node, sorted by src.
    // Includes the self entry when nonzero.
    const std::vector<std::pair<int, double>>& in_list(int i) const {
        return in_[static_cast<size_t>(i)];
    }

    bool all_self_weights_positive() const;

private:
    int n_ = 0;
    std::vector<std::vector<std::pair<int, double>>> in_;
    std::vector<double> self_;
};

// Row-major n x dim feature matrix; row i holds node i's features.
struct NodeFeatures {
    int n = 0;
    int dim = 0;
    std::vector<double> data;

    static NodeFeatures zeros(int n, int dim);

    double* row(int i) { return data.data() + static_cast<size_t>(i) * dim; }
    const double* row(int i) const {
        return data.data() + static_cast<size_t>(i) * dim;
    }
    double& at(int i, int k) { return data[static_cast<size_t>(i) * dim + k]; }
    double at(int i, int k) const {
        return data[static_cast<size_t>(i) * dim + k];
    }

    // Throws std::invalid_argument on shape/size mismatch, dim < 1, or
    // non-finite entries.
    void validate() const;
};

// Binary labels, entries in {-1, +1}.
using Labels = std::vector<int>;

void validate_labels(const Labels& y, int n);

// Linear classifier on embeddings: sign(theta . phi + bias), sign(0) = +1.
struct LinearGraphClassifier {
    std::vector<double> theta;
    double bias = 0.0;

    int dim() const { return static_cast<int>(theta.size()); }
    double theta_norm_sq() const;
};

}  // namespace stratgraph
