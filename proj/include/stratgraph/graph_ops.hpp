#pragma once

#include <utility>
#include <vector>

#include "stratgraph/types.hpp"

namespace stratgraph {

// Normalized K-hop propagation weights D^{-1/2} A^K D^{-1/2} on the
// (optionally self-looped) weighted adjacency. D is the diagonal of weighted
// in-degrees of the augmented adjacency; an isolated node gets degree 1.
// With add_self_loops the self-weight of every node is strictly positive.
EmbeddingWeights build_sgc_weights(const DirectedGraph& graph, int K,
                                   bool add_self_loops);

// Interpolation weights: self-weight 1-alpha, and alpha/deg_i spread over
// node i's in-neighbors. Columns sum to 1. With allow_isolated, a node with
// no in-neighbors keeps self-weight 1 instead of raising invalid_argument.
EmbeddingWeights build_alpha_weights(const DirectedGraph& graph, double alpha,
                                     bool allow_isolated = false);

// Row i of the result is sum_j w(j,i) * X[j].
NodeFeatures embed(const NodeFeatures& X, const EmbeddingWeights& W);

struct ScoredPrediction {
    std::vector<double> scores;
    Labels labels;
};

// score_i = theta . phi_i + bias; label +1 iff score >= 0.
ScoredPrediction score_and_predict(const LinearGraphClassifier& clf,
                                   const NodeFeatures& phi);

// Orient each undirected edge {u, v} from the higher-degree endpoint to the
// lower-degree one; equal degrees orient low id -> high id. Duplicate
// undirected pairs are collapsed; self-edges are invalid. n is inferred from
// the ids unless given.
DirectedGraph direct_edges_by_degree(
    const std::vector<std::pair<int, int>>& undirected_edges, int n = -1);

}  // namespace stratgraph
