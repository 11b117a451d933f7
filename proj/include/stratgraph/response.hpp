#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stratgraph/graph_ops.hpp"
#include "stratgraph/types.hpp"

namespace stratgraph {

// User response parameters. Costs are beta * ||x' - x||_2 against a fixed
// budget of 2 (the maximum prediction gain), so the maximum moving distance
// is budget / beta.
struct ResponseConfig {
    double beta = 1.0;
    double budget = 2.0;
    double tol = 1e-6;
    int max_rounds = 0;  // 0 = automatic cap of n + 1 rounds

    double max_distance() const { return budget / beta; }
    void validate() const;
};

// Full record of a best-response simulation.
//
// Round t (1-based) maps features_by_round[t-1] to features_by_round[t];
// `rounds` counts rounds in which at least one node moved. The simulator
// stops at the first round with zero moves (that confirmation round is not
// recorded: its snapshot would duplicate the last one).
struct DynamicsTrace {
    int rounds = 0;
    std::vector<NodeFeatures> features_by_round;      // size rounds + 1
    std::vector<Labels> predictions_by_round;         // size rounds + 1
    std::vector<std::optional<int>> moved_round;      // 1-based, one per node
    std::vector<double> cost;                         // cumulative per node
    std::vector<int> moves_per_round;                 // size rounds

    // Predictions in effect at round t; rounds past convergence return the
    // converged labels.
    const Labels& predictions_at(int t) const;
    const NodeFeatures& final_features() const { return features_by_round.back(); }
    const Labels& final_predictions() const { return predictions_by_round.back(); }
};

// Minimum-cost move of node i landing its embedding score exactly at tol,
// holding all other nodes fixed:
//   x_i - (theta . phi_i + b - tol) / (||theta||^2 w_ii) * theta
// Throws node_immobile_error when w_ii = 0 and degenerate_classifier_error
// when theta = 0.
std::vector<double> project_to_boundary(const LinearGraphClassifier& clf,
                                        const NodeFeatures& X,
                                        const EmbeddingWeights& W, int i,
                                        double tol);

// Same, but only nodes with strictly negative score move; others are
// returned unchanged.
std::vector<double> project_positive_only(const LinearGraphClassifier& clf,
                                          const NodeFeatures& X,
                                          const EmbeddingWeights& W, int i,
                                          double tol);

// Minimum-cost move under the quadratic cost (x'-x)^T A (x'-x) / 2 for
// positive-definite A (row-major dim x dim). A = I recovers
// project_to_boundary with tol = 0.
std::vector<double> project_generalized(const LinearGraphClassifier& clf,
                                        const NodeFeatures& X,
                                        const EmbeddingWeights& W, int i,
                                        const std::vector<double>& A);

struct RoundResult {
    NodeFeatures features;
    std::vector<uint8_t> moved;
    std::vector<double> kappa;
};

// One synchronous round: every decision reads the round-start features.
// Node i moves to its boundary projection iff its score is strictly
// negative and the move cost plus its accumulated cost fits the budget.
// Nodes with zero self-weight never move (skipped silently).
RoundResult best_response_round(const LinearGraphClassifier& clf,
                                const NodeFeatures& X,
                                const EmbeddingWeights& W,
                                const ResponseConfig& cfg,
                                std::vector<double> kappa);

// Runs rounds until none moves; halts within n rounds or throws
// invariant_violation.
DynamicsTrace simulate_dynamics(const LinearGraphClassifier& clf,
                                const NodeFeatures& X,
                                const EmbeddingWeights& W,
                                const ResponseConfig& cfg);

// Nodes whose prediction flipped -1 -> +1 without them ever moving.
std::vector<int> hitchhikers(const DynamicsTrace& trace);

// JSON export: rounds, per-node move rounds, costs, per-round predictions.
std::string trace_to_json(const DynamicsTrace& trace);

}  // namespace stratgraph
