#pragma once

#include <vector>

#include "stratgraph/response.hpp"
#include "stratgraph/types.hpp"

namespace stratgraph {

// Differentiable response stack parameters. `frozen` marks nodes that never
// respond (required for nodes with zero self-weight); empty means none.
struct SmoothConfig {
    double tau = 0.05;
    int layers = 0;  // T
    double tol = 1e-6;
    double beta = 1.0;
    std::vector<uint8_t> frozen;

    void validate() const;
};

// Everything the forward pass computed, kept for the manual backward pass.
struct ForwardRecord {
    struct LayerCache {
        std::vector<double> score;       // theta . phi + b at layer input
        std::vector<double> proj_coeff;  // (score - tol) / (||theta||^2 w_ii)
        std::vector<double> cost;        // beta * ||x' - x0||
        std::vector<double> gate;        // sigma_tau(2 - cost)
        std::vector<uint8_t> active;     // score < 0 and not frozen
    };

    std::vector<NodeFeatures> x;  // size T + 1; x[0] is the input
    std::vector<LayerCache> layers;
    std::vector<std::vector<double>> kappa;  // size T + 1; kappa[0] = 0
    NodeFeatures final_phi;
    std::vector<double> final_scores;
    std::vector<double> theta_echo;
    double bias_echo = 0.0;
};

// One smoothed response layer. Per node: x' is the tolerance projection
// applied only when the score is strictly negative, and the output
// interpolates x -> x' through a sigmoid gate on the budget slack
// 2 - beta * ||x' - x0||. Throws node_immobile_error for a non-frozen node
// with zero self-weight.
NodeFeatures soft_response_layer(const LinearGraphClassifier& clf,
                                 const NodeFeatures& X_t,
                                 const NodeFeatures& X_0,
                                 const EmbeddingWeights& W,
                                 const SmoothConfig& cfg);

// T stacked layers threading the original features as the cost reference;
// final scores come from the embedding of the last layer. T = 0 leaves the
// features untouched.
ForwardRecord stacked_forward(const LinearGraphClassifier& clf,
                              const NodeFeatures& X,
                              const EmbeddingWeights& W,
                              const SmoothConfig& cfg);

struct ParamGrad {
    std::vector<double> theta;
    double bias = 0.0;
};

// Exact gradients of the recorded computation w.r.t. theta and bias, given
// the loss gradient at the final scores. The score-negativity mask is a
// stop-gradient gate. Throws invalid_argument when the record was produced
// by a different classifier.
ParamGrad backward(const LinearGraphClassifier& clf,
                   const EmbeddingWeights& W, const SmoothConfig& cfg,
                   const ForwardRecord& record,
                   const std::vector<double>& score_grad);

// Numerically stable sigma((2 - cost) / tau) building block.
double sigmoid(double z);

}  // namespace stratgraph
