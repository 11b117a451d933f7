#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratgraph/response.hpp"
#include "stratgraph/smooth.hpp"
#include "stratgraph/types.hpp"

namespace stratgraph {

struct TrainConfig {
    double learning_rate = 0.2;
    double weight_decay = 1.3e-5;  // applied to theta only, not bias
    int epochs = 20;
    int layers = 0;  // T; 0 trains the plain (naive) model
    double tau = 0.05;
    double beta = 1.0;
    double tol = 1e-6;
    uint64_t seed = 0;
    // Threshold-class training: theta pinned to all-ones, only the bias
    // learns (the 1-d protocol of the synthetic experiments).
    bool fix_theta = false;

    void validate() const;
};

struct TrainedModel {
    LinearGraphClassifier classifier;
    std::vector<double> loss_curve;  // one entry per epoch
    TrainConfig config;
};

struct LossResult {
    double value = 0.0;
    std::vector<double> grad;  // d loss / d score, one per node
};

// Mean log(1 + exp(-y * score)); numerically stable at large |score|.
LossResult logistic_loss(const std::vector<double>& scores, const Labels& y);

// Full-batch Adam (0.9 / 0.999 / 1e-8) on (theta, bias) through the smoothed
// response stack, minimizing logistic loss + weight_decay * ||theta||^2.
// Deterministic under a fixed seed. Nodes with zero self-weight are frozen.
// Throws training_failure if the loss turns non-finite.
TrainedModel train(const NodeFeatures& X, const Labels& y,
                   const EmbeddingWeights& W, const TrainConfig& cfg);

struct LineSearchResult {
    double best_threshold = 0.0;
    double best_accuracy = 0.0;
    std::vector<double> thresholds;
    std::vector<double> accuracies;
};

// Scans threshold classifiers (dim must be 1; theta fixed to 1; label +1 iff
// phi >= threshold). With strategic set, each threshold is scored on the
// state reached by exact dynamics; otherwise on the raw embeddings. Ties go
// to the smallest threshold.
LineSearchResult line_search_threshold(const NodeFeatures& X,
                                       const EmbeddingWeights& W,
                                       const Labels& y,
                                       const std::vector<double>& grid,
                                       const ResponseConfig& cfg,
                                       bool strategic);

// Inclusive uniform grid [lo, hi] with the given step.
std::vector<double> make_grid(double lo, double hi, double step);

// Model (de)serialization: theta array, bias, config echo, format version.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

}  // namespace stratgraph
