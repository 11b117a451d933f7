#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratgraph/datasets.hpp"
#include "stratgraph/response.hpp"
#include "stratgraph/training.hpp"
#include "stratgraph/types.hpp"

namespace stratgraph {

struct MetricsRow {
    double accuracy = 0.0;
    double moved_fraction = 0.0;
    double crossed_fraction = 0.0;  // prediction flipped -1 -> +1
    double moved_fraction_pos = 0.0;
    double moved_fraction_neg = 0.0;
    double crossed_fraction_pos = 0.0;
    double crossed_fraction_neg = 0.0;
    std::vector<int> moves_per_round;
    int rounds = 0;
};

// Movement and crossing fractions (overall and per true class) plus the
// per-round move histogram, over eval_nodes (empty = all nodes).
MetricsRow movement_metrics(const DynamicsTrace& trace, const Labels& y,
                            const std::vector<int>& eval_nodes = {});

// With strategic set, runs the exact dynamics and scores the converged
// state; otherwise scores the unmodified features. Accuracy and fractions
// are over eval_nodes (empty = all).
MetricsRow evaluate(const LinearGraphClassifier& clf, const NodeFeatures& X,
                    const Labels& y, const EmbeddingWeights& W,
                    const ResponseConfig& cfg, bool strategic,
                    const std::vector<int>& eval_nodes = {});

struct DatasetSpec {
    std::string type = "synthetic";  // "synthetic" | "bundle"
    int n = 1000;                    // per split, synthetic only
    double alpha = 0.7;              // synthetic only
    std::string path;                // bundle only
};

struct ExperimentConfig {
    DatasetSpec dataset;
    std::vector<std::string> arms = {"naive", "robust", "benchmark"};
    std::string axis = "alpha";  // "alpha" | "d" | "T" | "K" | "q"
    std::vector<double> values;
    TrainConfig train;           // train.layers is the robust arm's depth
    double d = 2.0;              // max move distance when the axis is not d
    std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string ordering = "by-out-degree";  // q axis: or "random"
};

ExperimentConfig experiment_config_from_json(const std::string& text);

struct SweepRow {
    std::string axis;
    double value = 0.0;
    uint64_t seed = 0;
    std::string arm;
    MetricsRow metrics;
};

// One row per (sweep value, seed, arm); deterministic given the seed list.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

// Degree-targeted edge removal: for each q, drop all out-edges of the top
// q% nodes (ranked by out-degree desc, ties by id, or by a seeded random
// permutation), rebuild weights, and run the configured arms.
std::vector<SweepRow> centrality_ablation(const DatasetBundle& bundle,
                                          const std::vector<double>& q_values,
                                          const std::string& ordering,
                                          const ExperimentConfig& cfg,
                                          uint64_t order_seed);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

struct AggregateRow {
    std::string axis;
    double value = 0.0;
    std::string arm;
    int seeds = 0;
    double accuracy_mean = 0.0;
    double accuracy_stderr = 0.0;
    double moved_mean = 0.0;
    double crossed_mean = 0.0;
};

std::vector<AggregateRow> aggregate_sweep(const std::vector<SweepRow>& rows);
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);

}  // namespace stratgraph
