#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratgraph/datasets.hpp"
#include "stratgraph/response.hpp"
#include "stratgraph/types.hpp"

namespace stratgraph {

// A worked instance: graph, explicit influence weights, features, classifier,
// response parameters, and the outcome annotations the instance was built to
// realize. Tests verify annotations by simulation; they are never trusted.
struct ConstructionInstance {
    std::string name;
    DirectedGraph graph;  // influence edges (no self entries)
    EmbeddingWeights weights;
    NodeFeatures features;
    Labels labels;
    LinearGraphClassifier classifier;
    ResponseConfig response;

    // Accuracy for this instance is measured over these nodes (empty = all).
    std::vector<int> eval_nodes;

    std::map<int, int> expected_move_round;
    std::map<int, double> expected_post_move_feature;  // 1-d instances
    int expected_rounds = -1;  // -1 = unspecified
    std::optional<Labels> expected_final_predictions;
};

// Three users i, j, k (ids 0, 1, 2) where j's move flips i without i moving.
ConstructionInstance hitchhike_example();

// Chain of n users behind a start anchor and ahead of a finish anchor
// (n + 2 nodes). User i moves exactly at round i; max move distance 3.
ConstructionInstance cascade_graph(int n);

// Cascade of length k plus n - k satellites hanging off node k; all
// satellites move together at round k.
ConstructionInstance cascade_with_late_movers(int n, int k);

// Two 3-node chains differing only in the first feature: with x0 = 1 no
// threshold survives strategic behavior at full accuracy, with x0 = 1.2 one
// does.
std::pair<ConstructionInstance, ConstructionInstance> gap_examples();

// Fully connected graph with uniform weights 1/n (self included); movement
// is all-or-none in the first round.
ConstructionInstance clique(int n, const NodeFeatures& features,
                            const LinearGraphClassifier& clf);

// The cascade closed into a cycle through one extra far-negative node;
// rounds grow like n while the diameter stays near n/2.
ConstructionInstance circular_diameter_graph(int n);

// Export for CLI use: weight entries become explicit edges (self-loops carry
// self-weights); eval nodes become the test mask.
DatasetBundle to_bundle(const ConstructionInstance& instance);

}  // namespace stratgraph
