#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratgraph/types.hpp"

namespace stratgraph {

// Mapping from original multiclass ids to binary labels.
struct BinarizationMap {
    std::set<int> negative_classes;
    std::set<int> positive_classes;

    void validate() const;  // disjointness
};

// Shipped class merges for the three citation datasets.
BinarizationMap cora_binarization();      // neg {0,2,3}, pos {1,4,5,6}
BinarizationMap citeseer_binarization();  // neg {0,2,3}, pos {1,4,5}
BinarizationMap pubmed_binarization();    // neg {1,2},   pos {0}

struct DatasetMeta {
    std::string name;
    int n = 0;
    int feature_dim = 0;
    std::optional<BinarizationMap> class_map;
    // Weight scheme hint for downstream tooling: "alpha", "sgc", "explicit".
    std::string weight_scheme;
    double alpha = 0.0;  // meaningful when weight_scheme == "alpha"
    int sgc_k = 1;       // meaningful when weight_scheme == "sgc"
    double beta = 1.0;   // default response cost scale for this data
    double tol = 1e-6;   // default boundary tolerance for this data
    std::string notes;
};

struct DatasetBundle {
    DirectedGraph graph;
    NodeFeatures features;
    Labels labels;
    std::vector<int> train_mask;  // sorted node ids (train and val merged)
    std::vector<int> test_mask;   // sorted node ids
    DatasetMeta meta;

    void validate() const;
};

// Two disjoint, identically sampled components of n nodes each: nodes
// [0, n) form the train split and [n, 2n) the test split. Features are 1-d
// Gaussians N(y, 1) with balanced classes; every node receives 5 same-class
// and 3 other-class in-neighbors sampled without replacement inside its
// component. n must be even and >= 16.
DatasetBundle generate_synthetic(int n_per_split, double alpha, uint64_t seed);

// Directory layout: meta.json, edges.csv, features.csv (or features.f32),
// labels.csv, masks.csv.
void save_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir,
                 bool features_binary = false);
DatasetBundle load_bundle(const std::filesystem::path& dir);

// negative classes -> -1, positive -> +1; uncovered class is an error.
Labels binarize(const std::vector<int>& multiclass, const BinarizationMap& map);

struct InductiveSplit {
    DatasetBundle bundle;
    double removed_fraction = 0.0;
};

// Drops from the test mask every node reachable from a train node within K
// forward hops (train information would leak into its embedding).
InductiveSplit make_inductive_split(const DatasetBundle& bundle, int K);

struct SubgraphView {
    DatasetBundle bundle;
    std::vector<int> old_to_new;  // -1 for dropped nodes
};

// Induced subgraph on `keep` (sorted unique ids); masks are intersected and
// remapped.
SubgraphView induced_subgraph(const DatasetBundle& bundle,
                              const std::vector<int>& keep);

// Embedding weights per the bundle's weight scheme ("alpha", "sgc", or
// "explicit", where edge weights are the literal entries and self-loops
// carry the self-weights).
EmbeddingWeights bundle_weights(const DatasetBundle& bundle);

}  // namespace stratgraph
