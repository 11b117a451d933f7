#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "stratgraph/graph_ops.hpp"

using namespace stratgraph;

namespace {

DirectedGraph symmetric_path3() {
    DirectedGraph g;
    g.n = 3;
    g.edges = {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0}};
    return g;
}

}  // namespace

TEST_CASE("sgc weights: single self-looped node is the identity") {
    DirectedGraph g;
    g.n = 1;
    const EmbeddingWeights w = build_sgc_weights(g, 1, true);
    CHECK(w.entry(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sgc weights: 3-node path, self loops, K=1") {
    const EmbeddingWeights w = build_sgc_weights(symmetric_path3(), 1, true);
    CHECK(w.entry(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.entry(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(w.entry(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(w.entry(2, 2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sgc weights: K=2 matches the dense oracle on random graphs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> weight(0.1, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        DirectedGraph g;
        g.n = n;
        for (int s = 0; s < n; ++s)
            for (int d = 0; d < n; ++d) {
                if (s == d) continue;
                if (rng() % 2) g.edges.push_back({s, d, weight(rng)});
            }

        for (const bool self_loops : {true, false}) {
            const EmbeddingWeights w = build_sgc_weights(g, 2, self_loops);

            oracles::Matrix a = oracles::dense_zeros(n);
            for (const Edge& e : g.edges)
                a[static_cast<size_t>(e.src)][static_cast<size_t>(e.dst)] += e.weight;
            if (self_loops)
                for (int i = 0; i < n; ++i)
                    a[static_cast<size_t>(i)][static_cast<size_t>(i)] += 1.0;
            std::vector<double> deg(static_cast<size_t>(n), 0.0);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    deg[static_cast<size_t>(i)] += a[static_cast<size_t>(j)][static_cast<size_t>(i)];
            for (double& d : deg)
                if (d == 0.0) d = 1.0;
            const oracles::Matrix a2 = oracles::dense_multiply(a, a);

            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const double expected =
                        a2[static_cast<size_t>(j)][static_cast<size_t>(i)] /
                        std::sqrt(deg[static_cast<size_t>(j)] * deg[static_cast<size_t>(i)]);
                    CHECK(w.entry(j, i) == doctest::Approx(expected).epsilon(1e-12));
                }
        }
    }
}

TEST_CASE("sgc weights: rejects bad arguments") {
    CHECK_THROWS_AS(build_sgc_weights(symmetric_path3(), 0, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_sgc_weights(symmetric_path3(), -2, true),
                    std::invalid_argument);
    DirectedGraph empty;
    CHECK_THROWS_AS(build_sgc_weights(empty, 1, true), std::invalid_argument);
}

TEST_CASE("sgc weights: self loops give positive self-weights") {
    std::mt19937_64 rng(11);
    DirectedGraph g;
    g.n = 8;
    for (int s = 0; s < g.n; ++s)
        for (int d = 0; d < g.n; ++d)
            if (s != d && rng() % 3 == 0) g.edges.push_back({s, d, 1.0});
    const EmbeddingWeights w = build_sgc_weights(g, 1, true);
    CHECK(w.all_self_weights_positive());
}

TEST_CASE("alpha weights: alpha = 0 ignores the graph") {
    const EmbeddingWeights w = build_alpha_weights(symmetric_path3(), 0.0);
    for (int i = 0; i < 3; ++i) CHECK(w.self_weight(i) == 1.0);
    CHECK(w.entry(0, 1) == 0.0);
}

TEST_CASE("alpha weights: alpha = 1 with one in-neighbor") {
    DirectedGraph g;
    g.n = 2;
    g.edges = {{0, 1, 1.0}, {1, 0, 1.0}};
    const EmbeddingWeights w = build_alpha_weights(g, 1.0);
    CHECK(w.self_weight(1) == doctest::Approx(0.0));
    CHECK(w.entry(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("alpha weights: 8 in-neighbors at alpha 0.7") {
    // Star closed both ways: node 0 has 8 in-neighbors, leaves have one.
    DirectedGraph g;
    g.n = 9;
    for (int j = 1; j <= 8; ++j) {
        g.edges.push_back({j, 0, 1.0});
        g.edges.push_back({0, j, 1.0});
    }
    const EmbeddingWeights w = build_alpha_weights(g, 0.7);
    CHECK(w.self_weight(0) == doctest::Approx(0.3).epsilon(1e-12));
    for (int j = 1; j <= 8; ++j)
        CHECK(w.entry(j, 0) == doctest::Approx(0.0875).epsilon(1e-12));
    double col = w.self_weight(0);
    for (int j = 1; j <= 8; ++j) col += w.entry(j, 0);
    CHECK(col == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("alpha weights: columns sum to one on random graphs") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 20);
        DirectedGraph g;
        g.n = n;
        for (int d = 0; d < n; ++d) {
            const int in = 1 + static_cast<int>(rng() % 4);
            for (int k = 0; k < in; ++k) {
                const int s = static_cast<int>(rng() % static_cast<uint64_t>(n));
                if (s == d) continue;
                bool dup = false;
                for (const Edge& e : g.edges)
                    if (e.src == s && e.dst == d) dup = true;
                if (!dup) g.edges.push_back({s, d, 1.0});
            }
        }
        // ensure every node has an in-neighbor
        const std::vector<int> deg = g.in_degree_counts();
        for (int d = 0; d < n; ++d)
            if (deg[static_cast<size_t>(d)] == 0)
                g.edges.push_back({(d + 1) % n, d, 1.0});

        const double alpha = 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
        const EmbeddingWeights w = build_alpha_weights(g, alpha);
        for (int i = 0; i < n; ++i) {
            double col = 0.0;
            for (const auto& [j, wv] : w.in_list(i)) {
                (void)j;
                col += wv;
            }
            CHECK(col == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("alpha weights: rejects bad arguments") {
    CHECK_THROWS_AS(build_alpha_weights(symmetric_path3(), -0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_alpha_weights(symmetric_path3(), 1.0001),
                    std::invalid_argument);
    DirectedGraph isolated;
    isolated.n = 2;
    isolated.edges = {{0, 1, 1.0}};  // node 0 has no in-neighbor
    CHECK_THROWS_AS(build_alpha_weights(isolated, 0.5), std::invalid_argument);
    CHECK_NOTHROW(build_alpha_weights(isolated, 0.0));
    CHECK_NOTHROW(build_alpha_weights(isolated, 0.5, true));
}

TEST_CASE("embed: identity weights return the features") {
    NodeFeatures x = NodeFeatures::zeros(3, 2);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 2; ++k) x.at(i, k) = i * 2.0 + k;
    const NodeFeatures phi = embed(x, EmbeddingWeights::identity(3));
    CHECK(phi.data == x.data);
}

TEST_CASE("embed: hitchhike-style weights give phi_j = -4/3") {
    // j listens to itself (2/3) and to k (1/3); x_j = -0.5, x_k = -3.
    const EmbeddingWeights w(2, {{0, 0, 2.0 / 3.0}, {1, 0, 1.0 / 3.0}, {1, 1, 1.0}});
    NodeFeatures x = NodeFeatures::zeros(2, 1);
    x.at(0, 0) = -0.5;
    x.at(1, 0) = -3.0;
    const NodeFeatures phi = embed(x, w);
    CHECK(phi.at(0, 0) == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("embed: random instance matches the dense oracle and is linear") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const int dim = 1 + static_cast<int>(rng() % 3);
        std::vector<EmbeddingWeights::Entry> entries;
        oracles::Matrix m = oracles::dense_zeros(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (rng() % 2) {
                    const double wv = std::abs(noise(rng));
                    entries.push_back({j, i, wv});
                    m[static_cast<size_t>(j)][static_cast<size_t>(i)] = wv;
                }
        const EmbeddingWeights w(n, entries);

        NodeFeatures x1 = NodeFeatures::zeros(n, dim);
        NodeFeatures x2 = NodeFeatures::zeros(n, dim);
        for (double& v : x1.data) v = noise(rng);
        for (double& v : x2.data) v = noise(rng);

        const NodeFeatures phi = embed(x1, w);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < dim; ++k) {
                double expected = 0.0;
                for (int j = 0; j < n; ++j)
                    expected += m[static_cast<size_t>(j)][static_cast<size_t>(i)] * x1.at(j, k);
                CHECK(phi.at(i, k) == doctest::Approx(expected).epsilon(1e-12));
            }

        // linearity: embed(a x1 + x2) = a embed(x1) + embed(x2)
        const double a = noise(rng);
        NodeFeatures mix = NodeFeatures::zeros(n, dim);
        for (size_t v = 0; v < mix.data.size(); ++v)
            mix.data[v] = a * x1.data[v] + x2.data[v];
        const NodeFeatures lhs = embed(mix, w);
        const NodeFeatures phi2 = embed(x2, w);
        for (size_t v = 0; v < lhs.data.size(); ++v)
            CHECK(lhs.data[v] ==
                  doctest::Approx(a * phi.data[v] + phi2.data[v]).epsilon(1e-10));
    }
}

TEST_CASE("embed: dimension mismatch is rejected") {
    NodeFeatures x = NodeFeatures::zeros(2, 1);
    CHECK_THROWS_AS(embed(x, EmbeddingWeights::identity(3)),
                    std::invalid_argument);
}

TEST_CASE("score_and_predict: sign(0) = +1 and boundary examples") {
    LinearGraphClassifier clf{{1.0}, 0.0};
    NodeFeatures phi = NodeFeatures::zeros(3, 1);
    phi.at(0, 0) = 0.0;
    phi.at(1, 0) = 0.06;
    phi.at(2, 0) = -1.0;
    const ScoredPrediction sp = score_and_predict(clf, phi);
    CHECK(sp.labels[0] == 1);
    CHECK(sp.labels[1] == 1);
    CHECK(sp.labels[2] == -1);
    CHECK(sp.scores[1] == doctest::Approx(0.06));
}

TEST_CASE("score_and_predict: label is +1 exactly when score >= 0") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> noise(0.0, 2.0);
    LinearGraphClassifier clf{{0.7, -1.3}, 0.4};
    NodeFeatures phi = NodeFeatures::zeros(64, 2);
    for (double& v : phi.data) v = noise(rng);
    phi.at(5, 0) = (-clf.bias - clf.theta[1] * phi.at(5, 1)) / clf.theta[0];  // exact 0
    const ScoredPrediction sp = score_and_predict(clf, phi);
    for (int i = 0; i < phi.n; ++i)
        CHECK(sp.labels[static_cast<size_t>(i)] ==
              (sp.scores[static_cast<size_t>(i)] >= 0.0 ? 1 : -1));
}

TEST_CASE("direct_edges_by_degree: star orients away from the center") {
    const DirectedGraph g =
        direct_edges_by_degree({{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK(g.edges.size() == 4);
    for (const Edge& e : g.edges) CHECK(e.src == 0);
}

TEST_CASE("direct_edges_by_degree: degree tie goes low id -> high id") {
    const DirectedGraph g = direct_edges_by_degree({{7, 3}}, 8);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].src == 3);
    CHECK(g.edges[0].dst == 7);
}

TEST_CASE("direct_edges_by_degree: self-edge is rejected") {
    CHECK_THROWS_AS(direct_edges_by_degree({{2, 2}}), std::invalid_argument);
}

TEST_CASE("direct_edges_by_degree: orientation matches a recount oracle") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 6 + static_cast<int>(rng() % 10);
        std::vector<std::pair<int, int>> undirected;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 3 == 0) undirected.push_back({u, v});
        const DirectedGraph g = direct_edges_by_degree(undirected, n);

        std::vector<int> deg(static_cast<size_t>(n), 0);
        for (const auto& [u, v] : undirected) {
            deg[static_cast<size_t>(u)]++;
            deg[static_cast<size_t>(v)]++;
        }
        CHECK(g.edges.size() == undirected.size());
        for (const Edge& e : g.edges) {
            const int ds = deg[static_cast<size_t>(e.src)];
            const int dd = deg[static_cast<size_t>(e.dst)];
            if (ds != dd)
                CHECK(ds > dd);
            else
                CHECK(e.src < e.dst);
        }
    }
}
