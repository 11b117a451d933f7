#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "stratgraph/constructions.hpp"
#include "stratgraph/datasets.hpp"
#include "stratgraph/experiments.hpp"
#include "stratgraph/graph_ops.hpp"
#include "stratgraph/training.hpp"

using namespace stratgraph;

TEST_CASE("logistic_loss: zero score costs log 2 per node") {
    const LossResult r = logistic_loss({0.0, 0.0}, {1, -1});
    CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("logistic_loss: saturated scores neither overflow nor push") {
    const LossResult r = logistic_loss({50.0, -50.0}, {1, -1});
    CHECK(r.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(std::abs(r.grad[0]) < 1e-20);
    CHECK(std::abs(r.grad[1]) < 1e-20);
    CHECK(std::isfinite(logistic_loss({-700.0}, {1}).value));
}

TEST_CASE("logistic_loss: gradient matches finite differences") {
    std::mt19937_64 rng(73);
    std::normal_distribution<double> noise(0.0, 3.0);
    std::vector<double> scores(12);
    Labels y(12);
    for (size_t i = 0; i < scores.size(); ++i) {
        scores[i] = noise(rng);
        y[i] = rng() % 2 ? 1 : -1;
    }
    const LossResult r = logistic_loss(scores, y);
    for (size_t i = 0; i < scores.size(); ++i) {
        const double fd = oracles::central_diff(
            [&](double v) {
                std::vector<double> s = scores;
                s[i] = v;
                return logistic_loss(s, y).value;
            },
            scores[i], 1e-6);
        CHECK(r.grad[i] == doctest::Approx(fd).scale(1.0).epsilon(1e-6));
    }
}

TEST_CASE("train: separable embeddings reach train accuracy 1 with T = 0") {
    NodeFeatures x = NodeFeatures::zeros(20, 1);
    Labels y(20);
    for (int i = 0; i < 20; ++i) {
        const int label = i < 10 ? 1 : -1;
        y[static_cast<size_t>(i)] = label;
        x.at(i, 0) = label * (1.0 + 0.1 * i);
    }
    const EmbeddingWeights w = EmbeddingWeights::identity(20);
    TrainConfig cfg;
    cfg.layers = 0;
    cfg.seed = 3;
    const TrainedModel model = train(x, y, w, cfg);
    const ScoredPrediction sp =
        score_and_predict(model.classifier, embed(x, w));
    int correct = 0;
    for (int i = 0; i < 20; ++i)
        if (sp.labels[static_cast<size_t>(i)] == y[static_cast<size_t>(i)]) ++correct;
    CHECK(correct == 20);
    CHECK(model.loss_curve.size() == 20);
    for (double v : model.loss_curve) CHECK(std::isfinite(v));
}

TEST_CASE("train: same seed gives a bit-identical model") {
    const DatasetBundle b = generate_synthetic(60, 0.5, 11);
    const SubgraphView train_view = induced_subgraph(b, b.train_mask);
    const EmbeddingWeights w =
        build_alpha_weights(train_view.bundle.graph, 0.5);
    TrainConfig cfg;
    cfg.layers = 2;
    cfg.seed = 99;
    const TrainedModel a = train(train_view.bundle.features,
                                 train_view.bundle.labels, w, cfg);
    const TrainedModel c = train(train_view.bundle.features,
                                 train_view.bundle.labels, w, cfg);
    CHECK(a.classifier.theta == c.classifier.theta);
    CHECK(a.classifier.bias == c.classifier.bias);
    CHECK(a.loss_curve == c.loss_curve);
}

TEST_CASE("train: T = 0 reduces to logistic regression on embeddings") {
    const DatasetBundle b = generate_synthetic(40, 0.4, 5);
    const SubgraphView view = induced_subgraph(b, b.train_mask);
    const EmbeddingWeights w = build_alpha_weights(view.bundle.graph, 0.4);
    TrainConfig cfg;
    cfg.layers = 0;
    cfg.seed = 17;
    const TrainedModel model =
        train(view.bundle.features, view.bundle.labels, w, cfg);

    // Direct implementation: Adam over theta/bias on fixed embeddings.
    const NodeFeatures phi = embed(view.bundle.features, w);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> init(-1.0, 1.0);
    double theta = init(rng), bias = 0.0;
    double m_t = 0.0, v_t = 0.0, m_b = 0.0, v_b = 0.0;
    std::vector<double> curve;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::vector<double> scores(static_cast<size_t>(phi.n));
        for (int i = 0; i < phi.n; ++i)
            scores[static_cast<size_t>(i)] = theta * phi.at(i, 0) + bias;
        const LossResult loss = logistic_loss(scores, view.bundle.labels);
        curve.push_back(loss.value + cfg.weight_decay * theta * theta);
        double g_t = 2.0 * cfg.weight_decay * theta, g_b = 0.0;
        for (int i = 0; i < phi.n; ++i) {
            g_t += loss.grad[static_cast<size_t>(i)] * phi.at(i, 0);
            g_b += loss.grad[static_cast<size_t>(i)];
        }
        const double bc1 = 1.0 - std::pow(0.9, epoch);
        const double bc2 = 1.0 - std::pow(0.999, epoch);
        m_t = 0.9 * m_t + 0.1 * g_t;
        v_t = 0.999 * v_t + 0.001 * g_t * g_t;
        theta -= cfg.learning_rate * (m_t / bc1) / (std::sqrt(v_t / bc2) + 1e-8);
        m_b = 0.9 * m_b + 0.1 * g_b;
        v_b = 0.999 * v_b + 0.001 * g_b * g_b;
        bias -= cfg.learning_rate * (m_b / bc1) / (std::sqrt(v_b / bc2) + 1e-8);
    }
    CHECK(model.classifier.theta[0] == doctest::Approx(theta).epsilon(1e-8));
    CHECK(model.classifier.bias == doctest::Approx(bias).epsilon(1e-8));
    for (size_t e = 0; e < curve.size(); ++e)
        CHECK(model.loss_curve[e] == doctest::Approx(curve[e]).epsilon(1e-8));
}

TEST_CASE("train: robust beats naive after dynamics on synthetic data") {
    double robust_acc = 0.0, naive_acc = 0.0;
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        const DatasetBundle b = generate_synthetic(300, 0.7, seed);
        const SubgraphView train_view = induced_subgraph(b, b.train_mask);
        const SubgraphView test_view = induced_subgraph(b, b.test_mask);
        const EmbeddingWeights w_train =
            build_alpha_weights(train_view.bundle.graph, 0.7);
        const EmbeddingWeights w_test =
            build_alpha_weights(test_view.bundle.graph, 0.7);

        TrainConfig naive_cfg;
        naive_cfg.layers = 0;
        naive_cfg.seed = seed;
        TrainConfig robust_cfg = naive_cfg;
        robust_cfg.layers = 3;

        const TrainedModel naive = train(train_view.bundle.features,
                                         train_view.bundle.labels, w_train,
                                         naive_cfg);
        const TrainedModel robust = train(train_view.bundle.features,
                                          train_view.bundle.labels, w_train,
                                          robust_cfg);
        const ResponseConfig response{1.0, 2.0, 1e-6, 0};
        naive_acc += evaluate(naive.classifier, test_view.bundle.features,
                              test_view.bundle.labels, w_test, response, true)
                         .accuracy;
        robust_acc += evaluate(robust.classifier, test_view.bundle.features,
                               test_view.bundle.labels, w_test, response, true)
                          .accuracy;
    }
    CHECK(robust_acc > naive_acc);
}

TEST_CASE("train: divergence and bad configs raise") {
    TrainConfig cfg;
    cfg.epochs = 0;
    NodeFeatures x = NodeFeatures::zeros(4, 1);
    CHECK_THROWS_AS(train(x, Labels{1, 1, -1, -1}, EmbeddingWeights::identity(4), cfg),
                    std::invalid_argument);
}

TEST_CASE("line search: non-strategic synthetic optimum sits near zero") {
    double sum_b = 0.0;
    for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const DatasetBundle b = generate_synthetic(600, 0.7, seed);
        const SubgraphView view = induced_subgraph(b, b.train_mask);
        const EmbeddingWeights w = build_alpha_weights(view.bundle.graph, 0.7);
        const LineSearchResult r = line_search_threshold(
            view.bundle.features, w, view.bundle.labels,
            make_grid(-3.0, 3.0, 0.01), ResponseConfig{1.0, 2.0, 1e-6, 0}, false);
        sum_b += r.best_threshold;
    }
    CHECK(std::abs(sum_b / 5.0) <= 0.15);
}

TEST_CASE("line search: strategic scan of the large-gap triple tops out at 2/3") {
    const auto [large_gap, no_gap] = gap_examples();
    const std::vector<double> grid = make_grid(-3.0, 3.0, 0.01);
    const LineSearchResult strategic = line_search_threshold(
        large_gap.features, large_gap.weights, large_gap.labels, grid,
        large_gap.response, true);
    CHECK(strategic.best_accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(strategic.best_threshold > 1.0);
    (void)no_gap;
}

TEST_CASE("line search: degenerate one-point grid returns that point") {
    NodeFeatures x = NodeFeatures::zeros(2, 1);
    x.at(0, 0) = 1.0;
    x.at(1, 0) = -1.0;
    const LineSearchResult r = line_search_threshold(
        x, EmbeddingWeights::identity(2), Labels{1, -1}, {0.25},
        ResponseConfig{1.0, 2.0, 0.0, 0}, false);
    CHECK(r.best_threshold == 0.25);
    CHECK(r.accuracies.size() == 1);
}

TEST_CASE("line search: multi-dimensional features are rejected") {
    NodeFeatures x = NodeFeatures::zeros(2, 2);
    CHECK_THROWS_AS(
        line_search_threshold(x, EmbeddingWeights::identity(2), Labels{1, -1},
                              {0.0}, ResponseConfig{}, false),
        std::invalid_argument);
}

TEST_CASE("model json: round trip") {
    TrainedModel model;
    model.classifier.theta = {0.25, -1.5};
    model.classifier.bias = 0.75;
    model.loss_curve = {0.7, 0.5};
    model.config.layers = 3;
    model.config.seed = 42;
    const TrainedModel back = model_from_json(model_to_json(model));
    CHECK(back.classifier.theta == model.classifier.theta);
    CHECK(back.classifier.bias == model.classifier.bias);
    CHECK(back.config.layers == 3);
    CHECK(back.config.seed == 42);
    CHECK_THROWS_AS(model_from_json("{not json"), format_error);
}
