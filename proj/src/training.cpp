#include "stratgraph/training.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

namespace stratgraph {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("train config: learning_rate must be > 0");
    if (epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
    if (layers < 0) throw std::invalid_argument("train config: T must be >= 0");
    if (!(tau > 0.0)) throw std::invalid_argument("train config: tau must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("train config: beta must be > 0");
    if (weight_decay < 0.0)
        throw std::invalid_argument("train config: weight_decay must be >= 0");
}

LossResult logistic_loss(const std::vector<double>& scores, const Labels& y) {
    if (scores.size() != y.size())
        throw std::invalid_argument("logistic loss: size mismatch");
    const size_t n = scores.size();
    LossResult out;
    out.grad.assign(n, 0.0);
    if (n == 0) return out;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
        const double z = static_cast<double>(y[i]) * scores[i];
        // log(1 + exp(-z)) without overflow on either tail.
        const double loss = z >= 0.0 ? std::log1p(std::exp(-z))
                                     : -z + std::log1p(std::exp(z));
        out.value += loss * inv_n;
        const double sig_neg = z >= 0.0 ? std::exp(-z) / (1.0 + std::exp(-z))
                                        : 1.0 / (1.0 + std::exp(z));
        out.grad[i] = -static_cast<double>(y[i]) * sig_neg * inv_n;
    }
    return out;
}

TrainedModel train(const NodeFeatures& X, const Labels& y,
                   const EmbeddingWeights& W, const TrainConfig& cfg) {
    X.validate();
    cfg.validate();
    validate_labels(y, X.n);
    if (X.n != W.size())
        throw std::invalid_argument("train: features do not match weights");

    const int dim = X.dim;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> init(-1.0, 1.0);
    LinearGraphClassifier clf;
    clf.theta.resize(static_cast<size_t>(dim));
    if (cfg.fix_theta) {
        for (double& t : clf.theta) t = 1.0;
    } else {
        const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
        for (double& t : clf.theta) t = scale * init(rng);
    }
    clf.bias = 0.0;

    SmoothConfig smooth;
    smooth.tau = cfg.tau;
    smooth.layers = cfg.layers;
    smooth.tol = cfg.tol;
    smooth.beta = cfg.beta;
    smooth.frozen.assign(static_cast<size_t>(X.n), 0);
    bool any_frozen = false;
    for (int i = 0; i < X.n; ++i) {
        if (W.self_weight(i) <= 0.0) {
            smooth.frozen[static_cast<size_t>(i)] = 1;
            any_frozen = true;
        }
    }
    if (!any_frozen) smooth.frozen.clear();

    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::vector<double> m(static_cast<size_t>(dim) + 1, 0.0);
    std::vector<double> v(static_cast<size_t>(dim) + 1, 0.0);

    TrainedModel model;
    model.config = cfg;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const ForwardRecord rec = stacked_forward(clf, X, W, smooth);
        LossResult loss = logistic_loss(rec.final_scores, y);
        double objective = loss.value;
        for (double t : clf.theta) objective += cfg.weight_decay * t * t;
        if (!std::isfinite(objective))
            throw training_failure("train: non-finite loss at epoch " +
                                   std::to_string(epoch));
        model.loss_curve.push_back(objective);

        ParamGrad grad = backward(clf, W, smooth, rec, loss.grad);
        for (int k = 0; k < dim; ++k)
            grad.theta[static_cast<size_t>(k)] +=
                2.0 * cfg.weight_decay * clf.theta[static_cast<size_t>(k)];

        const double bc1 = 1.0 - std::pow(beta1, epoch);
        const double bc2 = 1.0 - std::pow(beta2, epoch);
        for (int k = 0; k <= dim; ++k) {
            if (cfg.fix_theta && k < dim) continue;
            const double g = k < dim ? grad.theta[static_cast<size_t>(k)] : grad.bias;
            m[static_cast<size_t>(k)] = beta1 * m[static_cast<size_t>(k)] + (1.0 - beta1) * g;
            v[static_cast<size_t>(k)] = beta2 * v[static_cast<size_t>(k)] + (1.0 - beta2) * g * g;
            const double m_hat = m[static_cast<size_t>(k)] / bc1;
            const double v_hat = v[static_cast<size_t>(k)] / bc2;
            const double step = cfg.learning_rate * m_hat / (std::sqrt(v_hat) + eps);
            if (k < dim)
                clf.theta[static_cast<size_t>(k)] -= step;
            else
                clf.bias -= step;
        }
    }
    model.classifier = std::move(clf);
    return model;
}

LineSearchResult line_search_threshold(const NodeFeatures& X,
                                       const EmbeddingWeights& W,
                                       const Labels& y,
                                       const std::vector<double>& grid,
                                       const ResponseConfig& cfg,
                                       bool strategic) {
    X.validate();
    validate_labels(y, X.n);
    if (X.dim != 1)
        throw std::invalid_argument("line search: requires 1-d features");
    if (grid.empty())
        throw std::invalid_argument("line search: empty threshold grid");

    LineSearchResult out;
    out.thresholds = grid;
    out.accuracies.reserve(grid.size());

    // Non-strategic evaluation reuses the one embedding pass.
    std::vector<double> phi;
    if (!strategic) {
        const NodeFeatures e = embed(X, W);
        phi.assign(e.data.begin(), e.data.end());
    }

    bool first = true;
    for (double threshold : grid) {
        LinearGraphClassifier clf;
        clf.theta = {1.0};
        clf.bias = -threshold;
        int correct = 0;
        if (strategic) {
            const DynamicsTrace trace = simulate_dynamics(clf, X, W, cfg);
            const Labels& pred = trace.final_predictions();
            for (int i = 0; i < X.n; ++i)
                if (pred[static_cast<size_t>(i)] == y[static_cast<size_t>(i)]) ++correct;
        } else {
            for (int i = 0; i < X.n; ++i) {
                const int pred = phi[static_cast<size_t>(i)] - threshold >= 0.0 ? 1 : -1;
                if (pred == y[static_cast<size_t>(i)]) ++correct;
            }
        }
        const double acc = X.n > 0 ? static_cast<double>(correct) / X.n : 0.0;
        out.accuracies.push_back(acc);
        if (first || acc > out.best_accuracy) {
            out.best_accuracy = acc;
            out.best_threshold = threshold;
            first = false;
        }
    }
    return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid: step must be > 0");
    if (hi < lo) throw std::invalid_argument("grid: hi must be >= lo");
    const int count = static_cast<int>(std::llround((hi - lo) / step)) + 1;
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) grid.push_back(lo + step * k);
    return grid;
}

std::string model_to_json(const TrainedModel& model) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["theta"] = model.classifier.theta;
    j["bias"] = model.classifier.bias;
    j["loss_curve"] = model.loss_curve;
    j["config"] = {
        {"learning_rate", model.config.learning_rate},
        {"weight_decay", model.config.weight_decay},
        {"epochs", model.config.epochs},
        {"layers", model.config.layers},
        {"tau", model.config.tau},
        {"beta", model.config.beta},
        {"tol", model.config.tol},
        {"seed", model.config.seed},
        {"fix_theta", model.config.fix_theta},
    };
    return j.dump(2);
}

TrainedModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("model json: ") + e.what());
    }
    try {
        TrainedModel model;
        if (j.at("format_version").get<int>() != 1)
            throw format_error("model json: unsupported format version");
        model.classifier.theta = j.at("theta").get<std::vector<double>>();
        model.classifier.bias = j.at("bias").get<double>();
        if (j.contains("loss_curve"))
            model.loss_curve = j["loss_curve"].get<std::vector<double>>();
        const nlohmann::json& c = j.at("config");
        model.config.learning_rate = c.at("learning_rate").get<double>();
        model.config.weight_decay = c.at("weight_decay").get<double>();
        model.config.epochs = c.at("epochs").get<int>();
        model.config.layers = c.at("layers").get<int>();
        model.config.tau = c.at("tau").get<double>();
        model.config.beta = c.at("beta").get<double>();
        model.config.tol = c.at("tol").get<double>();
        model.config.seed = c.at("seed").get<uint64_t>();
        model.config.fix_theta = c.value("fix_theta", false);
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("model json: ") + e.what());
    }
}

}  // namespace stratgraph
