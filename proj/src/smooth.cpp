#include "stratgraph/smooth.hpp"

#include <cmath>

namespace stratgraph {

namespace {

constexpr double kBudget = 2.0;

void check_inputs(const LinearGraphClassifier& clf, const NodeFeatures& X,
                  const EmbeddingWeights& W, const SmoothConfig& cfg) {
    X.validate();
    cfg.validate();
    if (X.n != W.size())
        throw std::invalid_argument("smooth: features do not match weights");
    if (clf.dim() != X.dim)
        throw std::invalid_argument("smooth: classifier dimension mismatch");
    if (!cfg.frozen.empty() && cfg.frozen.size() != static_cast<size_t>(X.n))
        throw std::invalid_argument("smooth: frozen mask size mismatch");
    if (clf.theta_norm_sq() <= 0.0)
        throw degenerate_classifier_error("smooth: zero parameter vector");
    for (int i = 0; i < X.n; ++i) {
        const bool frozen = !cfg.frozen.empty() && cfg.frozen[static_cast<size_t>(i)];
        if (!frozen && W.self_weight(i) <= 0.0)
            throw node_immobile_error(
                "smooth: node with zero self-weight must be frozen");
    }
}

// One layer forward; fills the cache and returns the next features.
NodeFeatures layer_forward(const LinearGraphClassifier& clf,
                           const NodeFeatures& X_t, const NodeFeatures& X_0,
                           const EmbeddingWeights& W, const SmoothConfig& cfg,
                           ForwardRecord::LayerCache* cache) {
    const int n = X_t.n;
    const int dim = X_t.dim;
    const double norm_sq = clf.theta_norm_sq();

    const NodeFeatures phi = embed(X_t, W);
    const ScoredPrediction sp = score_and_predict(clf, phi);

    NodeFeatures out = X_t;
    if (cache) {
        cache->score = sp.scores;
        cache->proj_coeff.assign(static_cast<size_t>(n), 0.0);
        cache->cost.assign(static_cast<size_t>(n), 0.0);
        cache->gate.assign(static_cast<size_t>(n), 0.0);
        cache->active.assign(static_cast<size_t>(n), 0);
    }
    for (int i = 0; i < n; ++i) {
        const bool frozen = !cfg.frozen.empty() && cfg.frozen[static_cast<size_t>(i)];
        const double s = sp.scores[static_cast<size_t>(i)];
        if (frozen || !(s < 0.0)) continue;

        const double wii = W.self_weight(i);
        const double p = (s - cfg.tol) / (norm_sq * wii);
        // Cost of the projected point, referenced to the original features.
        double cost_sq = 0.0;
        const double* xt = X_t.row(i);
        const double* x0 = X_0.row(i);
        for (int k = 0; k < dim; ++k) {
            const double u = xt[k] - p * clf.theta[static_cast<size_t>(k)] - x0[k];
            cost_sq += u * u;
        }
        const double cost = cfg.beta * std::sqrt(cost_sq);
        const double gate = sigmoid((kBudget - cost) / cfg.tau);

        double* row = out.row(i);
        for (int k = 0; k < dim; ++k)
            row[k] -= gate * p * clf.theta[static_cast<size_t>(k)];
        if (cache) {
            cache->proj_coeff[static_cast<size_t>(i)] = p;
            cache->cost[static_cast<size_t>(i)] = cost;
            cache->gate[static_cast<size_t>(i)] = gate;
            cache->active[static_cast<size_t>(i)] = 1;
        }
    }
    return out;
}

// x_grad[j] += sum_i w(j,i) * per_score[i] * theta  (reverse of embed+score).
void scatter_score_grad(const EmbeddingWeights& W,
                        const LinearGraphClassifier& clf,
                        const std::vector<double>& per_score,
                        NodeFeatures* x_grad) {
    const int dim = x_grad->dim;
    for (int i = 0; i < x_grad->n; ++i) {
        const double g = per_score[static_cast<size_t>(i)];
        if (g == 0.0) continue;
        for (const auto& [j, w] : W.in_list(i)) {
            double* row = x_grad->row(j);
            const double wg = w * g;
            for (int k = 0; k < dim; ++k)
                row[k] += wg * clf.theta[static_cast<size_t>(k)];
        }
    }
}

}  // namespace

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void SmoothConfig::validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("smooth config: tau must be > 0");
    if (layers < 0) throw std::invalid_argument("smooth config: T must be >= 0");
    if (!(tol >= 0.0)) throw std::invalid_argument("smooth config: tol must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("smooth config: beta must be > 0");
}

NodeFeatures soft_response_layer(const LinearGraphClassifier& clf,
                                 const NodeFeatures& X_t,
                                 const NodeFeatures& X_0,
                                 const EmbeddingWeights& W,
                                 const SmoothConfig& cfg) {
    check_inputs(clf, X_t, W, cfg);
    if (X_0.n != X_t.n || X_0.dim != X_t.dim)
        throw std::invalid_argument("smooth: reference features shape mismatch");
    return layer_forward(clf, X_t, X_0, W, cfg, nullptr);
}

ForwardRecord stacked_forward(const LinearGraphClassifier& clf,
                              const NodeFeatures& X,
                              const EmbeddingWeights& W,
                              const SmoothConfig& cfg) {
    check_inputs(clf, X, W, cfg);

    ForwardRecord rec;
    rec.theta_echo = clf.theta;
    rec.bias_echo = clf.bias;
    rec.x.push_back(X);
    rec.kappa.emplace_back(static_cast<size_t>(X.n), 0.0);
    for (int t = 0; t < cfg.layers; ++t) {
        ForwardRecord::LayerCache cache;
        NodeFeatures next = layer_forward(clf, rec.x.back(), X, W, cfg, &cache);
        std::vector<double> kap(static_cast<size_t>(X.n), 0.0);
        for (int i = 0; i < X.n; ++i) {
            double d_sq = 0.0;
            const double* a = next.row(i);
            const double* b = X.row(i);
            for (int k = 0; k < X.dim; ++k) {
                const double d = a[k] - b[k];
                d_sq += d * d;
            }
            kap[static_cast<size_t>(i)] = cfg.beta * std::sqrt(d_sq);
        }
        rec.layers.push_back(std::move(cache));
        rec.kappa.push_back(std::move(kap));
        rec.x.push_back(std::move(next));
    }
    rec.final_phi = embed(rec.x.back(), W);
    rec.final_scores = score_and_predict(clf, rec.final_phi).scores;
    return rec;
}

ParamGrad backward(const LinearGraphClassifier& clf,
                   const EmbeddingWeights& W, const SmoothConfig& cfg,
                   const ForwardRecord& record,
                   const std::vector<double>& score_grad) {
    if (record.theta_echo != clf.theta || record.bias_echo != clf.bias)
        throw std::invalid_argument("backward: record was built with a different classifier");
    if (record.x.empty() || record.layers.size() + 1 != record.x.size())
        throw std::invalid_argument("backward: malformed record");
    const NodeFeatures& X0 = record.x.front();
    if (score_grad.size() != static_cast<size_t>(X0.n))
        throw std::invalid_argument("backward: score gradient size mismatch");

    const int n = X0.n;
    const int dim = X0.dim;
    const double norm_sq = clf.theta_norm_sq();

    ParamGrad grad;
    grad.theta.assign(static_cast<size_t>(dim), 0.0);

    // Top of the graph: scores = theta . embed(x_T) + b.
    NodeFeatures x_bar = NodeFeatures::zeros(n, dim);
    for (int i = 0; i < n; ++i) {
        const double g = score_grad[static_cast<size_t>(i)];
        grad.bias += g;
        const double* p = record.final_phi.row(i);
        for (int k = 0; k < dim; ++k)
            grad.theta[static_cast<size_t>(k)] += g * p[k];
    }
    scatter_score_grad(W, clf, score_grad, &x_bar);

    for (int t = static_cast<int>(record.layers.size()) - 1; t >= 0; --t) {
        const ForwardRecord::LayerCache& cache =
            record.layers[static_cast<size_t>(t)];
        const NodeFeatures& xt = record.x[static_cast<size_t>(t)];

        std::vector<double> score_bar(static_cast<size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            if (!cache.active[static_cast<size_t>(i)]) continue;

            const double p = cache.proj_coeff[static_cast<size_t>(i)];
            const double g = cache.gate[static_cast<size_t>(i)];
            const double c = cache.cost[static_cast<size_t>(i)];
            const double wii = W.self_weight(i);
            double* v = x_bar.row(i);  // gradient w.r.t. x_{t+1}[i]

            // x_{t+1} = x_t - g p theta
            double q_bar = 0.0;  // gradient w.r.t. q = g p
            for (int k = 0; k < dim; ++k) {
                q_bar -= v[k] * clf.theta[static_cast<size_t>(k)];
                grad.theta[static_cast<size_t>(k)] -= g * p * v[k];
            }
            const double g_bar = q_bar * p;
            double p_bar = q_bar * g;

            // g = sigma((2 - c) / tau)
            const double c_bar = -g_bar * g * (1.0 - g) / cfg.tau;

            // c = beta * ||u||, u = x_t - p theta - x0
            if (c > 0.0) {
                const double scale = c_bar * cfg.beta * cfg.beta / c;
                const double* xtr = xt.row(i);
                const double* x0r = X0.row(i);
                double u_dot_theta = 0.0;
                for (int k = 0; k < dim; ++k) {
                    const double u =
                        xtr[k] - p * clf.theta[static_cast<size_t>(k)] - x0r[k];
                    const double u_bar = scale * u;
                    v[k] += u_bar;  // u depends on x_t directly
                    u_dot_theta += u * clf.theta[static_cast<size_t>(k)];
                    grad.theta[static_cast<size_t>(k)] -= p * u_bar;
                }
                p_bar -= scale * u_dot_theta;
            }

            // p = (score - tol) / (||theta||^2 w_ii)
            const double s_bar = p_bar / (norm_sq * wii);
            score_bar[static_cast<size_t>(i)] = s_bar;
            grad.bias += s_bar;
            const double theta_coef = -2.0 * p_bar * p / norm_sq;
            for (int k = 0; k < dim; ++k)
                grad.theta[static_cast<size_t>(k)] +=
                    theta_coef * clf.theta[static_cast<size_t>(k)];
        }

        // score_i depends on theta through phi_i and on x_t through embed.
        for (int i = 0; i < n; ++i) {
            const double s_bar = score_bar[static_cast<size_t>(i)];
            if (s_bar == 0.0) continue;
            for (const auto& [j, w] : W.in_list(i)) {
                const double* xj = xt.row(j);
                for (int k = 0; k < dim; ++k)
                    grad.theta[static_cast<size_t>(k)] += s_bar * w * xj[k];
            }
        }
        scatter_score_grad(W, clf, score_bar, &x_bar);
    }
    return grad;
}

}  // namespace stratgraph
