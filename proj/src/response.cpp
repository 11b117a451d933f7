#include "stratgraph/response.hpp"

#include <cmath>
#include <cstring>

#include <json.hpp>

namespace stratgraph {

namespace {

// Exact-budget moves are legitimate; give fp rounding a hair of slack.
constexpr double kBudgetSlack = 1e-9;

double dot(const std::vector<double>& a, const double* b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += a[static_cast<size_t>(k)] * b[k];
    return s;
}

void check_inputs(const LinearGraphClassifier& clf, const NodeFeatures& X,
                  const EmbeddingWeights& W) {
    X.validate();
    if (X.n != W.size())
        throw std::invalid_argument("response: features do not match weights");
    if (clf.dim() != X.dim)
        throw std::invalid_argument("response: classifier dimension mismatch");
}

double score_of(const LinearGraphClassifier& clf, const NodeFeatures& X,
                const EmbeddingWeights& W, int i) {
    double s = clf.bias;
    for (const auto& [j, w] : W.in_list(i))
        s += w * dot(clf.theta, X.row(j), X.dim);
    return s;
}

std::vector<double> project_row(const LinearGraphClassifier& clf,
                                const double* xi, int dim, double score,
                                double wii, double tol) {
    const double norm_sq = clf.theta_norm_sq();
    if (norm_sq <= 0.0)
        throw degenerate_classifier_error("projection: zero parameter vector");
    if (wii <= 0.0)
        throw node_immobile_error("projection: node has zero self-weight");
    const double coef = (score - tol) / (norm_sq * wii);
    std::vector<double> out(xi, xi + dim);
    for (int k = 0; k < dim; ++k)
        out[static_cast<size_t>(k)] -= coef * clf.theta[static_cast<size_t>(k)];
    return out;
}

// Cholesky factorization of a symmetric matrix; false when not PD.
bool cholesky(std::vector<double>& m, int dim) {
    for (int j = 0; j < dim; ++j) {
        double d = m[static_cast<size_t>(j) * dim + j];
        for (int k = 0; k < j; ++k) {
            const double v = m[static_cast<size_t>(j) * dim + k];
            d -= v * v;
        }
        if (d <= 0.0) return false;
        const double dj = std::sqrt(d);
        m[static_cast<size_t>(j) * dim + j] = dj;
        for (int i = j + 1; i < dim; ++i) {
            double v = m[static_cast<size_t>(i) * dim + j];
            for (int k = 0; k < j; ++k)
                v -= m[static_cast<size_t>(i) * dim + k] *
                     m[static_cast<size_t>(j) * dim + k];
            m[static_cast<size_t>(i) * dim + j] = v / dj;
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const std::vector<double>& chol, int dim,
                                   const std::vector<double>& rhs) {
    std::vector<double> y(rhs);
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < i; ++k)
            y[static_cast<size_t>(i)] -=
                chol[static_cast<size_t>(i) * dim + k] * y[static_cast<size_t>(k)];
        y[static_cast<size_t>(i)] /= chol[static_cast<size_t>(i) * dim + i];
    }
    for (int i = dim - 1; i >= 0; --i) {
        for (int k = i + 1; k < dim; ++k)
            y[static_cast<size_t>(i)] -=
                chol[static_cast<size_t>(k) * dim + i] * y[static_cast<size_t>(k)];
        y[static_cast<size_t>(i)] /= chol[static_cast<size_t>(i) * dim + i];
    }
    return y;
}

}  // namespace

void ResponseConfig::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("response config: beta must be > 0");
    if (budget != 2.0)
        throw std::invalid_argument("response config: budget is fixed at 2");
    if (!(tol >= 0.0)) throw std::invalid_argument("response config: tol must be >= 0");
    if (max_rounds < 0)
        throw std::invalid_argument("response config: max_rounds must be >= 0");
}

const Labels& DynamicsTrace::predictions_at(int t) const {
    if (t < 0) throw std::invalid_argument("trace: negative round index");
    const size_t idx = std::min(static_cast<size_t>(t),
                                predictions_by_round.size() - 1);
    return predictions_by_round[idx];
}

std::vector<double> project_to_boundary(const LinearGraphClassifier& clf,
                                        const NodeFeatures& X,
                                        const EmbeddingWeights& W, int i,
                                        double tol) {
    check_inputs(clf, X, W);
    const double s = score_of(clf, X, W, i);
    return project_row(clf, X.row(i), X.dim, s, W.self_weight(i), tol);
}

std::vector<double> project_positive_only(const LinearGraphClassifier& clf,
                                          const NodeFeatures& X,
                                          const EmbeddingWeights& W, int i,
                                          double tol) {
    check_inputs(clf, X, W);
    const double norm_sq = clf.theta_norm_sq();
    if (norm_sq <= 0.0)
        throw degenerate_classifier_error("projection: zero parameter vector");
    if (W.self_weight(i) <= 0.0)
        throw node_immobile_error("projection: node has zero self-weight");
    const double s = score_of(clf, X, W, i);
    if (s >= 0.0) return std::vector<double>(X.row(i), X.row(i) + X.dim);
    return project_row(clf, X.row(i), X.dim, s, W.self_weight(i), tol);
}

std::vector<double> project_generalized(const LinearGraphClassifier& clf,
                                        const NodeFeatures& X,
                                        const EmbeddingWeights& W, int i,
                                        const std::vector<double>& A) {
    check_inputs(clf, X, W);
    const int dim = X.dim;
    if (A.size() != static_cast<size_t>(dim) * static_cast<size_t>(dim))
        throw std::invalid_argument("generalized projection: A must be dim x dim");
    if (clf.theta_norm_sq() <= 0.0)
        throw degenerate_classifier_error("projection: zero parameter vector");
    const double wii = W.self_weight(i);
    if (wii <= 0.0)
        throw node_immobile_error("projection: node has zero self-weight");

    // B = (A^T + A); solve B u = theta via Cholesky (fails iff not PD).
    std::vector<double> b_mat(A.size());
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            b_mat[static_cast<size_t>(r) * dim + c] =
                A[static_cast<size_t>(r) * dim + c] +
                A[static_cast<size_t>(c) * dim + r];
    if (!cholesky(b_mat, dim))
        throw std::invalid_argument("generalized projection: A is not positive-definite");
    const std::vector<double> u = cholesky_solve(b_mat, dim, clf.theta);

    const double s = score_of(clf, X, W, i);
    const double denom = dot(clf.theta, u.data(), dim) * wii;
    const double coef = s / denom;
    std::vector<double> out(X.row(i), X.row(i) + dim);
    for (int k = 0; k < dim; ++k)
        out[static_cast<size_t>(k)] -= coef * u[static_cast<size_t>(k)];
    return out;
}

namespace {

RoundResult round_update(const LinearGraphClassifier& clf,
                         const NodeFeatures& X, const EmbeddingWeights& W,
                         const ResponseConfig& cfg, std::vector<double> kappa,
                         const std::vector<uint8_t>* skip) {
    check_inputs(clf, X, W);
    cfg.validate();
    if (kappa.size() != static_cast<size_t>(X.n))
        throw std::invalid_argument("response: kappa size mismatch");
    const double norm_sq = clf.theta_norm_sq();
    if (norm_sq <= 0.0)
        throw degenerate_classifier_error("response: zero parameter vector");

    const NodeFeatures phi = embed(X, W);
    const ScoredPrediction sp = score_and_predict(clf, phi);
    const double norm = std::sqrt(norm_sq);

    RoundResult result{X, std::vector<uint8_t>(static_cast<size_t>(X.n), 0),
                       std::move(kappa)};
    for (int i = 0; i < X.n; ++i) {
        const double wii = W.self_weight(i);
        if (wii <= 0.0) continue;
        if (skip && (*skip)[static_cast<size_t>(i)]) continue;
        const double s = sp.scores[static_cast<size_t>(i)];
        if (!(s < 0.0)) continue;
        const double coef = (s - cfg.tol) / (norm_sq * wii);
        const double cost = cfg.beta * std::abs(coef) * norm;
        if (cost + result.kappa[static_cast<size_t>(i)] >
            cfg.budget + kBudgetSlack)
            continue;
        double* xi = result.features.row(i);
        for (int k = 0; k < X.dim; ++k)
            xi[k] -= coef * clf.theta[static_cast<size_t>(k)];
        result.moved[static_cast<size_t>(i)] = 1;
        result.kappa[static_cast<size_t>(i)] += cost;
    }
    return result;
}

}  // namespace

RoundResult best_response_round(const LinearGraphClassifier& clf,
                                const NodeFeatures& X,
                                const EmbeddingWeights& W,
                                const ResponseConfig& cfg,
                                std::vector<double> kappa) {
    return round_update(clf, X, W, cfg, std::move(kappa), nullptr);
}

DynamicsTrace simulate_dynamics(const LinearGraphClassifier& clf,
                                const NodeFeatures& X,
                                const EmbeddingWeights& W,
                                const ResponseConfig& cfg) {
    check_inputs(clf, X, W);
    cfg.validate();

    DynamicsTrace trace;
    trace.moved_round.assign(static_cast<size_t>(X.n), std::nullopt);
    trace.cost.assign(static_cast<size_t>(X.n), 0.0);
    trace.features_by_round.push_back(X);
    trace.predictions_by_round.push_back(
        score_and_predict(clf, embed(X, W)).labels);

    const int cap = cfg.max_rounds > 0 ? cfg.max_rounds : X.n + 1;
    std::vector<double> kappa(static_cast<size_t>(X.n), 0.0);
    // A node that moved landed at score tol and monotonicity keeps it there;
    // skipping it afterwards stops fp noise from re-triggering a second move.
    std::vector<uint8_t> already_moved(static_cast<size_t>(X.n), 0);
    for (int round = 1; round <= cap; ++round) {
        RoundResult r = round_update(clf, trace.features_by_round.back(), W,
                                     cfg, std::move(kappa), &already_moved);
        kappa = std::move(r.kappa);
        int moves = 0;
        for (int i = 0; i < X.n; ++i) {
            if (!r.moved[static_cast<size_t>(i)]) continue;
            ++moves;
            trace.moved_round[static_cast<size_t>(i)] = round;
            already_moved[static_cast<size_t>(i)] = 1;
        }
        if (moves == 0) {
            trace.cost = kappa;
            return trace;
        }
        trace.rounds = round;
        trace.moves_per_round.push_back(moves);
        trace.predictions_by_round.push_back(
            score_and_predict(clf, embed(r.features, W)).labels);
        trace.features_by_round.push_back(std::move(r.features));
    }
    throw invariant_violation("simulate_dynamics: exceeded the round cap");
}

std::vector<int> hitchhikers(const DynamicsTrace& trace) {
    std::vector<int> out;
    const Labels& first = trace.predictions_by_round.front();
    const Labels& last = trace.predictions_by_round.back();
    for (size_t i = 0; i < first.size(); ++i) {
        if (first[i] == -1 && last[i] == 1 && !trace.moved_round[i].has_value())
            out.push_back(static_cast<int>(i));
    }
    return out;
}

std::string trace_to_json(const DynamicsTrace& trace) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["rounds"] = trace.rounds;
    j["n"] = trace.moved_round.size();
    nlohmann::json moved = nlohmann::json::array();
    for (const auto& m : trace.moved_round) {
        if (m.has_value())
            moved.push_back(*m);
        else
            moved.push_back(nullptr);
    }
    j["moved_round"] = std::move(moved);
    j["cost"] = trace.cost;
    j["moves_per_round"] = trace.moves_per_round;
    j["predictions_by_round"] = trace.predictions_by_round;
    return j.dump(2);
}

}  // namespace stratgraph
