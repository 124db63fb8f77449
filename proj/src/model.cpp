#include "mtlcomb/model.hpp"

#include "mtlcomb/errors.hpp"

#include <cmath>

namespace mtlcomb {

namespace {

// log(1 + exp(-m)) without overflow.
double log1p_exp_neg(double m)
{
    return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

// W G computed as row-centering; G is never materialized.
Matrix center_rows(const Matrix& W)
{
    if (W.cols() == 0) return W;
    return W.colwise() - W.rowwise().mean();
}

double penalty_terms(const Matrix& W, double alpha, double beta)
{
    double value = 0.0;
    if (alpha != 0.0) value += alpha * center_rows(W).squaredNorm();
    if (beta != 0.0) value += beta * W.squaredNorm();
    return value;
}

// Per-sample derivative of the weighted task loss with respect to the score.
Vector score_derivative(const TaskDataset& task, const Vector& s)
{
    const auto& y = task.y();
    const double n = static_cast<double>(task.n_samples());
    Vector d(s.size());
    if (task.is_classification()) {
        for (Index k = 0; k < s.size(); ++k) {
            d(k) = kClassificationLossWeight / n * (-y(k) * sigmoid(-y(k) * s(k)));
        }
    } else {
        // 0.5 * (1/n) * ||y - s||^2  ->  (1/n) (s - y)
        d = (2.0 * kRegressionLossWeight / n) * (s - y);
    }
    return d;
}

double loss_from_scores(const TaskDataset& task, const Vector& s)
{
    const auto& y = task.y();
    const double n = static_cast<double>(task.n_samples());
    if (task.is_classification()) {
        double sum = 0.0;
        for (Index k = 0; k < s.size(); ++k) sum += log1p_exp_neg(y(k) * s(k));
        return kClassificationLossWeight * sum / n;
    }
    return kRegressionLossWeight * (y - s).squaredNorm() / n;
}

} // namespace

double sigmoid(double s)
{
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

Matrix make_centering(Index t)
{
    if (t < 1) throw UsageError("centering matrix needs t >= 1");
    const double inv = 1.0 / static_cast<double>(t);
    Matrix G = Matrix::Constant(t, t, -inv);
    G.diagonal().array() += 1.0;
    return G;
}

double l21_norm(const Matrix& W)
{
    double sum = 0.0;
    for (Index j = 0; j < W.rows(); ++j) sum += W.row(j).norm();
    return sum;
}

Vector linear_scores(const Matrix& X, const Eigen::Ref<const Vector>& w, double intercept)
{
    if (X.cols() != w.size()) {
        throw DataError("feature count " + std::to_string(X.cols()) +
                        " does not match coefficient length " + std::to_string(w.size()));
    }
    Vector s = X * w;
    if (intercept != 0.0) s.array() += intercept;
    return s;
}

double weighted_task_loss(const TaskDataset& task, const Eigen::Ref<const Vector>& w, double intercept)
{
    return loss_from_scores(task, linear_scores(task.X(), w, intercept));
}

double smooth_objective(const MtlProblem& problem, const CoefficientMatrix& coef, double alpha,
                        double beta)
{
    check_dimensions(problem, coef);
    double value = 0.0;
    for (Index i = 0; i < problem.n_tasks(); ++i) {
        value += weighted_task_loss(problem.task(i), coef.W.col(i), coef.intercept(i));
    }
    return value + penalty_terms(coef.W, alpha, beta);
}

std::pair<double, CoefficientMatrix> smooth_objective_and_gradient(const MtlProblem& problem,
                                                                   const CoefficientMatrix& coef,
                                                                   double alpha, double beta)
{
    check_dimensions(problem, coef);
    CoefficientMatrix grad = CoefficientMatrix::zeros_like(problem, coef.has_intercepts());
    double value = 0.0;
    for (Index i = 0; i < problem.n_tasks(); ++i) {
        const auto& task = problem.task(i);
        const Vector s = linear_scores(task.X(), coef.W.col(i), coef.intercept(i));
        value += loss_from_scores(task, s);
        const Vector d = score_derivative(task, s);
        grad.W.col(i).noalias() = task.X().transpose() * d;
        if (grad.intercepts) (*grad.intercepts)(i) = d.sum();
    }
    value += penalty_terms(coef.W, alpha, beta);
    if (alpha != 0.0) grad.W += 2.0 * alpha * center_rows(coef.W);
    if (beta != 0.0) grad.W += 2.0 * beta * coef.W;
    return {value, std::move(grad)};
}

CoefficientMatrix smooth_gradient(const MtlProblem& problem, const CoefficientMatrix& coef,
                                  double alpha, double beta)
{
    return smooth_objective_and_gradient(problem, coef, alpha, beta).second;
}

double full_objective(const MtlProblem& problem, const CoefficientMatrix& coef,
                      const Hyperparameters& hyper)
{
    return smooth_objective(problem, coef, hyper.alpha, hyper.beta) + hyper.lambda * l21_norm(coef.W);
}

Vector predict(const Matrix& X, const Eigen::Ref<const Vector>& w, double intercept, TaskKind kind)
{
    Vector s = linear_scores(X, w, intercept);
    if (kind == TaskKind::classification) {
        for (Index k = 0; k < s.size(); ++k) s(k) = sigmoid(s(k));
    }
    return s;
}

Vector predict_labels(const Matrix& X, const Eigen::Ref<const Vector>& w, double intercept)
{
    Vector s = linear_scores(X, w, intercept);
    for (Index k = 0; k < s.size(); ++k) s(k) = s(k) >= 0.0 ? 1.0 : -1.0;
    return s;
}

Matrix TaskStandardization::apply_features(const Matrix& X) const
{
    if (X.cols() != feature_mean.size()) {
        throw DataError("standardization record expects " + std::to_string(feature_mean.size()) +
                        " features, got " + std::to_string(X.cols()));
    }
    Matrix Z(X.rows(), X.cols());
    for (Index j = 0; j < X.cols(); ++j) {
        if (constant_feature[static_cast<std::size_t>(j)]) {
            Z.col(j).setZero();
        } else {
            Z.col(j) = (X.col(j).array() - feature_mean(j)) / feature_sd(j);
        }
    }
    return Z;
}

Vector TaskStandardization::apply_outcome(const Vector& y) const
{
    if (!outcome_scaled) return y;
    return (y.array() - outcome_mean) / outcome_sd;
}

Vector TaskStandardization::invert_outcome(const Vector& y_std) const
{
    if (!outcome_scaled) return y_std;
    return (y_std.array() * outcome_sd + outcome_mean).matrix();
}

namespace {

std::pair<double, double> mean_and_sd(const Eigen::Ref<const Vector>& v)
{
    const double mean = v.mean();
    const double ss = (v.array() - mean).square().sum();
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

bool is_constant(double mean, double sd)
{
    return sd <= 1e-14 * std::max(1.0, std::abs(mean));
}

} // namespace

std::pair<MtlProblem, StandardizationRecord> standardize(const MtlProblem& problem,
                                                         bool standardize_regression_outcomes)
{
    StandardizationRecord record;
    std::vector<TaskDataset> tasks;
    tasks.reserve(problem.tasks().size());
    for (const auto& task : problem.tasks()) {
        if (task.n_samples() < 2) {
            throw DataError("task '" + task.name() + "': standardization needs at least 2 samples");
        }
        TaskStandardization ts;
        const Index p = task.n_features();
        ts.feature_mean.resize(p);
        ts.feature_sd.resize(p);
        ts.constant_feature.assign(static_cast<std::size_t>(p), false);
        for (Index j = 0; j < p; ++j) {
            auto [mean, sd] = mean_and_sd(task.X().col(j));
            ts.feature_mean(j) = mean;
            if (is_constant(mean, sd)) {
                ts.constant_feature[static_cast<std::size_t>(j)] = true;
                sd = 1.0;
            }
            ts.feature_sd(j) = sd;
        }
        if (standardize_regression_outcomes && !task.is_classification()) {
            auto [mean, sd] = mean_and_sd(task.y());
            ts.outcome_scaled = true;
            ts.outcome_mean = mean;
            ts.outcome_sd = is_constant(mean, sd) ? 1.0 : sd;
        }
        tasks.emplace_back(task.name(), task.kind(), ts.apply_features(task.X()),
                           ts.apply_outcome(task.y()));
        record.tasks.push_back(std::move(ts));
    }
    return {MtlProblem(std::move(tasks)), std::move(record)};
}

} // namespace mtlcomb
