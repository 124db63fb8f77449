#include "mtlcomb/types.hpp"

#include "mtlcomb/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mtlcomb {

std::string_view to_string(TaskKind kind)
{
    return kind == TaskKind::classification ? "classification" : "regression";
}

TaskKind parse_task_kind(std::string_view text)
{
    if (text == "classification") return TaskKind::classification;
    if (text == "regression") return TaskKind::regression;
    throw DataError("unknown task kind '" + std::string(text) + "'");
}

TaskDataset::TaskDataset(std::string name, TaskKind kind, Matrix X, Vector y)
    : name_(std::move(name)), kind_(kind), X_(std::move(X)), y_(std::move(y))
{
    if (X_.rows() < 1 || X_.cols() < 1) {
        throw DataError("task '" + name_ + "': empty feature matrix");
    }
    if (y_.size() != X_.rows()) {
        throw DataError("task '" + name_ + "': outcome length " + std::to_string(y_.size()) +
                        " does not match " + std::to_string(X_.rows()) + " rows");
    }
    if (!X_.allFinite() || !y_.allFinite()) {
        throw DataError("task '" + name_ + "': non-finite entries");
    }
    if (kind_ == TaskKind::classification) {
        for (Index k = 0; k < y_.size(); ++k) {
            if (y_(k) != 1.0 && y_(k) != -1.0) {
                throw DataError("task '" + name_ + "': classification labels must be -1 or +1");
            }
        }
    }
}

TaskDataset TaskDataset::subset(const std::vector<Index>& rows) const
{
    Matrix X(static_cast<Index>(rows.size()), X_.cols());
    Vector y(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        X.row(static_cast<Index>(r)) = X_.row(rows[r]);
        y(static_cast<Index>(r)) = y_(rows[r]);
    }
    return TaskDataset(name_, kind_, std::move(X), std::move(y));
}

MtlProblem::MtlProblem(std::vector<TaskDataset> tasks) : tasks_(std::move(tasks))
{
    if (tasks_.empty()) throw DataError("problem has no tasks");
    n_features_ = tasks_.front().n_features();
    bool seen_regression = false;
    for (const auto& task : tasks_) {
        if (task.n_features() != n_features_) {
            throw DataError("task '" + task.name() + "' has " + std::to_string(task.n_features()) +
                            " features, expected " + std::to_string(n_features_));
        }
        if (task.is_classification()) {
            if (seen_regression) {
                throw DataError("classification task '" + task.name() +
                                "' listed after a regression task");
            }
            ++n_classification_;
        } else {
            seen_regression = true;
        }
    }
}

MtlProblem MtlProblem::canonical(std::vector<TaskDataset> tasks)
{
    std::stable_partition(tasks.begin(), tasks.end(),
                          [](const TaskDataset& t) { return t.is_classification(); });
    return MtlProblem(std::move(tasks));
}

CoefficientMatrix CoefficientMatrix::zeros(Index p, Index t, bool with_intercepts)
{
    CoefficientMatrix c{Matrix::Zero(p, t), std::nullopt};
    if (with_intercepts) c.intercepts = Vector::Zero(t);
    return c;
}

CoefficientMatrix CoefficientMatrix::zeros_like(const MtlProblem& problem, bool with_intercepts)
{
    return zeros(problem.n_features(), problem.n_tasks(), with_intercepts);
}

void Hyperparameters::validate() const
{
    if (!(lambda >= 0.0) || !(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(lambda) ||
        !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw UsageError("hyperparameters lambda, alpha, beta must be finite and >= 0");
    }
}

void SolverOptions::validate() const
{
    if (max_iter < 1) throw UsageError("max_iter must be >= 1");
    if (!(tol > 0.0)) throw UsageError("tol must be > 0");
    if (!(L0 > 0.0) || !std::isfinite(L0)) throw UsageError("L0 must be finite and > 0");
}

void check_dimensions(const MtlProblem& problem, const CoefficientMatrix& coef)
{
    if (coef.W.rows() != problem.n_features() || coef.W.cols() != problem.n_tasks()) {
        throw DataError("coefficient matrix is " + std::to_string(coef.W.rows()) + "x" +
                        std::to_string(coef.W.cols()) + ", problem needs " +
                        std::to_string(problem.n_features()) + "x" +
                        std::to_string(problem.n_tasks()));
    }
    if (coef.intercepts && coef.intercepts->size() != problem.n_tasks()) {
        throw DataError("intercept vector length does not match task count");
    }
}

} // namespace mtlcomb
