#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtlcomb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class TaskKind { classification, regression };

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view text);

// One task's design matrix and outcomes. Classification outcomes are +-1.
class TaskDataset
{
public:
    TaskDataset(std::string name, TaskKind kind, Matrix X, Vector y);

    const std::string& name() const noexcept { return name_; }
    TaskKind kind() const noexcept { return kind_; }
    const Matrix& X() const noexcept { return X_; }
    const Vector& y() const noexcept { return y_; }
    Index n_samples() const noexcept { return X_.rows(); }
    Index n_features() const noexcept { return X_.cols(); }
    bool is_classification() const noexcept { return kind_ == TaskKind::classification; }

    // Rows listed in `rows`, in that order.
    TaskDataset subset(const std::vector<Index>& rows) const;

private:
    std::string name_;
    TaskKind kind_;
    Matrix X_;
    Vector y_;
};

// Ordered task collection: classification tasks occupy [0, c), regression
// tasks [c, t). All tasks share the feature count p.
class MtlProblem
{
public:
    // Throws DataError unless tasks are already classification-first.
    explicit MtlProblem(std::vector<TaskDataset> tasks);

    // Stable-partitions tasks into classification-first order.
    static MtlProblem canonical(std::vector<TaskDataset> tasks);

    const std::vector<TaskDataset>& tasks() const noexcept { return tasks_; }
    const TaskDataset& task(Index i) const { return tasks_[static_cast<std::size_t>(i)]; }
    Index n_tasks() const noexcept { return static_cast<Index>(tasks_.size()); }
    Index n_classification() const noexcept { return n_classification_; }
    Index n_features() const noexcept { return n_features_; }

private:
    std::vector<TaskDataset> tasks_;
    Index n_classification_ = 0;
    Index n_features_ = 0;
};

// W is p x t; row j holds feature j's coefficients across tasks.
struct CoefficientMatrix
{
    Matrix W;
    std::optional<Vector> intercepts;

    static CoefficientMatrix zeros(Index p, Index t, bool with_intercepts = false);
    static CoefficientMatrix zeros_like(const MtlProblem& problem, bool with_intercepts = false);

    Index n_features() const noexcept { return W.rows(); }
    Index n_tasks() const noexcept { return W.cols(); }
    bool has_intercepts() const noexcept { return intercepts.has_value(); }
    double intercept(Index task) const { return intercepts ? (*intercepts)(task) : 0.0; }
};

struct Hyperparameters
{
    double lambda = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const;
};

struct SolverOptions
{
    int max_iter = 1000;
    double tol = 1e-8;
    double L0 = 1.0;
    bool fit_intercept = false;

    void validate() const;
};

// Throws DataError if coef is not p x t for this problem.
void check_dimensions(const MtlProblem& problem, const CoefficientMatrix& coef);

} // namespace mtlcomb
