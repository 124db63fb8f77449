#pragma once

#include "mtlcomb/solver.hpp"
#include "mtlcomb/types.hpp"

#include <vector>

namespace mtlcomb {

// Rows with norm above this count as selected features.
inline constexpr double kNonzeroRowThreshold = 1e-8;

// Descending geometric grid lam_max, ..., ratio * lam_max.
class LambdaSequence
{
public:
    LambdaSequence() = default;
    // values must be positive and strictly decreasing.
    LambdaSequence(std::vector<double> values, double ratio);

    const std::vector<double>& values() const noexcept { return values_; }
    double ratio() const noexcept { return ratio_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

private:
    std::vector<double> values_;
    double ratio_ = 0.01;
};

struct PathResult
{
    LambdaSequence sequence;
    std::vector<FitResult> fits;
    std::vector<int> nonzero_rows;
};

// Path defaults: 100 lambdas down to 0.01 * lam_max, 100 iterations per point.
inline constexpr double kDefaultLambdaRatio = 0.01;
inline constexpr int kDefaultLambdaCount = 100;
SolverOptions path_solver_options(bool fit_intercept = false);

// Intercepts minimizing the loss at W = 0: mean(y) for regression,
// log(n+ / n-) for classification. Throws DataError on a single-class task.
Vector null_model_intercepts(const MtlProblem& problem);

// p x t matrix of negated loss gradients at W = 0 (intercepts at their null
// optimum when fit_intercept). Without intercepts, column i is X_i^T y_i / N_i
// for both task kinds.
Matrix zero_gradient_matrix(const MtlProblem& problem, bool fit_intercept = false);

// Relative inflation applied to lam_max.
inline constexpr double kLamMaxMargin = 1e-12;

// Smallest lambda for which W = 0 is optimal: max row norm of
// zero_gradient_matrix, times (1 + kLamMaxMargin).
double lam_max(const MtlProblem& problem, bool fit_intercept = false);

LambdaSequence lambda_sequence(double lam_max_value, double ratio = kDefaultLambdaRatio,
                               int n = kDefaultLambdaCount);

int count_nonzero_rows(const Matrix& W, double threshold = kNonzeroRowThreshold);

// Warm-started fits along the sequence, starting from W = 0.
PathResult reg_path(const MtlProblem& problem, const LambdaSequence& sequence, double alpha,
                    double beta, const SolverOptions& opts);

// Zero coefficients with null-model intercepts when opts.fit_intercept.
CoefficientMatrix path_start(const MtlProblem& problem, bool fit_intercept);

} // namespace mtlcomb
