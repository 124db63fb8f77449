#pragma once

#include "mtlcomb/types.hpp"

#include <utility>
#include <vector>

namespace mtlcomb {

// Loss multipliers that give the logit and least-squares losses the same
// gradient at W = 0, and hence the same lambda_max.
inline constexpr double kClassificationLossWeight = 2.0;
inline constexpr double kRegressionLossWeight = 0.5;

// t x t centering matrix I - ones/t.
Matrix make_centering(Index t);

// Sum over rows of the row Euclidean norms.
double l21_norm(const Matrix& W);

// Weighted data-fit term of a single task at coefficients (w, b):
// 2 * mean logit loss for classification, 0.5 * mean squared error for regression.
double weighted_task_loss(const TaskDataset& task, const Eigen::Ref<const Vector>& w, double intercept);

// F(W) = 2 Z(W) + 0.5 R(W) + alpha ||W G||_F^2 + beta ||W||_F^2.
double smooth_objective(const MtlProblem& problem, const CoefficientMatrix& coef, double alpha,
                        double beta);

// Gradient of smooth_objective. The result has the same shape as `coef`,
// including an intercept gradient when coef carries intercepts (intercepts
// are never penalized).
CoefficientMatrix smooth_gradient(const MtlProblem& problem, const CoefficientMatrix& coef,
                                  double alpha, double beta);

// Value and gradient in one pass over the data.
std::pair<double, CoefficientMatrix> smooth_objective_and_gradient(const MtlProblem& problem,
                                                                   const CoefficientMatrix& coef,
                                                                   double alpha, double beta);

// F(W) + lambda ||W||_{2,1}.
double full_objective(const MtlProblem& problem, const CoefficientMatrix& coef,
                      const Hyperparameters& hyper);

// Linear scores X w + b.
Vector linear_scores(const Matrix& X, const Eigen::Ref<const Vector>& w, double intercept);

// Regression: scores. Classification: P(y = +1) = sigmoid(score).
Vector predict(const Matrix& X, const Eigen::Ref<const Vector>& w, double intercept, TaskKind kind);

// Hard labels sign(score), with sign(0) = +1.
Vector predict_labels(const Matrix& X, const Eigen::Ref<const Vector>& w, double intercept);

double sigmoid(double s);

// Per-task z-scoring parameters. Constant columns are zeroed and flagged.
struct TaskStandardization
{
    Vector feature_mean;
    Vector feature_sd;
    std::vector<bool> constant_feature;
    bool outcome_scaled = false;
    double outcome_mean = 0.0;
    double outcome_sd = 1.0;

    Matrix apply_features(const Matrix& X) const;
    Vector apply_outcome(const Vector& y) const;
    // Maps a prediction on the standardized outcome scale back to raw units.
    Vector invert_outcome(const Vector& y_std) const;
};

struct StandardizationRecord
{
    std::vector<TaskStandardization> tasks;
};

std::pair<MtlProblem, StandardizationRecord> standardize(const MtlProblem& problem,
                                                         bool standardize_regression_outcomes);

} // namespace mtlcomb
