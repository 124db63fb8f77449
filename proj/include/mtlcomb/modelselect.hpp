#pragma once

#include "mtlcomb/regpath.hpp"
#include "mtlcomb/types.hpp"

#include <cstdint>
#include <vector>

namespace mtlcomb {

// k disjoint index sets partitioning {0..N-1}, sizes within one of each other.
std::vector<std::vector<Index>> kfold_split(Index N, int k, std::uint64_t seed);

// As kfold_split, but each fold receives a near-equal share of each label.
std::vector<std::vector<Index>> stratified_kfold_split(const Vector& labels, int k, std::uint64_t seed);

// Per-task folds. The seed is mixed with the task name so a task's folds do
// not depend on which other tasks are present.
std::vector<std::vector<Index>> task_folds(const TaskDataset& task, int k, std::uint64_t seed);

struct CvConfig
{
    int folds = 10;
    std::uint64_t seed = 1;
    int n_lambda = kDefaultLambdaCount;
    double ratio = kDefaultLambdaRatio;
    // Pick the largest lambda within one standard error of the minimum.
    bool one_standard_error = false;
};

struct CvResult
{
    LambdaSequence sequence;
    std::vector<double> mean_cv_error;
    std::vector<double> se_cv_error;
    double best_lambda = 0.0;
    std::size_t best_index = 0;
    int folds = 0;
    std::uint64_t seed = 0;
};

// Validation error of a model: mean over tasks of the weighted task loss.
double validation_error(const MtlProblem& validation, const CoefficientMatrix& coef);

// k-fold CV over a lambda grid computed once from the full problem.
CvResult cross_validate(const MtlProblem& problem, double alpha, double beta, const CvConfig& config,
                        const SolverOptions& opts);

// Warm-started path over sequence[0..index], returning the fit at sequence[index].
FitResult fit_path_prefix(const MtlProblem& problem, const LambdaSequence& sequence,
                          std::size_t index, double alpha, double beta, const SolverOptions& opts);

// Mann-Whitney AUC, ties count 1/2. Labels are +-1.
double auc(const Vector& scores, const Vector& labels);

// 1 - SS_res / SS_tot.
double explained_variance(const Vector& pred, const Vector& y);

// Squared Pearson correlation of scores with +-1 labels; 0 for constant scores.
double pseudo_explained_variance(const Vector& scores, const Vector& labels);

} // namespace mtlcomb
