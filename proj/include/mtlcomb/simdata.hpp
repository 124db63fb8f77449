#pragma once

#include "mtlcomb/modelselect.hpp"
#include "mtlcomb/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mtlcomb {

// Synthetic mixed-task generator. Defaults: 10 classification + 10 regression
// tasks, p = 200, N = 100 per task, 90% zero rows, additive noise 0.5 N(0,1).
struct SimulationSpec
{
    int t_classification = 10;
    int t_regression = 10;
    int p = 200;
    int n_per_task = 100;
    double sparsity = 0.9;
    double noise_scale = 0.5;
    std::uint64_t seed = 1;

    void validate() const;
    int support_size() const;
};

struct SimulationOutput
{
    MtlProblem train;
    MtlProblem test;
    Matrix true_W;
    // Sorted row indices of the nonzero rows of true_W.
    std::vector<Index> true_support;
};

SimulationOutput simulate(const SimulationSpec& spec);

enum class BinarizeThreshold { median, zero };

// Regression outcomes become +-1 (value > threshold -> +1); every task
// becomes classification.
MtlProblem binarize_problem(const MtlProblem& problem,
                            BinarizeThreshold threshold = BinarizeThreshold::median);

// Fraction of true_support among the |true_support| rows of W_hat with the
// largest Euclidean norm (ties broken by lower row index).
double recovery_accuracy(const Matrix& W_hat, const std::vector<Index>& true_support);

enum class BenchmarkMethod { mtlcomb, mtlbin, singletask };

std::string to_string(BenchmarkMethod method);
BenchmarkMethod parse_benchmark_method(const std::string& text);

struct BenchmarkConfig
{
    SimulationSpec spec;
    std::vector<BenchmarkMethod> methods{BenchmarkMethod::mtlcomb, BenchmarkMethod::mtlbin,
                                         BenchmarkMethod::singletask};
    // n_per_task = round(ratio * p) for each entry.
    std::vector<double> ratios{0.1, 0.4, 0.8};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int folds = 5;
    int n_lambda = kDefaultLambdaCount;
    double lambda_ratio = kDefaultLambdaRatio;
    double alpha = 0.0;
    double beta = 0.0;
};

// Per (method, problem instance) scores.
struct BenchmarkCell
{
    double recovery = 0.0;
    double ev_regression = 0.0;
    double pseudo_ev_classification = 0.0;
};

struct BenchmarkRow
{
    BenchmarkMethod method;
    double ratio = 0.0;
    int seed_count = 0;
    double mean_recovery = 0.0;
    double mean_ev_regression = 0.0;
    double mean_pseudo_ev_classification = 0.0;
};

// Trains one method on sim.train with CV-selected lambda and scores it on sim.test.
BenchmarkCell evaluate_method(BenchmarkMethod method, const SimulationOutput& sim,
                              const BenchmarkConfig& config);

// Rows ordered by ratio, then method, each averaged over seeds.
std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& config);

// Squared Pearson correlation; 0 when either side is constant.
double squared_correlation(const Vector& a, const Vector& b);

} // namespace mtlcomb
