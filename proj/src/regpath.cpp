#include "mtlcomb/regpath.hpp"

#include "mtlcomb/errors.hpp"
#include "mtlcomb/model.hpp"

#include <cmath>

namespace mtlcomb {

LambdaSequence::LambdaSequence(std::vector<double> values, double ratio)
    : values_(std::move(values)), ratio_(ratio)
{
    if (values_.empty()) throw UsageError("lambda sequence is empty");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!(values_[k] > 0.0) || !std::isfinite(values_[k])) {
            throw UsageError("lambda values must be finite and positive");
        }
        if (k > 0 && !(values_[k] < values_[k - 1])) {
            throw UsageError("lambda sequence must be strictly decreasing");
        }
    }
}

SolverOptions path_solver_options(bool fit_intercept)
{
    SolverOptions opts;
    opts.max_iter = 100;
    opts.tol = 1e-6;
    opts.L0 = 1.0;
    opts.fit_intercept = fit_intercept;
    return opts;
}

Vector null_model_intercepts(const MtlProblem& problem)
{
    Vector b(problem.n_tasks());
    for (Index i = 0; i < problem.n_tasks(); ++i) {
        const auto& task = problem.task(i);
        if (task.is_classification()) {
            const double n_pos = static_cast<double>((task.y().array() > 0.0).count());
            const double n_neg = static_cast<double>(task.n_samples()) - n_pos;
            if (n_pos == 0.0 || n_neg == 0.0) {
                throw DataError("task '" + task.name() +
                                "' has a single class; an intercept model is unbounded");
            }
            b(i) = std::log(n_pos / n_neg);
        } else {
            b(i) = task.y().mean();
        }
    }
    return b;
}

Matrix zero_gradient_matrix(const MtlProblem& problem, bool fit_intercept)
{
    Matrix C(problem.n_features(), problem.n_tasks());
    const Vector b = fit_intercept ? null_model_intercepts(problem) : Vector::Zero(problem.n_tasks());
    for (Index i = 0; i < problem.n_tasks(); ++i) {
        const auto& task = problem.task(i);
        const auto& y = task.y();
        const double n = static_cast<double>(task.n_samples());
        Vector residual(y.size());
        if (task.is_classification()) {
            // 2 * y * sigmoid(-y b), which is y exactly when b = 0.
            for (Index k = 0; k < y.size(); ++k) {
                residual(k) = fit_intercept
                                  ? kClassificationLossWeight * y(k) * sigmoid(-y(k) * b(i))
                                  : y(k);
            }
        } else {
            residual = y.array() - b(i);
        }
        C.col(i).noalias() = task.X().transpose() * residual / n;
    }
    return C;
}

double lam_max(const MtlProblem& problem, bool fit_intercept)
{
    const Matrix C = zero_gradient_matrix(problem, fit_intercept);
    double best = 0.0;
    for (Index j = 0; j < C.rows(); ++j) best = std::max(best, C.row(j).norm());
    // The gradient the solver computes at W = 0 can differ from C by a few
    // ulps; the margin keeps the first proximal step exactly at zero.
    return best * (1.0 + kLamMaxMargin);
}

LambdaSequence lambda_sequence(double lam_max_value, double ratio, int n)
{
    if (!(lam_max_value > 0.0) || !std::isfinite(lam_max_value)) {
        throw DataError("lam_max must be positive to build a lambda sequence");
    }
    if (!(ratio > 0.0 && ratio < 1.0)) throw UsageError("lambda ratio must lie in (0, 1)");
    if (n < 1) throw UsageError("lambda sequence needs at least one value");
    std::vector<double> values(static_cast<std::size_t>(n));
    values[0] = lam_max_value;
    if (n > 1) {
        const double log_step = std::log(ratio) / static_cast<double>(n - 1);
        for (int k = 1; k < n - 1; ++k) {
            values[static_cast<std::size_t>(k)] = lam_max_value * std::exp(log_step * k);
        }
        values.back() = ratio * lam_max_value;
    }
    return LambdaSequence(std::move(values), ratio);
}

int count_nonzero_rows(const Matrix& W, double threshold)
{
    int count = 0;
    for (Index j = 0; j < W.rows(); ++j) {
        if (W.row(j).norm() > threshold) ++count;
    }
    return count;
}

CoefficientMatrix path_start(const MtlProblem& problem, bool fit_intercept)
{
    CoefficientMatrix start = CoefficientMatrix::zeros_like(problem);
    if (fit_intercept) start.intercepts = null_model_intercepts(problem);
    return start;
}

PathResult reg_path(const MtlProblem& problem, const LambdaSequence& sequence, double alpha,
                    double beta, const SolverOptions& opts)
{
    PathResult path;
    path.sequence = sequence;
    path.fits.reserve(sequence.size());
    path.nonzero_rows.reserve(sequence.size());
    CoefficientMatrix warm = path_start(problem, opts.fit_intercept);
    for (std::size_t k = 0; k < sequence.size(); ++k) {
        const Hyperparameters hyper{sequence[k], alpha, beta};
        try {
            FitResult fit = fista_fit(problem, hyper, opts, warm);
            warm = fit.coef;
            path.nonzero_rows.push_back(count_nonzero_rows(fit.coef.W));
            path.fits.push_back(std::move(fit));
        } catch (const Error& e) {
            throw Error(e.category(), "path aborted at lambda[" + std::to_string(k) +
                                          "] = " + std::to_string(sequence[k]) + ": " + e.what());
        }
    }
    return path;
}

} // namespace mtlcomb
