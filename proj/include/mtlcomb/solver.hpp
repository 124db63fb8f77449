#pragma once

#include "mtlcomb/model.hpp"
#include "mtlcomb/types.hpp"

#include <vector>

namespace mtlcomb {

struct FitResult
{
    CoefficientMatrix coef;
    // Full objective after each accepted iteration.
    std::vector<double> objective_trace;
    double final_L = 1.0;
    int iterations = 0;
    bool converged = false;

    double final_objective() const { return objective_trace.back(); }
};

// Row-wise group soft thresholding: row j scaled by 1 - tau / max(||v_j||, tau).
Matrix prox_l21(const Matrix& V, double tau);

struct LineSearchResult
{
    double L = 1.0;
    CoefficientMatrix candidate;
    // Accepted doublings: L = L_prev * 2^doublings.
    int doublings = 0;
};

// Maximum doublings before the line search gives up.
inline constexpr int kMaxLineSearchDoublings = 60;

// One proximal gradient step from `search_point`, growing L by doubling until
// F(candidate) <= F(S) + <grad F(S), candidate - S> + L/2 ||candidate - S||^2.
LineSearchResult line_search(const MtlProblem& problem, const Hyperparameters& hyper,
                             const CoefficientMatrix& search_point, double L_prev);

// Accelerated proximal gradient with momentum reset on objective increase.
FitResult fista_fit(const MtlProblem& problem, const Hyperparameters& hyper,
                    const SolverOptions& opts, const CoefficientMatrix& W_init);

// Un-accelerated proximal gradient. Same fixed points as fista_fit.
FitResult ista_fit(const MtlProblem& problem, const Hyperparameters& hyper,
                   const SolverOptions& opts, const CoefficientMatrix& W_init);

} // namespace mtlcomb
