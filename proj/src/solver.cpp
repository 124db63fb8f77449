#include "mtlcomb/solver.hpp"

#include "mtlcomb/errors.hpp"

#include <cmath>
#include <string>

namespace mtlcomb {

Matrix prox_l21(const Matrix& V, double tau)
{
    if (tau < 0.0) throw UsageError("prox_l21 threshold must be >= 0");
    if (tau == 0.0) return V;
    Matrix out(V.rows(), V.cols());
    for (Index j = 0; j < V.rows(); ++j) {
        const double norm = V.row(j).norm();
        if (norm <= tau) {
            out.row(j).setZero();
        } else {
            out.row(j) = (1.0 - tau / norm) * V.row(j);
        }
    }
    return out;
}

namespace {

// Rounding slack in the sufficient-decrease test; only matters once steps are tiny.
constexpr double kDecreaseSlack = 1e-12;

double inner(const CoefficientMatrix& a, const CoefficientMatrix& b)
{
    double v = (a.W.array() * b.W.array()).sum();
    if (a.intercepts && b.intercepts) v += a.intercepts->dot(*b.intercepts);
    return v;
}

CoefficientMatrix difference(const CoefficientMatrix& a, const CoefficientMatrix& b)
{
    CoefficientMatrix d{a.W - b.W, std::nullopt};
    if (a.intercepts && b.intercepts) d.intercepts = *a.intercepts - *b.intercepts;
    return d;
}

double squared_norm(const CoefficientMatrix& a)
{
    double v = a.W.squaredNorm();
    if (a.intercepts) v += a.intercepts->squaredNorm();
    return v;
}

// a + c * (a - b)
CoefficientMatrix extrapolate(const CoefficientMatrix& a, const CoefficientMatrix& b, double c)
{
    CoefficientMatrix s{a.W + c * (a.W - b.W), std::nullopt};
    if (a.intercepts && b.intercepts) s.intercepts = *a.intercepts + c * (*a.intercepts - *b.intercepts);
    return s;
}

CoefficientMatrix prepare_start(const MtlProblem& problem, const SolverOptions& opts,
                                const CoefficientMatrix& W_init)
{
    check_dimensions(problem, W_init);
    if (!W_init.W.allFinite() || (W_init.intercepts && !W_init.intercepts->allFinite())) {
        throw DataError("initial coefficients contain non-finite entries");
    }
    CoefficientMatrix start = W_init;
    if (opts.fit_intercept && !start.intercepts) start.intercepts = Vector::Zero(problem.n_tasks());
    if (!opts.fit_intercept) start.intercepts.reset();
    return start;
}

FitResult run_proximal_gradient(const MtlProblem& problem, const Hyperparameters& hyper,
                                const SolverOptions& opts, const CoefficientMatrix& W_init,
                                bool accelerated)
{
    hyper.validate();
    opts.validate();

    FitResult result;
    CoefficientMatrix current = prepare_start(problem, opts, W_init);
    CoefficientMatrix previous = current;
    double objective = full_objective(problem, current, hyper);
    if (!std::isfinite(objective)) throw NumericalError("non-finite objective at the initial point");

    double L = opts.L0;
    // Momentum scalars: the extrapolation weight is (t_prev - 1) / t.
    double t_prev = 1.0;
    double t = 1.0;

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        CoefficientMatrix search = accelerated ? extrapolate(current, previous, (t_prev - 1.0) / t)
                                               : current;
        LineSearchResult step = line_search(problem, hyper, search, L);
        double next_objective = full_objective(problem, step.candidate, hyper);
        if (!std::isfinite(next_objective)) {
            throw NumericalError("non-finite objective at iteration " + std::to_string(iter));
        }
        if (accelerated && next_objective > objective) {
            // Momentum overshoot: restart from the current iterate.
            t_prev = 1.0;
            t = 1.0;
            step = line_search(problem, hyper, current, step.L);
            next_objective = full_objective(problem, step.candidate, hyper);
            if (!std::isfinite(next_objective)) {
                throw NumericalError("non-finite objective at iteration " + std::to_string(iter));
            }
        }
        L = step.L;
        result.iterations = iter;

        if (next_objective > objective) {
            // A plain proximal step that fails to decrease means we sit at
            // the floating-point floor of the sufficient-decrease test.
            result.objective_trace.push_back(objective);
            result.converged = true;
            break;
        }

        previous = std::move(current);
        current = std::move(step.candidate);
        const double change = std::abs(next_objective - objective) / std::max(1.0, std::abs(objective));
        objective = next_objective;
        result.objective_trace.push_back(objective);

        if (accelerated) {
            t_prev = t;
            t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        }
        if (change <= opts.tol) {
            result.converged = true;
            break;
        }
    }

    result.coef = std::move(current);
    result.final_L = L;
    return result;
}

} // namespace

LineSearchResult line_search(const MtlProblem& problem, const Hyperparameters& hyper,
                             const CoefficientMatrix& search_point, double L_prev)
{
    if (!(L_prev > 0.0) || !std::isfinite(L_prev)) throw UsageError("line search needs L_prev > 0");
    const auto [f_search, grad] =
        smooth_objective_and_gradient(problem, search_point, hyper.alpha, hyper.beta);
    if (!std::isfinite(f_search) || !grad.W.allFinite()) {
        throw NumericalError("non-finite objective or gradient at the search point");
    }
    const double slack = kDecreaseSlack * std::max(1.0, std::abs(f_search));

    LineSearchResult out;
    double L = L_prev;
    for (int k = 0; k <= kMaxLineSearchDoublings; ++k) {
        CoefficientMatrix candidate{prox_l21(search_point.W - grad.W / L, hyper.lambda / L),
                                    std::nullopt};
        if (search_point.intercepts) {
            candidate.intercepts = *search_point.intercepts - *grad.intercepts / L;
        }
        const CoefficientMatrix step = difference(candidate, search_point);
        const double model =
            f_search + inner(grad, step) + 0.5 * L * squared_norm(step);
        const double f_candidate = smooth_objective(problem, candidate, hyper.alpha, hyper.beta);
        if (std::isfinite(f_candidate) && f_candidate <= model + slack) {
            out.L = L;
            out.candidate = std::move(candidate);
            out.doublings = k;
            return out;
        }
        L *= 2.0;
    }
    throw NumericalError("line search failed to find a sufficient-decrease step size after " +
                         std::to_string(kMaxLineSearchDoublings) + " doublings");
}

FitResult fista_fit(const MtlProblem& problem, const Hyperparameters& hyper,
                    const SolverOptions& opts, const CoefficientMatrix& W_init)
{
    return run_proximal_gradient(problem, hyper, opts, W_init, true);
}

FitResult ista_fit(const MtlProblem& problem, const Hyperparameters& hyper,
                   const SolverOptions& opts, const CoefficientMatrix& W_init)
{
    return run_proximal_gradient(problem, hyper, opts, W_init, false);
}

} // namespace mtlcomb
