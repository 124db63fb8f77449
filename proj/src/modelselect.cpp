#include "mtlcomb/modelselect.hpp"

#include "mtlcomb/errors.hpp"
#include "mtlcomb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mtlcomb {

namespace {

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void check_fold_count(Index N, int k)
{
    if (k < 2) throw UsageError("k-fold split needs k >= 2");
    if (k > N) {
        throw DataError("cannot split " + std::to_string(N) + " samples into " + std::to_string(k) +
                        " folds");
    }
}

std::vector<std::vector<Index>> deal_round_robin(const std::vector<Index>& order, int k)
{
    std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < order.size(); ++i) folds[i % static_cast<std::size_t>(k)].push_back(order[i]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

} // namespace

std::vector<std::vector<Index>> kfold_split(Index N, int k, std::uint64_t seed)
{
    check_fold_count(N, k);
    std::vector<Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return deal_round_robin(order, k);
}

std::vector<std::vector<Index>> stratified_kfold_split(const Vector& labels, int k, std::uint64_t seed)
{
    check_fold_count(labels.size(), k);
    std::vector<Index> pos, neg;
    for (Index i = 0; i < labels.size(); ++i) (labels(i) > 0.0 ? pos : neg).push_back(i);
    std::mt19937_64 rng(seed);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    pos.insert(pos.end(), neg.begin(), neg.end());
    return deal_round_robin(pos, k);
}

std::vector<std::vector<Index>> task_folds(const TaskDataset& task, int k, std::uint64_t seed)
{
    const std::uint64_t task_seed = seed ^ fnv1a(task.name());
    if (task.is_classification()) return stratified_kfold_split(task.y(), k, task_seed);
    return kfold_split(task.n_samples(), k, task_seed);
}

double validation_error(const MtlProblem& validation, const CoefficientMatrix& coef)
{
    check_dimensions(validation, coef);
    double sum = 0.0;
    for (Index i = 0; i < validation.n_tasks(); ++i) {
        sum += weighted_task_loss(validation.task(i), coef.W.col(i), coef.intercept(i));
    }
    return sum / static_cast<double>(validation.n_tasks());
}

CvResult cross_validate(const MtlProblem& problem, double alpha, double beta, const CvConfig& config,
                        const SolverOptions& opts)
{
    if (config.folds < 2) throw UsageError("cross-validation needs at least 2 folds");
    const int k = config.folds;

    const double top = lam_max(problem, opts.fit_intercept);
    CvResult result;
    result.sequence = lambda_sequence(top, config.ratio, config.n_lambda);
    result.folds = k;
    result.seed = config.seed;

    std::vector<std::vector<std::vector<Index>>> folds_per_task;
    for (const auto& task : problem.tasks()) folds_per_task.push_back(task_folds(task, k, config.seed));

    const std::size_t n_lambda = result.sequence.size();
    // errors[f][l]
    std::vector<std::vector<double>> errors(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
        std::vector<TaskDataset> train_tasks, valid_tasks;
        for (Index i = 0; i < problem.n_tasks(); ++i) {
            const auto& task = problem.task(i);
            const auto& folds = folds_per_task[static_cast<std::size_t>(i)];
            std::vector<Index> train_rows;
            for (int g = 0; g < k; ++g) {
                if (g == f) continue;
                const auto& rows = folds[static_cast<std::size_t>(g)];
                train_rows.insert(train_rows.end(), rows.begin(), rows.end());
            }
            std::sort(train_rows.begin(), train_rows.end());
            TaskDataset train = task.subset(train_rows);
            if (train.is_classification()) {
                const auto n_pos = (train.y().array() > 0.0).count();
                if (n_pos == 0 || n_pos == train.n_samples()) {
                    throw DataError("fold " + std::to_string(f) + " leaves classification task '" +
                                    task.name() + "' with a single class");
                }
            }
            train_tasks.push_back(std::move(train));
            valid_tasks.push_back(task.subset(folds[static_cast<std::size_t>(f)]));
        }
        const MtlProblem train_problem(std::move(train_tasks));
        const MtlProblem valid_problem(std::move(valid_tasks));
        const PathResult path = reg_path(train_problem, result.sequence, alpha, beta, opts);
        auto& fold_errors = errors[static_cast<std::size_t>(f)];
        fold_errors.reserve(n_lambda);
        for (const auto& fit : path.fits) fold_errors.push_back(validation_error(valid_problem, fit.coef));
    }

    result.mean_cv_error.assign(n_lambda, 0.0);
    result.se_cv_error.assign(n_lambda, 0.0);
    for (std::size_t l = 0; l < n_lambda; ++l) {
        double mean = 0.0;
        for (int f = 0; f < k; ++f) mean += errors[static_cast<std::size_t>(f)][l];
        mean /= k;
        double ss = 0.0;
        for (int f = 0; f < k; ++f) {
            const double d = errors[static_cast<std::size_t>(f)][l] - mean;
            ss += d * d;
        }
        result.mean_cv_error[l] = mean;
        result.se_cv_error[l] = std::sqrt(ss / (k - 1)) / std::sqrt(static_cast<double>(k));
    }

    // Strict < keeps the first (largest) lambda among ties.
    std::size_t best = 0;
    for (std::size_t l = 1; l < n_lambda; ++l) {
        if (result.mean_cv_error[l] < result.mean_cv_error[best]) best = l;
    }
    if (config.one_standard_error) {
        const double limit = result.mean_cv_error[best] + result.se_cv_error[best];
        for (std::size_t l = 0; l <= best; ++l) {
            if (result.mean_cv_error[l] <= limit) {
                best = l;
                break;
            }
        }
    }
    result.best_index = best;
    result.best_lambda = result.sequence[best];
    return result;
}

FitResult fit_path_prefix(const MtlProblem& problem, const LambdaSequence& sequence,
                          std::size_t index, double alpha, double beta, const SolverOptions& opts)
{
    if (index >= sequence.size()) throw UsageError("lambda index out of range");
    std::vector<double> prefix(sequence.values().begin(),
                               sequence.values().begin() + static_cast<std::ptrdiff_t>(index + 1));
    PathResult path = reg_path(problem, LambdaSequence(std::move(prefix), sequence.ratio()), alpha,
                               beta, opts);
    return std::move(path.fits.back());
}

double auc(const Vector& scores, const Vector& labels)
{
    if (scores.size() != labels.size()) throw DataError("auc: scores and labels differ in length");
    const Index n = scores.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(a) < scores(b); });

    // Sum of average ranks (1-based) of the positives.
    double rank_sum = 0.0;
    double n_pos = 0.0;
    for (Index start = 0; start < n;) {
        Index end = start + 1;
        while (end < n && scores(order[static_cast<std::size_t>(end)]) ==
                              scores(order[static_cast<std::size_t>(start)])) {
            ++end;
        }
        const double avg_rank = 0.5 * static_cast<double>(start + 1 + end);
        for (Index r = start; r < end; ++r) {
            if (labels(order[static_cast<std::size_t>(r)]) > 0.0) {
                rank_sum += avg_rank;
                n_pos += 1.0;
            }
        }
        start = end;
    }
    const double n_neg = static_cast<double>(n) - n_pos;
    if (n_pos == 0.0 || n_neg == 0.0) throw DataError("auc needs both positive and negative labels");
    const double u = rank_sum - n_pos * (n_pos + 1.0) / 2.0;
    return u / (n_pos * n_neg);
}

double explained_variance(const Vector& pred, const Vector& y)
{
    if (pred.size() != y.size()) throw DataError("explained_variance: length mismatch");
    if (y.size() < 2) throw DataError("explained_variance needs at least 2 samples");
    const double ss_tot = (y.array() - y.mean()).square().sum();
    if (ss_tot == 0.0) throw DataError("explained_variance is undefined for constant outcomes");
    const double ss_res = (y - pred).squaredNorm();
    return 1.0 - ss_res / ss_tot;
}

double pseudo_explained_variance(const Vector& scores, const Vector& labels)
{
    if (scores.size() != labels.size()) {
        throw DataError("pseudo_explained_variance: length mismatch");
    }
    const auto n_pos = (labels.array() > 0.0).count();
    if (n_pos == 0 || n_pos == labels.size()) {
        throw DataError("pseudo_explained_variance needs both classes");
    }
    const Eigen::ArrayXd s = scores.array() - scores.mean();
    const Eigen::ArrayXd l = labels.array() - labels.mean();
    const double ss_s = s.square().sum();
    if (ss_s <= 0.0) return 0.0;
    const double cov = (s * l).sum();
    return cov * cov / (ss_s * l.square().sum());
}

} // namespace mtlcomb
