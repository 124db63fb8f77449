#include "mtlcomb/simdata.hpp"

#include "mtlcomb/errors.hpp"
#include "mtlcomb/model.hpp"
#include "mtlcomb/regpath.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace mtlcomb {

void SimulationSpec::validate() const
{
    if (t_classification < 0 || t_regression < 0 || t_classification + t_regression < 1) {
        throw UsageError("simulation needs at least one task");
    }
    if (p < 1) throw UsageError("simulation needs p >= 1");
    if (n_per_task < 1) throw UsageError("simulation needs n_per_task >= 1");
    if (!(sparsity >= 0.0 && sparsity < 1.0)) throw UsageError("sparsity must lie in [0, 1)");
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
        throw UsageError("noise_scale must be finite and >= 0");
    }
}

int SimulationSpec::support_size() const
{
    // (1 - 0.9) * 15 is 1.4999999999999998; absorb that before rounding half up.
    return static_cast<int>(std::floor((1.0 - sparsity) * p + 0.5 + 1e-9));
}

namespace {

std::string task_name(const char* prefix, int index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%02d", prefix, index + 1);
    return buf;
}

struct Generator
{
    std::mt19937_64 rng;
    std::normal_distribution<double> normal{0.0, 1.0};

    double draw() { return normal(rng); }

    Matrix draw_matrix(Index rows, Index cols)
    {
        Matrix M(rows, cols);
        for (Index r = 0; r < rows; ++r) {
            for (Index c = 0; c < cols; ++c) M(r, c) = draw();
        }
        return M;
    }
};

std::vector<TaskDataset> draw_tasks(Generator& gen, const SimulationSpec& spec, const Matrix& W)
{
    std::vector<TaskDataset> tasks;
    const Index t = W.cols();
    for (Index m = 0; m < t; ++m) {
        const bool classification = m < spec.t_classification;
        Matrix X = gen.draw_matrix(spec.n_per_task, spec.p);
        Vector y = X * W.col(m);
        for (Index k = 0; k < y.size(); ++k) y(k) += spec.noise_scale * gen.draw();
        if (classification) {
            for (Index k = 0; k < y.size(); ++k) y(k) = y(k) >= 0.0 ? 1.0 : -1.0;
            tasks.emplace_back(task_name("class_", static_cast<int>(m)), TaskKind::classification,
                               std::move(X), std::move(y));
        } else {
            tasks.emplace_back(task_name("reg_", static_cast<int>(m - spec.t_classification)),
                               TaskKind::regression, std::move(X), std::move(y));
        }
    }
    return tasks;
}

} // namespace

SimulationOutput simulate(const SimulationSpec& spec)
{
    spec.validate();
    Generator gen{std::mt19937_64(spec.seed)};
    const Index t = spec.t_classification + spec.t_regression;
    const int support = spec.support_size();

    Matrix W = gen.draw_matrix(spec.p, t);
    W.bottomRows(spec.p - support).setZero();

    std::vector<Index> true_support(static_cast<std::size_t>(support));
    std::iota(true_support.begin(), true_support.end(), Index{0});

    MtlProblem train(draw_tasks(gen, spec, W));
    MtlProblem test(draw_tasks(gen, spec, W));
    return SimulationOutput{std::move(train), std::move(test), std::move(W), std::move(true_support)};
}

MtlProblem binarize_problem(const MtlProblem& problem, BinarizeThreshold threshold)
{
    std::vector<TaskDataset> tasks;
    for (const auto& task : problem.tasks()) {
        if (task.is_classification()) {
            tasks.push_back(task);
            continue;
        }
        const Vector& y = task.y();
        if ((y.array() == y(0)).all()) {
            throw DataError("task '" + task.name() + "': constant outcomes cannot be binarized");
        }
        double cut = 0.0;
        if (threshold == BinarizeThreshold::median) {
            std::vector<double> sorted(y.data(), y.data() + y.size());
            std::sort(sorted.begin(), sorted.end());
            const std::size_t n = sorted.size();
            cut = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        }
        Vector labels(y.size());
        for (Index k = 0; k < y.size(); ++k) labels(k) = y(k) > cut ? 1.0 : -1.0;
        tasks.emplace_back(task.name(), TaskKind::classification, task.X(), std::move(labels));
    }
    return MtlProblem(std::move(tasks));
}

double recovery_accuracy(const Matrix& W_hat, const std::vector<Index>& true_support)
{
    if (true_support.empty()) throw UsageError("recovery accuracy needs a non-empty support");
    const Index max_index = *std::max_element(true_support.begin(), true_support.end());
    if (max_index >= W_hat.rows() || *std::min_element(true_support.begin(), true_support.end()) < 0) {
        throw DataError("support index " + std::to_string(max_index) + " outside the " +
                        std::to_string(W_hat.rows()) + "-row coefficient matrix");
    }
    const Vector norms = W_hat.rowwise().norm();
    std::vector<Index> order(static_cast<std::size_t>(W_hat.rows()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return norms(a) > norms(b); });

    const std::size_t k = std::min(true_support.size(), order.size());
    std::vector<Index> selected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(selected.begin(), selected.end());
    std::vector<Index> truth = true_support;
    std::sort(truth.begin(), truth.end());
    std::vector<Index> hit;
    std::set_intersection(selected.begin(), selected.end(), truth.begin(), truth.end(),
                          std::back_inserter(hit));
    return static_cast<double>(hit.size()) / static_cast<double>(true_support.size());
}

std::string to_string(BenchmarkMethod method)
{
    switch (method) {
    case BenchmarkMethod::mtlcomb: return "mtlcomb";
    case BenchmarkMethod::mtlbin: return "mtlbin";
    case BenchmarkMethod::singletask: return "singletask";
    }
    return "unknown";
}

BenchmarkMethod parse_benchmark_method(const std::string& text)
{
    if (text == "mtlcomb") return BenchmarkMethod::mtlcomb;
    if (text == "mtlbin") return BenchmarkMethod::mtlbin;
    if (text == "singletask") return BenchmarkMethod::singletask;
    throw UsageError("unknown benchmark method '" + text + "'");
}

double squared_correlation(const Vector& a, const Vector& b)
{
    if (a.size() != b.size()) throw DataError("squared_correlation: length mismatch");
    const Eigen::ArrayXd da = a.array() - a.mean();
    const Eigen::ArrayXd db = b.array() - b.mean();
    const double saa = da.square().sum();
    const double sbb = db.square().sum();
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    const double sab = (da * db).sum();
    return sab * sab / (saa * sbb);
}

namespace {

Matrix fit_cv_selected(const MtlProblem& train, const BenchmarkConfig& config)
{
    const SolverOptions opts = path_solver_options(false);
    CvConfig cv_config;
    cv_config.folds = config.folds;
    cv_config.n_lambda = config.n_lambda;
    cv_config.ratio = config.lambda_ratio;
    cv_config.seed = config.spec.seed;
    const CvResult cv = cross_validate(train, config.alpha, config.beta, cv_config, opts);
    return fit_path_prefix(train, cv.sequence, cv.best_index, config.alpha, config.beta, opts).coef.W;
}

// Test-set scores of a p x t coefficient matrix. For a model trained on
// binarized outcomes, regression tasks are scored by squared correlation
// since its scores live on the logit scale.
void score_test(const Matrix& W, const MtlProblem& test, bool logit_scale_regression,
                BenchmarkCell& cell)
{
    double ev_sum = 0.0, pev_sum = 0.0;
    int n_reg = 0, n_cls = 0;
    for (Index i = 0; i < test.n_tasks(); ++i) {
        const auto& task = test.task(i);
        const Vector s = linear_scores(task.X(), W.col(i), 0.0);
        if (task.is_classification()) {
            pev_sum += pseudo_explained_variance(s, task.y());
            ++n_cls;
        } else {
            ev_sum += logit_scale_regression ? squared_correlation(s, task.y())
                                             : explained_variance(s, task.y());
            ++n_reg;
        }
    }
    cell.ev_regression = n_reg > 0 ? ev_sum / n_reg : 0.0;
    cell.pseudo_ev_classification = n_cls > 0 ? pev_sum / n_cls : 0.0;
}

} // namespace

BenchmarkCell evaluate_method(BenchmarkMethod method, const SimulationOutput& sim,
                              const BenchmarkConfig& config)
{
    BenchmarkCell cell;
    switch (method) {
    case BenchmarkMethod::mtlcomb: {
        const Matrix W = fit_cv_selected(sim.train, config);
        cell.recovery = recovery_accuracy(W, sim.true_support);
        score_test(W, sim.test, false, cell);
        break;
    }
    case BenchmarkMethod::mtlbin: {
        const Matrix W = fit_cv_selected(binarize_problem(sim.train), config);
        cell.recovery = recovery_accuracy(W, sim.true_support);
        score_test(W, sim.test, true, cell);
        break;
    }
    case BenchmarkMethod::singletask: {
        const Index p = sim.train.n_features();
        const Index t = sim.train.n_tasks();
        Matrix W(p, t);
        for (Index i = 0; i < t; ++i) {
            W.col(i) = fit_cv_selected(MtlProblem({sim.train.task(i)}), config).col(0);
        }
        // Meta-analysis ranking: per-feature row norms (|w|) averaged over tasks.
        const Matrix mean_abs = W.cwiseAbs().rowwise().mean();
        cell.recovery = recovery_accuracy(mean_abs, sim.true_support);
        score_test(W, sim.test, false, cell);
        break;
    }
    }
    return cell;
}

std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& config)
{
    if (config.seeds.empty()) throw UsageError("benchmark needs at least one seed");
    if (config.methods.empty()) throw UsageError("benchmark needs at least one method");
    std::vector<BenchmarkRow> rows;
    for (double ratio : config.ratios) {
        if (!(ratio > 0.0 && ratio <= 1.0)) throw UsageError("benchmark ratios must lie in (0, 1]");
        std::vector<BenchmarkRow> block;
        for (auto method : config.methods) block.push_back(BenchmarkRow{method, ratio, 0, 0.0, 0.0, 0.0});
        for (auto seed : config.seeds) {
            BenchmarkConfig cell_config = config;
            cell_config.spec.seed = seed;
            cell_config.spec.n_per_task = static_cast<int>(std::lround(ratio * config.spec.p));
            const SimulationOutput sim = simulate(cell_config.spec);
            for (auto& row : block) {
                const BenchmarkCell cell = evaluate_method(row.method, sim, cell_config);
                row.seed_count += 1;
                row.mean_recovery += cell.recovery;
                row.mean_ev_regression += cell.ev_regression;
                row.mean_pseudo_ev_classification += cell.pseudo_ev_classification;
            }
        }
        for (auto& row : block) {
            row.mean_recovery /= row.seed_count;
            row.mean_ev_regression /= row.seed_count;
            row.mean_pseudo_ev_classification /= row.seed_count;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace mtlcomb
