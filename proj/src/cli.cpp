#include "mtlcomb/cli.hpp"

#include "mtlcomb/io.hpp"
#include "mtlcomb/model.hpp"
#include "mtlcomb/modelselect.hpp"
#include "mtlcomb/regpath.hpp"
#include "mtlcomb/simdata.hpp"
#include "mtlcomb/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>

namespace mtlcomb::cli {

namespace fs = std::filesystem;

int exit_code(ErrorCategory category)
{
    switch (category) {
    case ErrorCategory::usage: return 2;
    case ErrorCategory::data: return 3;
    case ErrorCategory::numerical: return 4;
    }
    return 1;
}

namespace {

// Resolved configuration and results, one "key = value" per line, in insertion
// order. No timestamps or absolute paths so reruns are byte-identical.
class RunLog
{
public:
    explicit RunLog(const std::string& command) { text("command", command); }

    void text(const std::string& key, const std::string& value) { lines_ += key + " = " + value + "\n"; }
    void number(const std::string& key, double value) { text(key, io::format_number(value)); }
    void integer(const std::string& key, long long value) { text(key, std::to_string(value)); }
    void flag(const std::string& key, bool value) { text(key, value ? "true" : "false"); }

    template <typename T, typename F>
    void list(const std::string& key, const std::vector<T>& values, F&& format)
    {
        std::string joined;
        for (std::size_t i = 0; i < values.size(); ++i) joined += (i ? "," : "") + format(values[i]);
        text(key, joined);
    }

    void write(const fs::path& path) const { io::write_text(path, lines_); }

private:
    std::string lines_;
};

struct SolverFlags
{
    double tol;
    int max_iter;

    SolverOptions options(bool fit_intercept) const
    {
        SolverOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        opts.fit_intercept = fit_intercept;
        return opts;
    }

    void log(RunLog& log) const
    {
        log.number("tol", tol);
        log.integer("max_iter", max_iter);
        log.number("L0", SolverOptions{}.L0);
    }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags)
{
    cmd->add_option("--tol", flags.tol, "Relative objective change for convergence")->capture_default_str();
    cmd->add_option("--max-iter", flags.max_iter, "Iteration cap per fit")->capture_default_str();
}

// Problem as fitted: standardized when the manifest asks for it.
struct Prepared
{
    MtlProblem problem;
    std::vector<std::string> feature_names;
    bool standardize;
    bool fit_intercept;
    std::optional<StandardizationRecord> record;
};

Prepared prepare(const std::string& manifest_path)
{
    io::LoadedProblem loaded = io::load_problem(manifest_path);
    if (!loaded.standardize) {
        return Prepared{std::move(loaded.problem), std::move(loaded.feature_names), false,
                        loaded.fit_intercept, std::nullopt};
    }
    auto [scaled, record] = standardize(loaded.problem, true);
    return Prepared{std::move(scaled), std::move(loaded.feature_names), true, loaded.fit_intercept,
                    std::move(record)};
}

void log_problem(RunLog& log, const std::string& manifest, const Prepared& prep)
{
    log.text("manifest", manifest);
    log.flag("standardize", prep.standardize);
    log.flag("fit_intercept", prep.fit_intercept);
    log.integer("tasks", prep.problem.n_tasks());
    log.integer("classification_tasks", prep.problem.n_classification());
    log.integer("features", prep.problem.n_features());
}

io::ModelFile make_model(const Prepared& prep, const CoefficientMatrix& coef, const Hyperparameters& hyper,
                         std::uint64_t seed)
{
    io::ModelFile model;
    model.feature_names = prep.feature_names;
    model.W = coef.W;
    model.fit_intercept = prep.fit_intercept;
    model.hyperparameters = hyper;
    model.seed = seed;
    for (Index i = 0; i < prep.problem.n_tasks(); ++i) {
        const auto& task = prep.problem.task(i);
        io::ModelTask mt;
        mt.name = task.name();
        mt.kind = task.kind();
        mt.intercept = coef.intercept(i);
        if (prep.record) mt.standardization = prep.record->tasks[static_cast<std::size_t>(i)];
        model.tasks.push_back(std::move(mt));
    }
    return model;
}

std::string feature_name(int j, int p)
{
    const std::size_t width = std::max<std::size_t>(3, std::to_string(p).size());
    const std::string digits = std::to_string(j + 1);
    return "x" + std::string(width - digits.size(), '0') + digits;
}

std::string csv_line(const std::vector<std::string>& cells)
{
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
    return line + "\n";
}

// ---- simulate ------------------------------------------------------------------

struct SimulateArgs
{
    SimulationSpec spec;
    bool standardize = false;
    bool fit_intercept = false;
    std::string out;
};

void add_spec_flags(CLI::App* cmd, SimulationSpec& spec, bool with_n)
{
    cmd->add_option("--t-classification", spec.t_classification, "Classification tasks")->capture_default_str();
    cmd->add_option("--t-regression", spec.t_regression, "Regression tasks")->capture_default_str();
    cmd->add_option("--p", spec.p, "Features")->capture_default_str();
    if (with_n) cmd->add_option("--n", spec.n_per_task, "Samples per task")->capture_default_str();
    cmd->add_option("--sparsity", spec.sparsity, "Fraction of zero rows in the true W")->capture_default_str();
    cmd->add_option("--noise", spec.noise_scale, "Additive noise scale")->capture_default_str();
}

void log_spec(RunLog& log, const SimulationSpec& spec, bool with_n)
{
    log.integer("t_classification", spec.t_classification);
    log.integer("t_regression", spec.t_regression);
    log.integer("p", spec.p);
    if (with_n) log.integer("n_per_task", spec.n_per_task);
    log.number("sparsity", spec.sparsity);
    log.number("noise_scale", spec.noise_scale);
}

void write_split(const fs::path& out, const std::string& split, const MtlProblem& problem,
                 const std::vector<std::string>& features, const SimulateArgs& args)
{
    io::Manifest manifest;
    manifest.standardize = args.standardize;
    manifest.fit_intercept = args.fit_intercept;
    std::vector<std::string> header = features;
    header.push_back("y");
    for (const auto& task : problem.tasks()) {
        Matrix table(task.n_samples(), task.n_features() + 1);
        table << task.X(), task.y();
        const std::string rel = split + "/" + task.name() + ".csv";
        io::write_csv(out / rel, header, table);
        manifest.tasks.push_back({task.name(), task.kind(), rel, "y"});
    }
    io::write_manifest(out / (split + "_manifest.json"), manifest);
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out)
{
    const SimulationOutput sim = simulate(args.spec);
    const fs::path dir(args.out);
    std::vector<std::string> features;
    for (int j = 0; j < args.spec.p; ++j) features.push_back(feature_name(j, args.spec.p));

    write_split(dir, "train", sim.train, features, args);
    write_split(dir, "test", sim.test, features, args);

    std::string support = "row,feature\n";
    for (Index j : sim.true_support) support += std::to_string(j) + "," + features[static_cast<std::size_t>(j)] + "\n";
    io::write_text(dir / "true_support.csv", support);

    std::vector<std::string> names;
    for (const auto& task : sim.train.tasks()) names.push_back(task.name());
    io::write_csv(dir / "true_W.csv", names, sim.true_W);

    RunLog log("simulate");
    log_spec(log, args.spec, true);
    log.integer("seed", static_cast<long long>(args.spec.seed));
    log.flag("standardize", args.standardize);
    log.flag("fit_intercept", args.fit_intercept);
    log.text("out", args.out);
    log.integer("support_size", static_cast<long long>(sim.true_support.size()));
    log.write(dir / "simulate.log");
    out << "wrote " << sim.train.n_tasks() << " train and " << sim.test.n_tasks() << " test tasks to "
        << args.out << "\n";
    return 0;
}

// ---- fit -----------------------------------------------------------------------

struct FitArgs
{
    std::string manifest;
    std::optional<double> lambda;
    std::optional<double> lambda_scale;
    double alpha = 0.0;
    double beta = 0.0;
    SolverFlags solver{1e-8, 1000};
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_fit(const FitArgs& args, std::ostream& out)
{
    if (args.lambda.has_value() == args.lambda_scale.has_value()) {
        throw UsageError("fit needs exactly one of --lambda or --lambda-scale");
    }
    const Prepared prep = prepare(args.manifest);
    const SolverOptions opts = args.solver.options(prep.fit_intercept);
    const double top = lam_max(prep.problem, prep.fit_intercept);
    const double lambda = args.lambda ? *args.lambda : *args.lambda_scale * top;
    const Hyperparameters hyper{lambda, args.alpha, args.beta};
    const FitResult fit = fista_fit(prep.problem, hyper, opts, path_start(prep.problem, prep.fit_intercept));

    const fs::path dir(args.out);
    io::save_model(dir / "model.json", make_model(prep, fit.coef, hyper, args.seed));

    RunLog log("fit");
    log_problem(log, args.manifest, prep);
    if (args.lambda) log.number("lambda_arg", *args.lambda);
    if (args.lambda_scale) log.number("lambda_scale", *args.lambda_scale);
    log.number("alpha", args.alpha);
    log.number("beta", args.beta);
    args.solver.log(log);
    log.integer("seed", static_cast<long long>(args.seed));
    log.text("out", args.out);
    log.number("lam_max", top);
    log.number("lambda", lambda);
    log.integer("iterations", fit.iterations);
    log.flag("converged", fit.converged);
    log.number("objective", fit.final_objective());
    log.integer("nonzero_rows", count_nonzero_rows(fit.coef.W));
    log.write(dir / "fit.log");
    out << "lambda " << io::format_number(lambda) << ": " << count_nonzero_rows(fit.coef.W)
        << " nonzero rows after " << fit.iterations << " iterations\n";
    return 0;
}

// ---- path ----------------------------------------------------------------------

struct PathArgs
{
    std::string manifest;
    double ratio = kDefaultLambdaRatio;
    int n_lambda = kDefaultLambdaCount;
    double alpha = 0.0;
    double beta = 0.0;
    SolverFlags solver{1e-6, 100};
    bool coefficients = false;
    std::string out;
};

int cmd_path(const PathArgs& args, std::ostream& out)
{
    const Prepared prep = prepare(args.manifest);
    const SolverOptions opts = args.solver.options(prep.fit_intercept);
    const double top = lam_max(prep.problem, prep.fit_intercept);
    const LambdaSequence seq = lambda_sequence(top, args.ratio, args.n_lambda);
    const PathResult path = reg_path(prep.problem, seq, args.alpha, args.beta, opts);

    const fs::path dir(args.out);
    Matrix table(static_cast<Index>(seq.size()), 6);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const auto& fit = path.fits[k];
        table.row(static_cast<Index>(k)) << static_cast<double>(k), seq[k],
            full_objective(prep.problem, fit.coef, {seq[k], args.alpha, args.beta}),
            path.nonzero_rows[k], fit.iterations, fit.converged ? 1.0 : 0.0;
        if (args.coefficients) {
            char name[32];
            std::snprintf(name, sizeof name, "model_%03zu.json", k);
            io::save_model(dir / "coefficients" / name,
                           make_model(prep, fit.coef, {seq[k], args.alpha, args.beta}, 0));
        }
    }
    io::write_csv(dir / "path.csv", {"index", "lambda", "objective", "nonzero_rows", "iterations", "converged"},
                  table);

    RunLog log("path");
    log_problem(log, args.manifest, prep);
    log.number("ratio", args.ratio);
    log.integer("n_lambda", args.n_lambda);
    log.number("alpha", args.alpha);
    log.number("beta", args.beta);
    args.solver.log(log);
    log.flag("coefficients", args.coefficients);
    log.text("out", args.out);
    log.number("lam_max", top);
    log.write(dir / "path.log");
    out << seq.size() << " path points from lambda " << io::format_number(top) << "\n";
    return 0;
}

// ---- cv ------------------------------------------------------------------------

struct CvArgs
{
    std::string manifest;
    CvConfig config;
    double alpha = 0.0;
    double beta = 0.0;
    SolverFlags solver{1e-6, 100};
    std::string out;
};

int cmd_cv(const CvArgs& args, std::ostream& out)
{
    const Prepared prep = prepare(args.manifest);
    const SolverOptions opts = args.solver.options(prep.fit_intercept);
    const CvResult cv = cross_validate(prep.problem, args.alpha, args.beta, args.config, opts);

    const fs::path dir(args.out);
    Matrix table(static_cast<Index>(cv.sequence.size()), 4);
    for (std::size_t k = 0; k < cv.sequence.size(); ++k) {
        table.row(static_cast<Index>(k)) << static_cast<double>(k), cv.sequence[k], cv.mean_cv_error[k],
            cv.se_cv_error[k];
    }
    io::write_csv(dir / "cv.csv", {"index", "lambda", "mean_cv_error", "se_cv_error"}, table);
    io::write_text(dir / "best_lambda.txt", io::format_number(cv.best_lambda) + "\n");

    RunLog log("cv");
    log_problem(log, args.manifest, prep);
    log.integer("folds", args.config.folds);
    log.integer("seed", static_cast<long long>(args.config.seed));
    log.integer("n_lambda", args.config.n_lambda);
    log.number("ratio", args.config.ratio);
    log.flag("one_standard_error", args.config.one_standard_error);
    log.number("alpha", args.alpha);
    log.number("beta", args.beta);
    args.solver.log(log);
    log.text("out", args.out);
    log.number("lam_max", cv.sequence[0]);
    log.integer("best_index", static_cast<long long>(cv.best_index));
    log.number("best_lambda", cv.best_lambda);
    log.number("best_mean_cv_error", cv.mean_cv_error[cv.best_index]);
    log.write(dir / "cv.log");
    out << "best lambda " << io::format_number(cv.best_lambda) << " (index " << cv.best_index << ")\n";
    return 0;
}

// ---- predict -------------------------------------------------------------------

struct PredictArgs
{
    std::string model;
    std::string data;
    std::string task;
    std::string out;
};

int cmd_predict(const PredictArgs& args, std::ostream& out)
{
    const io::ModelFile model = io::load_model(args.model);
    const Matrix X = io::read_features(args.data, model.feature_names);
    Vector scores;
    const Vector pred = model.predict(args.task, X, &scores);

    const fs::path dir(args.out);
    Matrix table(X.rows(), 3);
    for (Index r = 0; r < X.rows(); ++r) table.row(r) << static_cast<double>(r), scores(r), pred(r);
    io::write_csv(dir / "predictions.csv", {"row", "score", "prediction"}, table);

    RunLog log("predict");
    log.text("model", args.model);
    log.text("data", args.data);
    log.text("task", args.task);
    log.text("kind", std::string(to_string(model.task(args.task).kind)));
    log.text("out", args.out);
    log.integer("rows", X.rows());
    log.write(dir / "predict.log");
    out << "predicted " << X.rows() << " rows for task " << args.task << "\n";
    return 0;
}

// ---- eval ----------------------------------------------------------------------

struct EvalArgs
{
    std::string model;
    std::string manifest;
    std::string out;
};

int cmd_eval(const EvalArgs& args, std::ostream& out)
{
    const io::ModelFile model = io::load_model(args.model);
    const io::LoadedProblem data = io::load_problem(args.manifest);
    if (data.feature_names != model.feature_names) {
        throw DataError("evaluation data features do not match the model's features");
    }
    std::string text = "task,kind,metric,value\n";
    for (const auto& task : data.problem.tasks()) {
        const auto& mt = model.task(task.name());
        if (mt.kind != task.kind()) {
            throw DataError("task '" + task.name() + "' is " + std::string(to_string(task.kind())) +
                            " in the data but " + std::string(to_string(mt.kind)) + " in the model");
        }
        Vector scores;
        const Vector pred = model.predict(task.name(), task.X(), &scores);
        const std::string prefix = task.name() + "," + std::string(to_string(task.kind())) + ",";
        if (task.is_classification()) {
            text += prefix + "auc," + io::format_number(auc(scores, task.y())) + "\n";
            text += prefix + "pseudo_explained_variance," +
                    io::format_number(pseudo_explained_variance(scores, task.y())) + "\n";
        } else {
            text += prefix + "explained_variance," + io::format_number(explained_variance(pred, task.y())) + "\n";
        }
    }
    const fs::path dir(args.out);
    io::write_text(dir / "eval.csv", text);

    RunLog log("eval");
    log.text("model", args.model);
    log.text("manifest", args.manifest);
    log.text("out", args.out);
    log.integer("tasks", data.problem.n_tasks());
    log.write(dir / "eval.log");
    out << "evaluated " << data.problem.n_tasks() << " tasks\n";
    return 0;
}

// ---- bench ---------------------------------------------------------------------

struct BenchArgs
{
    BenchmarkConfig config;
    std::vector<std::string> methods{"mtlcomb", "mtlbin", "singletask"};
    std::string out;
};

int cmd_bench(BenchArgs args, std::ostream& out)
{
    args.config.methods.clear();
    for (const auto& m : args.methods) args.config.methods.push_back(parse_benchmark_method(m));
    args.config.spec.validate();
    const auto rows = run_benchmark(args.config);

    std::string text = "method,ratio,seed_count,mean_recovery,mean_ev_regression,mean_pseudo_ev_classification\n";
    for (const auto& row : rows) {
        text += csv_line({to_string(row.method), io::format_number(row.ratio), std::to_string(row.seed_count),
                          io::format_number(row.mean_recovery), io::format_number(row.mean_ev_regression),
                          io::format_number(row.mean_pseudo_ev_classification)});
    }
    const fs::path dir(args.out);
    io::write_text(dir / "bench.csv", text);

    const auto& c = args.config;
    RunLog log("bench");
    log_spec(log, c.spec, false);
    log.list("methods", args.methods, [](const std::string& s) { return s; });
    log.list("ratios", c.ratios, [](double r) { return io::format_number(r); });
    log.list("seeds", c.seeds, [](std::uint64_t s) { return std::to_string(s); });
    log.integer("folds", c.folds);
    log.integer("n_lambda", c.n_lambda);
    log.number("lambda_ratio", c.lambda_ratio);
    log.number("alpha", c.alpha);
    log.number("beta", c.beta);
    log.text("out", args.out);
    log.write(dir / "bench.log");
    out << text;
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Joint regression and classification multi-task learning with shared sparse features",
                 "mtlcomb"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Write a simulated train/test problem");
    add_spec_flags(sim, sim_args.spec, true);
    sim->add_option("--seed", sim_args.spec.seed, "Random seed")->capture_default_str();
    sim->add_flag("--standardize", sim_args.standardize, "Set standardize in the written manifests");
    sim->add_flag("--fit-intercept", sim_args.fit_intercept, "Set fit_intercept in the written manifests");
    sim->add_option("--out", sim_args.out, "Output directory")->required();

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit at one lambda and write model.json");
    fit->add_option("--manifest", fit_args.manifest, "Task manifest")->required();
    auto* lambda_opt = fit->add_option("--lambda", fit_args.lambda, "Penalty strength");
    fit->add_option("--lambda-scale", fit_args.lambda_scale, "Penalty as a multiple of lam_max")
        ->excludes(lambda_opt);
    fit->add_option("--alpha", fit_args.alpha, "Cross-task mean penalty")->capture_default_str();
    fit->add_option("--beta", fit_args.beta, "Ridge penalty")->capture_default_str();
    add_solver_flags(fit, fit_args.solver);
    fit->add_option("--seed", fit_args.seed, "Seed recorded in the model file")->capture_default_str();
    fit->add_option("--out", fit_args.out, "Output directory")->required();

    PathArgs path_args;
    auto* path = app.add_subcommand("path", "Fit a warm-started regularization path");
    path->add_option("--manifest", path_args.manifest, "Task manifest")->required();
    path->add_option("--ratio", path_args.ratio, "Smallest lambda as a fraction of lam_max")->capture_default_str();
    path->add_option("--n-lambda", path_args.n_lambda, "Number of lambdas")->capture_default_str();
    path->add_option("--alpha", path_args.alpha, "Cross-task mean penalty")->capture_default_str();
    path->add_option("--beta", path_args.beta, "Ridge penalty")->capture_default_str();
    add_solver_flags(path, path_args.solver);
    path->add_flag("--coefficients", path_args.coefficients, "Also write one model file per lambda");
    path->add_option("--out", path_args.out, "Output directory")->required();

    CvArgs cv_args;
    auto* cv = app.add_subcommand("cv", "Choose lambda by k-fold cross-validation");
    cv->add_option("--manifest", cv_args.manifest, "Task manifest")->required();
    cv->add_option("--folds", cv_args.config.folds, "Number of folds")->capture_default_str();
    cv->add_option("--seed", cv_args.config.seed, "Fold seed")->capture_default_str();
    cv->add_option("--n-lambda", cv_args.config.n_lambda, "Number of lambdas")->capture_default_str();
    cv->add_option("--ratio", cv_args.config.ratio, "Smallest lambda as a fraction of lam_max")->capture_default_str();
    cv->add_flag("--one-se", cv_args.config.one_standard_error, "Largest lambda within one SE of the minimum");
    cv->add_option("--alpha", cv_args.alpha, "Cross-task mean penalty")->capture_default_str();
    cv->add_option("--beta", cv_args.beta, "Ridge penalty")->capture_default_str();
    add_solver_flags(cv, cv_args.solver);
    cv->add_option("--out", cv_args.out, "Output directory")->required();

    PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "Score one task's rows with a saved model");
    predict->add_option("--model", predict_args.model, "model.json")->required();
    predict->add_option("--data", predict_args.data, "CSV with the model's feature columns")->required();
    predict->add_option("--task", predict_args.task, "Task name in the model")->required();
    predict->add_option("--out", predict_args.out, "Output directory")->required();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Per-task AUC / explained variance on a manifest");
    eval->add_option("--model", eval_args.model, "model.json")->required();
    eval->add_option("--manifest", eval_args.manifest, "Task manifest with evaluation data")->required();
    eval->add_option("--out", eval_args.out, "Output directory")->required();

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Simulation benchmark: mtlcomb vs mtlbin vs singletask");
    add_spec_flags(bench, bench_args.config.spec, false);
    bench->add_option("--ratios", bench_args.config.ratios, "Samples-per-task / p ratios")->delimiter(',')->capture_default_str();
    bench->add_option("--seeds", bench_args.config.seeds, "Simulation seeds")->delimiter(',')->capture_default_str();
    bench->add_option("--methods", bench_args.methods, "mtlcomb, mtlbin, singletask")->delimiter(',')->capture_default_str();
    bench->add_option("--folds", bench_args.config.folds, "CV folds")->capture_default_str();
    bench->add_option("--n-lambda", bench_args.config.n_lambda, "Number of lambdas")->capture_default_str();
    bench->add_option("--lambda-ratio", bench_args.config.lambda_ratio, "Smallest lambda / lam_max")
        ->capture_default_str();
    bench->add_option("--alpha", bench_args.config.alpha, "Cross-task mean penalty")->capture_default_str();
    bench->add_option("--beta", bench_args.config.beta, "Ridge penalty")->capture_default_str();
    bench->add_option("--out", bench_args.out, "Output directory")->required();

    std::vector<const char*> argv{"mtlcomb"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        // --help and friends
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (char& ch : msg) if (ch == '\n') ch = ' ';
        err << "error: usage: " << msg << "\n";
        return exit_code(ErrorCategory::usage);
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_args, out);
        if (fit->parsed()) return cmd_fit(fit_args, out);
        if (path->parsed()) return cmd_path(path_args, out);
        if (cv->parsed()) return cmd_cv(cv_args, out);
        if (predict->parsed()) return cmd_predict(predict_args, out);
        if (eval->parsed()) return cmd_eval(eval_args, out);
        if (bench->parsed()) return cmd_bench(bench_args, out);
    } catch (const Error& e) {
        std::string msg = e.what();
        for (char& ch : msg) if (ch == '\n') ch = ' ';
        err << "error: " << category_name(e.category()) << ": " << msg << "\n";
        return exit_code(e.category());
    } catch (const fs::filesystem_error& e) {
        err << "error: data: " << e.what() << "\n";
        return exit_code(ErrorCategory::data);
    }
    err << "error: usage: no subcommand\n";
    return exit_code(ErrorCategory::usage);
}

} // namespace mtlcomb::cli
