#include "mtlcomb/cli.hpp"
#include "mtlcomb/io.hpp"
#include "mtlcomb/model.hpp"
#include "mtlcomb/modelselect.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <sstream>

using namespace mtlcomb;
namespace fs = std::filesystem;

namespace {

struct CliResult
{
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("mtlcomb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

    void ok(const std::vector<std::string>& args)
    {
        const CliResult r = run_cli(args);
        ASSERT_EQ(r.code, 0) << r.err;
    }

    void simulate_small(std::uint64_t seed = 7, const std::string& extra = "")
    {
        std::vector<std::string> args{"simulate", "--t-classification", "2", "--t-regression", "2", "--p", "15",
                                      "--n",      "40", "--seed", std::to_string(seed), "--out", path("sim")};
        if (!extra.empty()) args.push_back(extra);
        ok(args);
    }

    fs::path dir_;
};

std::map<std::string, std::string> eval_metrics(const std::string& file)
{
    std::map<std::string, std::string> metrics;
    std::istringstream in(io::read_text(file));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        metrics[cells[0] + "/" + cells[2]] = cells[3];
    }
    return metrics;
}

} // namespace

TEST(CliExit, CodesAndErrorLine)
{
    EXPECT_EQ(cli::exit_code(ErrorCategory::usage), 2);
    EXPECT_EQ(cli::exit_code(ErrorCategory::data), 3);
    EXPECT_EQ(cli::exit_code(ErrorCategory::numerical), 4);

    auto r = run_cli({});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error: usage: ", 0), 0u) << r.err;
    r = run_cli({"frobnicate"});
    EXPECT_EQ(r.code, 2);
    r = run_cli({"fit", "--manifest", "/nonexistent/m.json", "--lambda", "1", "--out", "/tmp/x"});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(r.err.rfind("error: data: ", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
    r = run_cli({"fit", "--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("--lambda-scale"), std::string::npos);
}

TEST_F(CliTest, SimulateWritesManifestsAndSupport)
{
    simulate_small();
    for (const char* f : {"train_manifest.json", "test_manifest.json", "true_support.csv", "true_W.csv",
                          "simulate.log", "train/class_01.csv", "test/reg_02.csv"}) {
        EXPECT_TRUE(fs::exists(dir_ / "sim" / f)) << f;
    }
    const auto loaded = io::load_problem(path("sim/train_manifest.json"));
    EXPECT_EQ(loaded.problem.n_tasks(), 4);
    EXPECT_EQ(loaded.problem.n_features(), 15);
    EXPECT_EQ(loaded.feature_names.front(), "x001");
    EXPECT_EQ(io::read_text(path("sim/true_support.csv")), "row,feature\n0,x001\n1,x002\n");
    const std::string log = io::read_text(path("sim/simulate.log"));
    EXPECT_NE(log.find("seed = 7\n"), std::string::npos);
    EXPECT_NE(log.find("noise_scale = 0.5\n"), std::string::npos);
}

TEST_F(CliTest, FitAtLamMaxGivesZeroModelAndHalfProbabilities)
{
    ok({"simulate", "--out", path("sim")}); // default protocol
    ok({"fit", "--manifest", path("sim/train_manifest.json"), "--lambda-scale", "1", "--out", path("fit")});
    const io::ModelFile model = io::load_model(path("fit/model.json"));
    EXPECT_EQ(model.W.rows(), 200);
    EXPECT_EQ(model.W.cols(), 20);
    EXPECT_TRUE((model.W.array() == 0.0).all());
    const std::string log = io::read_text(path("fit/fit.log"));
    EXPECT_NE(log.find("nonzero_rows = 0\n"), std::string::npos);

    ok({"predict", "--model", path("fit/model.json"), "--data", path("sim/test/class_03.csv"), "--task",
        "class_03", "--out", path("pred")});
    const auto table = io::read_csv(path("pred/predictions.csv"));
    EXPECT_EQ(table.values.rows(), 100);
    EXPECT_TRUE((table.values.col(2).array() == 0.5).all());
    EXPECT_TRUE((table.values.col(1).array() == 0.0).all());

    auto r = run_cli({"predict", "--model", path("fit/model.json"), "--data", path("sim/test/class_03.csv"),
                      "--task", "nope", "--out", path("pred")});
    EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, FitNeedsExactlyOneLambda)
{
    simulate_small();
    auto r = run_cli({"fit", "--manifest", path("sim/train_manifest.json"), "--out", path("fit")});
    EXPECT_EQ(r.code, 2);
    r = run_cli({"fit", "--manifest", path("sim/train_manifest.json"), "--lambda", "1", "--lambda-scale", "1",
                 "--out", path("fit")});
    EXPECT_EQ(r.code, 2);
    r = run_cli({"fit", "--manifest", path("sim/train_manifest.json"), "--lambda", "-1", "--out", path("fit")});
    EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, PathWritesTableAndCoefficients)
{
    simulate_small();
    ok({"path", "--manifest", path("sim/train_manifest.json"), "--n-lambda", "6", "--coefficients", "--out",
        path("path")});
    const auto table = io::read_csv(path("path/path.csv"));
    ASSERT_EQ(table.values.rows(), 6);
    EXPECT_EQ(table.header[1], "lambda");
    EXPECT_EQ(table.values(0, 3), 0.0);
    EXPECT_GT(table.values(5, 3), 0.0);
    for (Index k = 1; k < 6; ++k) EXPECT_LT(table.values(k, 1), table.values(k - 1, 1));
    EXPECT_NEAR(table.values(5, 1) / table.values(0, 1), 0.01, 1e-12);
    const io::ModelFile last = io::load_model(path("path/coefficients/model_005.json"));
    EXPECT_EQ(last.hyperparameters.lambda, table.values(5, 1));
}

TEST_F(CliTest, CvFitEvalBeatsChanceAcrossSeeds)
{
    // Default strong-signal protocol, reduced CV grid for speed.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        fs::remove_all(dir_);
        ok({"simulate", "--seed", std::to_string(seed), "--out", path("sim")});
        ok({"cv", "--manifest", path("sim/train_manifest.json"), "--folds", "5", "--n-lambda", "20", "--seed",
            std::to_string(seed), "--out", path("cv")});
        const std::string best = io::read_text(path("cv/best_lambda.txt"));
        ok({"fit", "--manifest", path("sim/train_manifest.json"), "--lambda", best.substr(0, best.size() - 1),
            "--out", path("fit")});
        ok({"eval", "--model", path("fit/model.json"), "--manifest", path("sim/test_manifest.json"), "--out",
            path("eval")});
        const auto metrics = eval_metrics(path("eval/eval.csv"));
        int seen = 0;
        for (const auto& [key, value] : metrics) {
            if (key.find("/auc") == std::string::npos) continue;
            ++seen;
            EXPECT_GT(std::stod(value), 0.5) << "seed " << seed << " " << key;
        }
        EXPECT_EQ(seen, 10);
    }
}

TEST_F(CliTest, EvalOnRawDataMatchesPreStandardizedEvaluation)
{
    simulate_small(11, "--standardize");
    ok({"fit", "--manifest", path("sim/train_manifest.json"), "--lambda-scale", "0.2", "--out", path("fit")});
    ok({"eval", "--model", path("fit/model.json"), "--manifest", path("sim/test_manifest.json"), "--out",
        path("eval")});
    const auto metrics = eval_metrics(path("eval/eval.csv"));

    // Standardize the test data with the stored record, then score directly.
    const io::ModelFile model = io::load_model(path("fit/model.json"));
    const auto test = io::load_problem(path("sim/test_manifest.json"));
    for (const auto& task : test.problem.tasks()) {
        const auto& mt = model.task(task.name());
        ASSERT_TRUE(mt.standardization.has_value());
        const Matrix Z = mt.standardization->apply_features(task.X());
        const Vector y = mt.standardization->apply_outcome(task.y());
        const Vector s = Z * model.W.col(model.task_index(task.name())) + Vector::Constant(Z.rows(), mt.intercept);
        if (task.is_classification()) {
            EXPECT_NEAR(std::stod(metrics.at(task.name() + "/auc")), auc(s, y), 1e-10);
        } else {
            EXPECT_NEAR(std::stod(metrics.at(task.name() + "/explained_variance")), explained_variance(s, y), 1e-10);
        }
    }
}

TEST_F(CliTest, EvalRejectsMismatchedFeatures)
{
    simulate_small();
    ok({"fit", "--manifest", path("sim/train_manifest.json"), "--lambda-scale", "0.5", "--out", path("fit")});
    ok({"simulate", "--t-classification", "2", "--t-regression", "2", "--p", "16", "--n", "40", "--out",
        path("other")});
    const auto r = run_cli({"eval", "--model", path("fit/model.json"), "--manifest",
                            path("other/test_manifest.json"), "--out", path("eval")});
    EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, PipelineIsByteIdenticalAcrossRuns)
{
    auto pipeline = [&] {
        fs::remove_all(dir_);
        simulate_small(5);
        ok({"cv", "--manifest", path("sim/train_manifest.json"), "--folds", "4", "--n-lambda", "10", "--seed",
            "3", "--out", path("cv")});
        ok({"fit", "--manifest", path("sim/train_manifest.json"), "--lambda-scale", "0.3", "--out", path("fit")});
        ok({"eval", "--model", path("fit/model.json"), "--manifest", path("sim/test_manifest.json"), "--out",
            path("eval")});
        std::map<std::string, std::string> files;
        for (const auto& entry : fs::recursive_directory_iterator(dir_)) {
            if (entry.is_regular_file()) files[entry.path().string()] = io::read_text(entry.path());
        }
        return files;
    };
    const auto first = pipeline();
    const auto second = pipeline();
    EXPECT_GT(first.size(), 10u);
    EXPECT_EQ(first, second);
}

TEST_F(CliTest, BenchWritesTable)
{
    ok({"bench", "--p", "20", "--t-classification", "2", "--t-regression", "2", "--ratios", "0.5", "--seeds",
        "1,2", "--methods", "mtlcomb,singletask", "--n-lambda", "8", "--out", path("bench")});
    const std::string text = io::read_text(path("bench/bench.csv"));
    EXPECT_EQ(text.rfind("method,ratio,seed_count,mean_recovery,mean_ev_regression,mean_pseudo_ev_classification\n", 0),
              0u);
    EXPECT_NE(text.find("\nmtlcomb,0.5,2,"), std::string::npos);
    EXPECT_NE(text.find("\nsingletask,0.5,2,"), std::string::npos);
    const auto r = run_cli({"bench", "--methods", "forest", "--out", path("bench")});
    EXPECT_EQ(r.code, 2);
}
