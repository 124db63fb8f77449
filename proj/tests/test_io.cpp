#include "mtlcomb/errors.hpp"
#include "mtlcomb/io.hpp"
#include "mtlcomb/model.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

using namespace mtlcomb;
namespace fs = std::filesystem;

namespace {

class IoTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("mtlcomb_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text)
    {
        io::write_text(dir_ / name, text);
        return dir_ / name;
    }

    fs::path manifest(const std::string& tasks_json, bool standardize = false)
    {
        return write("manifest.json", std::string("{\"standardize\": ") + (standardize ? "true" : "false") +
                                          ", \"tasks\": [" + tasks_json + "]}");
    }

    fs::path dir_;
};

std::string task_entry(const std::string& name, const std::string& kind, const std::string& file,
                       const std::string& outcome = "y")
{
    return "{\"name\": \"" + name + "\", \"kind\": \"" + kind + "\", \"data_path\": \"" + file +
           "\", \"outcome_column\": \"" + outcome + "\"}";
}

} // namespace

TEST(FormatNumber, RoundTripsExactly)
{
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> expo(-300, 300);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 2000; ++i) {
        const double x = normal(rng) * std::pow(10.0, expo(rng));
        EXPECT_EQ(std::strtod(io::format_number(x).c_str(), nullptr), x);
    }
    EXPECT_EQ(io::format_number(0.5), "0.5");
    EXPECT_EQ(io::format_number(-3), "-3");
}

TEST_F(IoTest, CsvRoundTrip)
{
    std::mt19937_64 rng(52);
    const Matrix M = oracle::random_matrix(rng, 7, 3, 1e3);
    io::write_csv(dir_ / "m.csv", {"a", "b", "c"}, M);
    const auto table = io::read_csv(dir_ / "m.csv");
    EXPECT_EQ(table.header, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(table.values, M);
    EXPECT_EQ(table.column("c"), 2);
    EXPECT_THROW(table.column("d"), DataError);
}

TEST_F(IoTest, CsvRejectsBadInput)
{
    EXPECT_THROW(io::read_csv(dir_ / "absent.csv"), DataError);
    EXPECT_THROW(io::read_csv(write("empty.csv", "")), DataError);
    EXPECT_THROW(io::read_csv(write("header_only.csv", "a,b\n")), DataError);
    EXPECT_THROW(io::read_csv(write("dup.csv", "a,a\n1,2\n")), DataError);
    EXPECT_THROW(io::read_csv(write("ragged.csv", "a,b\n1,2\n3\n")), DataError);
    EXPECT_THROW(io::read_csv(write("text.csv", "a,b\n1,x\n")), DataError);
    EXPECT_THROW(io::read_csv(write("suffix.csv", "a,b\n1,2x\n")), DataError);
    EXPECT_THROW(io::read_csv(write("inf.csv", "a,b\n1,inf\n")), DataError);
    try {
        io::read_csv(write("missing.csv", "a,b\n1,\n"));
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("impute"), std::string::npos) << e.what();
    }
    // CRLF line endings and blank lines are fine.
    const auto ok = io::read_csv(write("crlf.csv", "a,b\r\n1,2\r\n\r\n3,4\r\n"));
    EXPECT_EQ(ok.values.rows(), 2);
    EXPECT_EQ(ok.values(1, 1), 4.0);
}

TEST_F(IoTest, LoadProblemBasics)
{
    write("r.csv", "x1,x2,y\n1,2,3\n4,5,6\n7,8,10\n");
    write("c.csv", "x1,x2,label\n1,0,1\n0,1,0\n2,2,1\n");
    const auto loaded = io::load_problem(manifest(task_entry("reg", "regression", "r.csv") + "," +
                                                  task_entry("cls", "classification", "c.csv", "label")));
    EXPECT_EQ(loaded.problem.n_features(), 2);
    EXPECT_EQ(loaded.feature_names, (std::vector<std::string>{"x1", "x2"}));
    // Classification first, 0/1 labels remapped.
    EXPECT_EQ(loaded.problem.task(0).name(), "cls");
    Vector expected(3);
    expected << 1, -1, 1;
    EXPECT_EQ(loaded.problem.task(0).y(), expected);
    EXPECT_EQ(loaded.problem.task(1).X()(2, 1), 8.0);
    EXPECT_FALSE(loaded.standardize);
    EXPECT_FALSE(loaded.fit_intercept);
}

TEST_F(IoTest, PermutedColumnsGiveIdenticalProblem)
{
    write("a.csv", "x1,x2,x3,y\n1,2,3,0.5\n4,5,6,1.5\n");
    write("b.csv", "y,x3,x1,x2\n0.5,3,1,2\n1.5,6,4,5\n");
    const auto a = io::load_problem(manifest(task_entry("t", "regression", "a.csv")));
    const auto b = io::load_problem(manifest(task_entry("t", "regression", "b.csv")));
    EXPECT_EQ(a.feature_names, b.feature_names);
    EXPECT_EQ(a.problem.task(0).X(), b.problem.task(0).X());
    EXPECT_EQ(a.problem.task(0).y(), b.problem.task(0).y());
}

TEST_F(IoTest, LoadProblemRejectsInconsistentInput)
{
    write("a.csv", "x1,x2,y\n1,2,3\n4,5,6\n");
    write("b.csv", "x1,x3,y\n1,2,3\n4,5,6\n");
    write("bad_labels.csv", "x1,x2,y\n1,2,2\n4,5,1\n");
    write("mixed_labels.csv", "x1,x2,y\n1,2,-1\n4,5,0\n");
    EXPECT_THROW(io::load_problem(manifest(task_entry("a", "regression", "a.csv") + "," +
                                           task_entry("b", "regression", "b.csv"))),
                 DataError);
    EXPECT_THROW(io::load_problem(manifest(task_entry("a", "regression", "a.csv", "z"))), DataError);
    EXPECT_THROW(io::load_problem(manifest(task_entry("a", "classification", "bad_labels.csv"))), DataError);
    EXPECT_THROW(io::load_problem(manifest(task_entry("a", "classification", "mixed_labels.csv"))), DataError);
    EXPECT_THROW(io::load_problem(manifest(task_entry("a", "regression", "a.csv") + "," +
                                           task_entry("a", "regression", "a.csv"))),
                 DataError);
    EXPECT_THROW(io::load_problem(manifest(task_entry("a", "regression", "gone.csv"))), DataError);
    EXPECT_THROW(io::load_problem(manifest(task_entry("a", "ordinal", "a.csv"))), DataError);
    EXPECT_THROW(io::load_problem(write("broken.json", "{\"tasks\": [")), DataError);
    EXPECT_THROW(io::load_problem(write("notasks.json", "{\"tasks\": []}")), DataError);
    EXPECT_THROW(io::load_problem(write("nofield.json", "{\"tasks\": [{\"name\": \"a\"}]}")), DataError);
}

TEST_F(IoTest, ManifestRoundTrip)
{
    io::Manifest m;
    m.standardize = true;
    m.tasks.push_back({"c", TaskKind::classification, "data/c.csv", "label"});
    m.tasks.push_back({"r", TaskKind::regression, "data/r.csv", "y"});
    io::write_manifest(dir_ / "m.json", m);
    const io::Manifest back = io::read_manifest(dir_ / "m.json");
    EXPECT_TRUE(back.standardize);
    EXPECT_FALSE(back.fit_intercept);
    ASSERT_EQ(back.tasks.size(), 2u);
    EXPECT_EQ(back.tasks[1].data_path, "data/r.csv");
    EXPECT_EQ(back.tasks[0].kind, TaskKind::classification);
}

namespace {

io::ModelFile sample_model(std::mt19937_64& rng, bool standardized)
{
    const MtlProblem problem = oracle::random_problem(rng, 4, 3, 1, 20, 10);
    io::ModelFile model;
    model.feature_names = {"a", "b", "c", "d"};
    model.W = oracle::random_matrix(rng, 4, 3);
    model.W.row(2).setZero();
    model.fit_intercept = true;
    model.hyperparameters = {0.1234567890123, 0.5, 1.0 / 3.0};
    model.seed = 18446744073709551615ull;
    const auto record = standardize(problem, true).second;
    for (Index i = 0; i < 3; ++i) {
        io::ModelTask mt{problem.task(i).name(), problem.task(i).kind(), 0.1 * static_cast<double>(i) - 1e-17,
                         std::nullopt};
        if (standardized) mt.standardization = record.tasks[static_cast<std::size_t>(i)];
        model.tasks.push_back(mt);
    }
    return model;
}

} // namespace

TEST_F(IoTest, ModelFileRoundTripIsByteIdentical)
{
    std::mt19937_64 rng(53);
    for (bool standardized : {false, true}) {
        const io::ModelFile model = sample_model(rng, standardized);
        io::save_model(dir_ / "m1.json", model);
        const io::ModelFile loaded = io::load_model(dir_ / "m1.json");
        io::save_model(dir_ / "m2.json", loaded);
        EXPECT_EQ(io::read_text(dir_ / "m1.json"), io::read_text(dir_ / "m2.json"));
        EXPECT_EQ(loaded.W, model.W);
        EXPECT_EQ(loaded.seed, model.seed);
        EXPECT_EQ(loaded.hyperparameters.beta, model.hyperparameters.beta);

        const Matrix X = oracle::random_matrix(rng, 9, 4);
        for (const auto& mt : model.tasks) {
            Vector s1, s2;
            EXPECT_EQ(model.predict(mt.name, X, &s1), loaded.predict(mt.name, X, &s2));
            EXPECT_EQ(s1, s2);
        }
    }
}

TEST_F(IoTest, ModelFileRejectsBadDocuments)
{
    std::mt19937_64 rng(54);
    std::string text = io::to_json_text(sample_model(rng, false));
    const auto pos = text.find("\"format_version\": 1");
    ASSERT_NE(pos, std::string::npos);
    std::string future = text;
    future.replace(pos, 19, "\"format_version\": 2");
    EXPECT_THROW(io::model_from_json_text(future), DataError);
    EXPECT_THROW(io::model_from_json_text("{}"), DataError);
    EXPECT_THROW(io::model_from_json_text("[1, 2"), DataError);
    EXPECT_THROW(io::load_model(dir_ / "absent.json"), DataError);

    const io::ModelFile model = sample_model(rng, false);
    EXPECT_THROW(model.task("nope"), DataError);
    EXPECT_THROW(model.predict(model.tasks[0].name, Matrix::Zero(2, 3)), DataError);
}

TEST_F(IoTest, PredictAppliesStandardization)
{
    std::mt19937_64 rng(55);
    const io::ModelFile model = sample_model(rng, true);
    const Matrix X = oracle::random_matrix(rng, 6, 4, 3.0);
    for (Index i = 0; i < 3; ++i) {
        const auto& mt = model.tasks[static_cast<std::size_t>(i)];
        const Matrix Z = mt.standardization->apply_features(X);
        const Vector s = Z * model.W.col(i) + Vector::Constant(6, mt.intercept);
        Vector scores;
        const Vector pred = model.predict(mt.name, X, &scores);
        EXPECT_LE((scores - s).cwiseAbs().maxCoeff(), 1e-12);
        if (mt.kind == TaskKind::classification) {
            EXPECT_LE((pred - s.unaryExpr([](double v) { return sigmoid(v); })).cwiseAbs().maxCoeff(), 1e-15);
        } else {
            EXPECT_LE((pred - mt.standardization->invert_outcome(s)).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST_F(IoTest, ReadFeaturesSelectsByName)
{
    write("f.csv", "y,b,a\n9,2,1\n8,4,3\n");
    const Matrix X = io::read_features(dir_ / "f.csv", {"a", "b"});
    Matrix expected(2, 2);
    expected << 1, 2, 3, 4;
    EXPECT_EQ(X, expected);
    EXPECT_THROW(io::read_features(dir_ / "f.csv", {"a", "c"}), DataError);
}
