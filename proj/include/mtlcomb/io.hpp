#pragma once

#include "mtlcomb/model.hpp"
#include "mtlcomb/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mtlcomb::io {

// 17 significant digits, enough for an exact round trip.
std::string format_number(double value);

struct CsvTable
{
    std::vector<std::string> header;
    Matrix values; // rows x header.size()

    // Column position by name; throws DataError if absent.
    Index column(const std::string& name) const;
};

// Header row plus numeric rows. Rejects empty or non-numeric cells, ragged
// rows and duplicated header names.
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const Matrix& values);

struct ManifestTask
{
    std::string name;
    TaskKind kind = TaskKind::regression;
    std::string data_path; // relative to the manifest directory
    std::string outcome_column;
};

struct Manifest
{
    bool standardize = false;
    bool fit_intercept = false;
    std::vector<ManifestTask> tasks;
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

struct LoadedProblem
{
    MtlProblem problem;
    // Canonical (sorted) feature order shared by all tasks.
    std::vector<std::string> feature_names;
    bool standardize = false;
    bool fit_intercept = false;
};

// Reads every task CSV, matches features by name, remaps 0/1 labels to -1/+1
// and puts classification tasks first.
LoadedProblem load_problem(const std::filesystem::path& manifest_path);

// Feature matrix of a CSV in the given column order; other columns are ignored.
Matrix read_features(const std::filesystem::path& path, const std::vector<std::string>& feature_names);

struct ModelTask
{
    std::string name;
    TaskKind kind = TaskKind::regression;
    double intercept = 0.0;
    std::optional<TaskStandardization> standardization;
};

struct ModelFile
{
    static constexpr int kFormatVersion = 1;

    std::vector<std::string> feature_names;
    std::vector<ModelTask> tasks;
    Matrix W;
    bool fit_intercept = false;
    Hyperparameters hyperparameters{0.0, 0.0, 0.0};
    std::uint64_t seed = 0;

    const ModelTask& task(const std::string& name) const;
    Index task_index(const std::string& name) const;

    // Raw-unit predictions for task `name`: probabilities for classification,
    // outcomes for regression. `scores` receives the linear scores.
    Vector predict(const std::string& name, const Matrix& X_raw, Vector* scores = nullptr) const;
};

std::string to_json_text(const ModelFile& model);
ModelFile model_from_json_text(const std::string& text);
void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace mtlcomb::io
