#include "mtlcomb/io.hpp"

#include "mtlcomb/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mtlcomb::io {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string format_number(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw DataError("write to '" + path.string() + "' failed");
}

// ---- CSV -------------------------------------------------------------------

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, const fs::path& path, std::size_t line, const std::string& column)
{
    const std::string where = path.string() + ":" + std::to_string(line) + " column '" + column + "'";
    if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") {
        throw DataError("missing value at " + where + "; impute missing values before loading");
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(v)) {
        throw DataError("non-numeric value '" + cell + "' at " + where);
    }
    return v;
}

} // namespace

Index CsvTable::column(const std::string& name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("column '" + name + "' not found");
    return static_cast<Index>(it - header.begin());
}

CsvTable read_csv(const fs::path& path)
{
    std::istringstream in(read_text(path));
    std::string line;
    std::size_t line_no = 0;
    CsvTable table;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (table.header.empty()) {
            std::set<std::string> seen;
            for (const auto& name : cells) {
                if (name.empty()) throw DataError(path.string() + ": empty header name");
                if (!seen.insert(name).second) {
                    throw DataError(path.string() + ": duplicated header '" + name + "'");
                }
            }
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " cells, found " +
                            std::to_string(cells.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row[c] = parse_cell(cells[c], path, line_no, table.header[c]);
        }
        rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw DataError(path.string() + ": empty file");
    if (rows.empty()) throw DataError(path.string() + ": no data rows");
    table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.header.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
        }
    }
    return table;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header, const Matrix& values)
{
    if (static_cast<Index>(header.size()) != values.cols()) {
        throw UsageError("write_csv: header has " + std::to_string(header.size()) + " names for " +
                         std::to_string(values.cols()) + " columns");
    }
    std::string text;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) text += ',';
        text += header[c];
    }
    text += '\n';
    for (Index r = 0; r < values.rows(); ++r) {
        for (Index c = 0; c < values.cols(); ++c) {
            if (c) text += ',';
            text += format_number(values(r, c));
        }
        text += '\n';
    }
    write_text(path, text);
}

// ---- manifest ----------------------------------------------------------------

namespace {

Json parse_json(const std::string& text, const std::string& origin)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DataError(origin + ": invalid JSON: " + e.what());
    }
}

template <typename T>
T get_field(const Json& obj, const char* key, const std::string& origin)
{
    if (!obj.is_object() || !obj.contains(key)) {
        throw DataError(origin + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const Json::exception&) {
        throw DataError(origin + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_field_or(const Json& obj, const char* key, T fallback, const std::string& origin)
{
    if (!obj.contains(key)) return fallback;
    return get_field<T>(obj, key, origin);
}

TaskKind kind_field(const Json& obj, const std::string& origin)
{
    const auto text = get_field<std::string>(obj, "kind", origin);
    try {
        return parse_task_kind(text);
    } catch (const DataError& e) {
        throw DataError(origin + ": " + e.what());
    }
}

} // namespace

Manifest read_manifest(const fs::path& path)
{
    const std::string origin = path.string();
    const Json doc = parse_json(read_text(path), origin);
    if (!doc.is_object()) throw DataError(origin + ": manifest must be a JSON object");
    Manifest manifest;
    manifest.standardize = get_field_or<bool>(doc, "standardize", false, origin);
    manifest.fit_intercept = get_field_or<bool>(doc, "fit_intercept", false, origin);
    const Json tasks = get_field<Json>(doc, "tasks", origin);
    if (!tasks.is_array() || tasks.empty()) throw DataError(origin + ": 'tasks' must be a non-empty list");
    std::set<std::string> names;
    for (const auto& entry : tasks) {
        ManifestTask task;
        task.name = get_field<std::string>(entry, "name", origin);
        task.kind = kind_field(entry, origin);
        task.data_path = get_field<std::string>(entry, "data_path", origin);
        task.outcome_column = get_field<std::string>(entry, "outcome_column", origin);
        if (task.name.empty()) throw DataError(origin + ": empty task name");
        if (!names.insert(task.name).second) {
            throw DataError(origin + ": duplicated task name '" + task.name + "'");
        }
        manifest.tasks.push_back(std::move(task));
    }
    return manifest;
}

void write_manifest(const fs::path& path, const Manifest& manifest)
{
    Json doc;
    doc["standardize"] = manifest.standardize;
    doc["fit_intercept"] = manifest.fit_intercept;
    Json tasks = Json::array();
    for (const auto& task : manifest.tasks) {
        tasks.push_back({{"name", task.name},
                         {"kind", std::string(to_string(task.kind))},
                         {"data_path", task.data_path},
                         {"outcome_column", task.outcome_column}});
    }
    doc["tasks"] = std::move(tasks);
    write_text(path, doc.dump(2) + "\n");
}

namespace {

Vector classification_labels(const Vector& raw, const std::string& task)
{
    const bool signed_labels = (raw.array() == 1.0 || raw.array() == -1.0).all();
    const bool binary_labels = (raw.array() == 1.0 || raw.array() == 0.0).all();
    if (signed_labels) return raw;
    if (binary_labels) return (2.0 * raw.array() - 1.0).matrix();
    throw DataError("task '" + task + "': classification outcomes must be in {-1,+1} or {0,1}");
}

} // namespace

Matrix read_features(const fs::path& path, const std::vector<std::string>& feature_names)
{
    const CsvTable table = read_csv(path);
    Matrix X(table.values.rows(), static_cast<Index>(feature_names.size()));
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
        const auto it = std::find(table.header.begin(), table.header.end(), feature_names[j]);
        if (it == table.header.end()) {
            throw DataError(path.string() + ": missing feature column '" + feature_names[j] + "'");
        }
        X.col(static_cast<Index>(j)) = table.values.col(it - table.header.begin());
    }
    return X;
}

LoadedProblem load_problem(const fs::path& manifest_path)
{
    const Manifest manifest = read_manifest(manifest_path);
    const fs::path base = manifest_path.parent_path();
    std::vector<std::string> canonical_features;
    std::vector<TaskDataset> tasks;
    for (const auto& entry : manifest.tasks) {
        const fs::path data_path = base / entry.data_path;
        const CsvTable table = read_csv(data_path);
        const auto outcome_it = std::find(table.header.begin(), table.header.end(), entry.outcome_column);
        if (outcome_it == table.header.end()) {
            throw DataError("task '" + entry.name + "': outcome column '" + entry.outcome_column +
                            "' not in " + data_path.string());
        }
        std::vector<std::string> features;
        for (const auto& name : table.header) {
            if (name != entry.outcome_column) features.push_back(name);
        }
        std::sort(features.begin(), features.end());
        if (features.empty()) throw DataError("task '" + entry.name + "' has no feature columns");
        if (tasks.empty()) {
            canonical_features = features;
        } else if (features != canonical_features) {
            throw DataError("task '" + entry.name + "' has a different feature set than task '" +
                            tasks.front().name() + "'");
        }
        Matrix X(table.values.rows(), static_cast<Index>(features.size()));
        for (std::size_t j = 0; j < features.size(); ++j) X.col(static_cast<Index>(j)) = table.values.col(table.column(features[j]));
        Vector y = table.values.col(outcome_it - table.header.begin());
        if (entry.kind == TaskKind::classification) y = classification_labels(y, entry.name);
        tasks.emplace_back(entry.name, entry.kind, std::move(X), std::move(y));
    }
    return LoadedProblem{MtlProblem::canonical(std::move(tasks)), std::move(canonical_features),
                         manifest.standardize, manifest.fit_intercept};
}

// ---- model file ----------------------------------------------------------------

const ModelTask& ModelFile::task(const std::string& name) const
{
    return tasks[static_cast<std::size_t>(task_index(name))];
}

Index ModelFile::task_index(const std::string& name) const
{
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].name == name) return static_cast<Index>(i);
    }
    throw DataError("model has no task named '" + name + "'");
}

Vector ModelFile::predict(const std::string& name, const Matrix& X_raw, Vector* scores) const
{
    const Index i = task_index(name);
    const ModelTask& mt = tasks[static_cast<std::size_t>(i)];
    if (X_raw.cols() != W.rows()) {
        throw DataError("task '" + name + "': " + std::to_string(X_raw.cols()) +
                        " features given, model has " + std::to_string(W.rows()));
    }
    const Matrix X = mt.standardization ? mt.standardization->apply_features(X_raw) : X_raw;
    Vector s = linear_scores(X, W.col(i), mt.intercept);
    Vector out;
    if (mt.kind == TaskKind::classification) {
        out = s.unaryExpr([](double v) { return sigmoid(v); });
    } else {
        out = mt.standardization ? mt.standardization->invert_outcome(s) : s;
    }
    if (scores) *scores = std::move(s);
    return out;
}

namespace {

Json vector_json(const Vector& v)
{
    Json arr = Json::array();
    for (Index k = 0; k < v.size(); ++k) arr.push_back(v(k));
    return arr;
}

Vector vector_from_json(const Json& arr, Index expected, const std::string& what)
{
    if (!arr.is_array() || static_cast<Index>(arr.size()) != expected) {
        throw DataError("model file: '" + what + "' must be a list of " + std::to_string(expected) + " numbers");
    }
    Vector v(expected);
    for (Index k = 0; k < expected; ++k) {
        if (!arr[static_cast<std::size_t>(k)].is_number()) throw DataError("model file: non-numeric entry in '" + what + "'");
        v(k) = arr[static_cast<std::size_t>(k)].get<double>();
    }
    return v;
}

const std::string kModelOrigin = "model file";

} // namespace

std::string to_json_text(const ModelFile& model)
{
    const Index p = model.W.rows();
    const Index t = model.W.cols();
    if (static_cast<Index>(model.feature_names.size()) != p || static_cast<Index>(model.tasks.size()) != t) {
        throw UsageError("model file: W is " + std::to_string(p) + "x" + std::to_string(t) +
                         " but names cover " + std::to_string(model.feature_names.size()) + "x" +
                         std::to_string(model.tasks.size()));
    }
    Json doc;
    doc["format"] = "mtlcomb-model";
    doc["format_version"] = ModelFile::kFormatVersion;
    doc["feature_names"] = model.feature_names;
    Json tasks = Json::array();
    for (const auto& mt : model.tasks) {
        Json entry;
        entry["name"] = mt.name;
        entry["kind"] = std::string(to_string(mt.kind));
        entry["intercept"] = mt.intercept;
        if (mt.standardization) {
            const auto& s = *mt.standardization;
            Json rec;
            rec["feature_mean"] = vector_json(s.feature_mean);
            rec["feature_sd"] = vector_json(s.feature_sd);
            rec["constant_feature"] = s.constant_feature;
            rec["outcome_scaled"] = s.outcome_scaled;
            rec["outcome_mean"] = s.outcome_mean;
            rec["outcome_sd"] = s.outcome_sd;
            entry["standardization"] = std::move(rec);
        } else {
            entry["standardization"] = nullptr;
        }
        tasks.push_back(std::move(entry));
    }
    doc["tasks"] = std::move(tasks);
    Json rows = Json::array();
    for (Index j = 0; j < p; ++j) rows.push_back(vector_json(model.W.row(j).transpose()));
    doc["W"] = std::move(rows);
    doc["fit_intercept"] = model.fit_intercept;
    doc["hyperparameters"] = {{"lambda", model.hyperparameters.lambda},
                              {"alpha", model.hyperparameters.alpha},
                              {"beta", model.hyperparameters.beta}};
    doc["seed"] = model.seed;
    return doc.dump(2) + "\n";
}

ModelFile model_from_json_text(const std::string& text)
{
    const Json doc = parse_json(text, kModelOrigin);
    if (get_field_or<std::string>(doc, "format", "", kModelOrigin) != "mtlcomb-model") {
        throw DataError("model file: not an mtlcomb model");
    }
    const int version = get_field<int>(doc, "format_version", kModelOrigin);
    if (version != ModelFile::kFormatVersion) {
        throw DataError("model file: unsupported format_version " + std::to_string(version));
    }
    ModelFile model;
    model.feature_names = get_field<std::vector<std::string>>(doc, "feature_names", kModelOrigin);
    const Index p = static_cast<Index>(model.feature_names.size());
    const Json tasks = get_field<Json>(doc, "tasks", kModelOrigin);
    if (!tasks.is_array() || tasks.empty()) throw DataError("model file: 'tasks' must be a non-empty list");
    for (const auto& entry : tasks) {
        ModelTask mt;
        mt.name = get_field<std::string>(entry, "name", kModelOrigin);
        mt.kind = kind_field(entry, kModelOrigin);
        mt.intercept = get_field<double>(entry, "intercept", kModelOrigin);
        const Json rec = get_field<Json>(entry, "standardization", kModelOrigin);
        if (!rec.is_null()) {
            TaskStandardization s;
            s.feature_mean = vector_from_json(get_field<Json>(rec, "feature_mean", kModelOrigin), p, "feature_mean");
            s.feature_sd = vector_from_json(get_field<Json>(rec, "feature_sd", kModelOrigin), p, "feature_sd");
            s.constant_feature = get_field<std::vector<bool>>(rec, "constant_feature", kModelOrigin);
            if (static_cast<Index>(s.constant_feature.size()) != p) {
                throw DataError("model file: 'constant_feature' has the wrong length");
            }
            s.outcome_scaled = get_field<bool>(rec, "outcome_scaled", kModelOrigin);
            s.outcome_mean = get_field<double>(rec, "outcome_mean", kModelOrigin);
            s.outcome_sd = get_field<double>(rec, "outcome_sd", kModelOrigin);
            mt.standardization = std::move(s);
        }
        model.tasks.push_back(std::move(mt));
    }
    const Index t = static_cast<Index>(model.tasks.size());
    const Json rows = get_field<Json>(doc, "W", kModelOrigin);
    if (!rows.is_array() || static_cast<Index>(rows.size()) != p) {
        throw DataError("model file: 'W' must have one row per feature");
    }
    model.W.resize(p, t);
    for (Index j = 0; j < p; ++j) model.W.row(j) = vector_from_json(rows[static_cast<std::size_t>(j)], t, "W").transpose();
    model.fit_intercept = get_field<bool>(doc, "fit_intercept", kModelOrigin);
    const Json hyper = get_field<Json>(doc, "hyperparameters", kModelOrigin);
    model.hyperparameters.lambda = get_field<double>(hyper, "lambda", kModelOrigin);
    model.hyperparameters.alpha = get_field<double>(hyper, "alpha", kModelOrigin);
    model.hyperparameters.beta = get_field<double>(hyper, "beta", kModelOrigin);
    model.seed = get_field<std::uint64_t>(doc, "seed", kModelOrigin);
    return model;
}

void save_model(const fs::path& path, const ModelFile& model) { write_text(path, to_json_text(model)); }

ModelFile load_model(const fs::path& path)
{
    try {
        return model_from_json_text(read_text(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace mtlcomb::io
