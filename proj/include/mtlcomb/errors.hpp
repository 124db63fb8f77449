#pragma once

#include <stdexcept>
#include <string>

namespace mtlcomb {

// Coarse error classes. The CLI maps them onto exit codes 2, 3 and 4.
enum class ErrorCategory { usage, data, numerical };

inline const char* category_name(ErrorCategory c)
{
    switch (c) {
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::data: return "data";
    case ErrorCategory::numerical: return "numerical";
    }
    return "unknown";
}

class Error : public std::runtime_error
{
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class UsageError : public Error
{
public:
    explicit UsageError(const std::string& what) : Error(ErrorCategory::usage, what) {}
};

// Malformed input: bad shapes, labels, files, degenerate data.
class DataError : public Error
{
public:
    explicit DataError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

// Non-finite objective, line search blow-up.
class NumericalError : public Error
{
public:
    explicit NumericalError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

} // namespace mtlcomb
