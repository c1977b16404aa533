#pragma once

#include <stdexcept>
#include <string>

namespace scorecast {

/// Bad or missing input data: files, schemas, shapes, out-of-range indices.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Training or inference produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Command line misuse (unknown flag, missing required argument).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scorecast
