#pragma once

#include <stdexcept>
#include <string>

namespace cohere {

// Error taxonomy mirrors the CLI exit codes:
//   ParameterError -> 1 (usage), DataError -> 2 (bad input data), NumericError -> 3.
class ParameterError : public std::runtime_error {
public:
    explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cohere
