#pragma once

#include <stdexcept>
#include <string>

namespace atsp {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested grid minimization exceeds the configured pair budget.
/// The width backend handles arbitrary parameters; the message says so.
class GridInfeasibleError : public Error {
public:
    explicit GridInfeasibleError(const std::string& what) : Error(what) {}
};

} // namespace atsp
