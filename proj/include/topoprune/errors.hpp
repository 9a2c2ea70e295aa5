#pragma once

#include <stdexcept>
#include <string>

namespace topoprune {

// Bad or ill-formed input data (unparsable CSV, violated preconditions).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Pipeline reached a state with no meaningful result (e.g. pruning removed
// every variable).
class degenerate_error : public std::runtime_error {
public:
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure while producing outputs.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace topoprune
