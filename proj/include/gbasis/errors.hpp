#pragma once

#include <stdexcept>
#include <string>

namespace gbasis {

// Construction-time parameter validation failure. The message names the
// violated inequality. CLI exit code 2.
class ParamError : public std::invalid_argument {
public:
    explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

// Input is mathematically outside the range the construction covers
// (e.g. n <= m_2 for the gapped-block decomposition). CLI exit code 1.
class OutOfRangeError : public std::domain_error {
public:
    explicit OutOfRangeError(const std::string& what) : std::domain_error(what) {}
};

// An internal assertion derived from the constructions failed at runtime.
// Always a bug or an input outside the proven preconditions; never results
// in silently wrong output. CLI exit code 3.
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

inline void check_invariant(bool ok, const std::string& what) {
    if (!ok) throw InvariantViolation(what);
}

}  // namespace gbasis
