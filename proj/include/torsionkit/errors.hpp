#pragma once

#include <stdexcept>
#include <string>

namespace tk {

// Input does not describe a valid object; locus is a JSON-pointer-like path.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string locus, const std::string& what)
        : std::runtime_error(locus.empty() ? what : locus + ": " + what), locus_(std::move(locus)) {}
    const std::string& locus() const { return locus_; }

private:
    std::string locus_;
};

// A computation declined to answer within its declared bounds.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal consistency check failed; never swallowed.
class InvariantBreach : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tk
