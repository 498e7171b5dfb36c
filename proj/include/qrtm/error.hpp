#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qrtm {

/// Input outside the mathematical domain of an operation (non-finite, out of range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// One or more configuration or structural invariants failed. Carries every
/// violation so callers can report them all at once.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace qrtm
