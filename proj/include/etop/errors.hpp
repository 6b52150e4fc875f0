#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace etop {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition or argument violation (bad valuation, incompatible
/// denominator, zero scale factor, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// Raised when an exhaustive construction outgrows its configured cap.
/// Carries which resource ran out so frontends can report it structurally.
class CapExceeded : public Error {
public:
    CapExceeded(std::string resource, std::size_t limit)
        : Error("cap exceeded: " + resource + " limit " + std::to_string(limit)),
          resource_(std::move(resource)),
          limit_(limit) {}

    const std::string& resource() const { return resource_; }
    std::size_t limit() const { return limit_; }

private:
    std::string resource_;
    std::size_t limit_;
};

/// Resource limits for the exhaustive constructions.
struct AnalysisCaps {
    std::size_t max_region_states = 2'000'000;
    std::size_t max_subsets = std::size_t{1} << 22;
};

}  // namespace etop
