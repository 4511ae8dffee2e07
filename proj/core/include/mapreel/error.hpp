#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mapreel {

// Input that violates a type invariant or an operation precondition. `field`
// names the offending field or JSON path when one is known.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& message, std::string field = {})
        : std::runtime_error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A target with no geometry was asked for bounds or a centroid.
class NoGeometryError : public ValidationError {
public:
    explicit NoGeometryError(const std::string& message) : ValidationError(message) {}
};

// Purpose, target kind, and shot type do not go together.
class MismatchError : public ValidationError {
public:
    explicit MismatchError(const std::string& message) : ValidationError(message) {}
};

// Two shots both vary the same camera parameter.
class ConflictError : public ValidationError {
public:
    ConflictError(const std::string& message, std::string parameter)
        : ValidationError(message, std::move(parameter)) {}

    const std::string& parameter() const noexcept { return field(); }
};

// A lookup by id or name found nothing.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An input file could not be read.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mapreel
