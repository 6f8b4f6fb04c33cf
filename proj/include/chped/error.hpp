#pragma once

#include <stdexcept>
#include <string>

namespace chped {

/// Raised for malformed inputs: dimension mismatches, invalid polygons,
/// schema violations in system or experiment files.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised while loading a file; `what()` names the offending field.
class LoadError : public StructuralError {
public:
    LoadError(const std::string& field, const std::string& message)
        : StructuralError(field + ": " + message), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace chped
