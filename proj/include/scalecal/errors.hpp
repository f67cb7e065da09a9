#pragma once

#include <stdexcept>
#include <string>

namespace scalecal {

/// Input data could not be parsed. Carries file path and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
          file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

class SchemaError : public ParseError {
public:
    using ParseError::ParseError;
};

class QuaternionNormError : public ParseError {
public:
    using ParseError::ParseError;
};

class UnsupportedFormat : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few frames produced a usable per-frame scale.
class CalibrationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Contact points are collinear or coincident; the plane normal is not unique.
class DegenerateContacts : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No histogram bin along the normal holds enough points to act as a surface.
class NoQualifiedBin : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// RANSAC could not draw a non-collinear 3-point sample.
class DegenerateCloud : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ground-truth motion has no displacement; RTE normalization is undefined.
class ZeroDisplacement : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace scalecal
