#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kahlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Metric is singular or not positive definite at a queried point.
class AmbientDegenerate : public Error {
public:
    using Error::Error;
};

/// J fails J^2 = -I or J^T g J = g beyond tolerance.
class StructureViolation : public Error {
public:
    StructureViolation(const std::string& what, double square_defect, double compat_defect)
        : Error(what), square_defect(square_defect), compat_defect(compat_defect) {}
    double square_defect;
    double compat_defect;
};

/// Induced metric is degenerate at one or more grid nodes.
class NotImmersed : public Error {
public:
    NotImmersed(const std::string& what, std::vector<std::size_t> nodes)
        : Error(what), nodes(std::move(nodes)) {}
    std::vector<std::size_t> nodes;
};

/// cos(alpha) at or below the floor where a symplectic surface is required.
class NotSymplectic : public Error {
public:
    NotSymplectic(const std::string& what, std::vector<std::size_t> nodes, double min_cos)
        : Error(what), nodes(std::move(nodes)), min_cos(min_cos) {}
    std::vector<std::size_t> nodes;
    double min_cos;
};

/// Backtracking step size fell below its lower bound.
class FlowStalled : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Parse or validation failure in a run configuration. `line` is 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0) : Error(what), line(line) {}
    int line;
};

class ExpressionError : public Error {
public:
    ExpressionError(const std::string& what, std::size_t position)
        : Error(what), position(position) {}
    std::size_t position;
};

}  // namespace kahlab
