#pragma once

#include <stdexcept>
#include <string>

namespace cavityflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: shapes, scenario keys, tolerances.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Configuration outside the collision-free set (separation <= margin).
class CollisionError : public Error {
public:
    CollisionError(const std::string& what, double separation)
        : Error(what), separation_(separation) {}
    double separation() const { return separation_; }

private:
    double separation_;
};

// Linear system could not be factored or solved.
class SolverError : public Error {
public:
    using Error::Error;
};

// Discretization too coarse for the requested quantity (asymmetric M^a, indefinite M).
class AccuracyError : public Error {
public:
    using Error::Error;
};

// Field evaluation requested outside the fluid or inside the near-boundary band.
class EvaluationZoneError : public Error {
public:
    using Error::Error;
};

// Files that could not be read or written; the message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cavityflow
