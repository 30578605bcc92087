#pragma once

#include <stdexcept>
#include <string>

namespace solvgeom {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shapes or lengths that do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Input that violates a documented precondition (bad parameters, dependent vectors, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent algebra documents.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace solvgeom
