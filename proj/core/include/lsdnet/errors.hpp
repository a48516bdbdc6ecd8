#pragma once

#include <stdexcept>
#include <string>

namespace lsdnet {

// Base class for all error conditions raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dempster combination attempted on fully conflicting evidence (conflict mass 1).
struct TotalConflict : Error {
    using Error::Error;
};

// An operation that needs at least one sensor received an empty field.
struct EmptyField : Error {
    using Error::Error;
};

// Region with zero area, too few vertices, or a self-intersecting outline.
struct DegenerateRegion : Error {
    using Error::Error;
};

// A file could not be read, or its contents did not parse.
struct BadFile : Error {
    using Error::Error;
};

// A deployment pattern was asked to sample without a parameter it needs.
struct MissingParam : Error {
    using Error::Error;
};

// Removal requested on a one-sensor field.
struct LastSensor : Error {
    using Error::Error;
};

// A frozen fusion structure was applied to a field or grid of different shape.
struct StaleStructure : Error {
    using Error::Error;
};

// A run configuration file is missing keys, has bad values, or is inconsistent.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace lsdnet
