#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flakelex {

// Base of every recoverable failure raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- corpus loading ---------------------------------------------------------

struct MissingColumn final : Error {
    explicit MissingColumn(const std::string& column)
        : Error("missing required column: " + column) {}
};

struct BadLabel final : Error {
    BadLabel(std::size_t line, const std::string& text)
        : Error("line " + std::to_string(line) + ": unrecognized label \"" + text + "\""),
          line(line) {}
    std::size_t line;
};

struct EmptyBody final : Error {
    explicit EmptyBody(std::size_t line)
        : Error("line " + std::to_string(line) + ": empty test body"), line(line) {}
    std::size_t line;
};

// --- corpus operations ------------------------------------------------------

struct DegenerateSplit final : Error {
    using Error::Error;
};

// --- featurization ----------------------------------------------------------

struct EmptyVocabulary final : Error {
    using Error::Error;
};

struct ConfigMismatch final : Error {
    using Error::Error;
};

// --- learning ---------------------------------------------------------------

struct SingleClassTraining final : Error {
    using Error::Error;
};

struct DimensionMismatch final : Error {
    using Error::Error;
};

// --- metrics ----------------------------------------------------------------

struct LengthMismatch final : Error {
    using Error::Error;
};

struct SingleClassAUC final : Error {
    using Error::Error;
};

struct NonFlakyPresent final : Error {
    using Error::Error;
};

// --- feature ranking --------------------------------------------------------

struct SingleClassLabels final : Error {
    using Error::Error;
};

}  // namespace flakelex
