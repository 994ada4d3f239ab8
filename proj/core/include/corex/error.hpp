#pragma once

#include <stdexcept>
#include <string>

namespace corex {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data: bad CSV/JSONL records, unknown enum labels,
/// duplicate ids, broken lexicon files.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A violated operation precondition (empty corpus, stratum too small,
/// zero vector, non-alphabetic word, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Bad or incomplete run configuration; messages carry the config location.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Unreadable or unwritable files.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace corex
