#pragma once

#include <stdexcept>
#include <string>

namespace foodhazard {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration (manifest, search space, provider resources).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Ingestion failures: missing columns, unreadable files.
class IngestError : public Error {
public:
    using Error::Error;
};

// Shape mismatches between matrices, label vectors, and models.
class DimensionError : public Error {
public:
    using Error::Error;
};

}  // namespace foodhazard
