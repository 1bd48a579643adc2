#pragma once

#include <stdexcept>
#include <string>

namespace pmt {

// I/O failures: missing files, unreadable streams, failed writes.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent data: bad CSV cells, schema mismatches,
// invariant violations in records.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or operation preconditions (bad k, single-class
// input, degenerate metric inputs).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace pmt
