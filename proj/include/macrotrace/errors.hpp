#pragma once

#include <stdexcept>
#include <string>

namespace macrotrace {

// Bad input data: malformed manifests, unreadable bundles, broken record files.
// CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad invocation: unknown taxonomy name, invalid flag combination.
// CLI maps this to exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace macrotrace
