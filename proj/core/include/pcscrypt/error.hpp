#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pcscrypt {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Control flag set on a byte that is not one of the 12 valid K codes.
class InvalidSymbolError : public Error {
public:
    using Error::Error;
};

/// /K28.7/ handed to the encryption alphabet.
class ExcludedSymbolError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// FF3 / CTR parameters outside their admissible bounds.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Digit or symbol outside the radix of the operation.
class MalformedInputError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// More keystream blocks requested than the birthday-bound budget allows.
class BudgetExceededError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Symbol file or vector file that does not parse.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Result of a validation pass: empty `violations` means the input is accepted.
struct ValidationReport {
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
    [[nodiscard]] std::string summary() const;
};

}  // namespace pcscrypt
