#pragma once

#include <stdexcept>
#include <string>

namespace fracml {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numeric failures.
class DomainError : public Error { using Error::Error; };
class PoleError : public Error { using Error::Error; };
class OverflowError : public Error { using Error::Error; };
class ConvergenceError : public Error { using Error::Error; };
class NoConvergenceError : public Error { using Error::Error; };
class AlphaMismatchError : public Error { using Error::Error; };
class OrderError : public Error { using Error::Error; };
class GridError : public Error { using Error::Error; };
class SingularityError : public Error { using Error::Error; };
class SingularSystemError : public Error { using Error::Error; };
class PairingError : public Error { using Error::Error; };

// Problem-document failures.
class ParseError : public Error { using Error::Error; };
class ValidationError : public Error { using Error::Error; };

}  // namespace fracml
