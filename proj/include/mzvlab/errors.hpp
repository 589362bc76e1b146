#pragma once

#include <stdexcept>
#include <string>

namespace mzvlab {

// Every library error derives from Error. The CLI maps all of them to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RangeError : public Error { using Error::Error; };
class PoleError : public Error { using Error::Error; };
class UnsupportedError : public Error { using Error::Error; };
class PreconditionError : public Error { using Error::Error; };
class AdmissibilityError : public Error { using Error::Error; };
class DivergenceError : public Error { using Error::Error; };
class PrecisionError : public Error { using Error::Error; };
class LevelError : public Error { using Error::Error; };
class DecodeError : public Error { using Error::Error; };
class ParameterError : public Error { using Error::Error; };
class NoCertificateError : public Error { using Error::Error; };
class InternalError : public Error { using Error::Error; };

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

} // namespace mzvlab
