#ifndef VVAR_ERRORS_HPP
#define VVAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vvar {

// Raised by the PGM reader. Each failure mode gets its own kind so callers
// can tell a wrong magic from a short pixel payload.
class PgmError : public std::runtime_error {
public:
    enum class Kind {
        BadMagic,
        BadHeader,
        UnsupportedMaxval,
        Truncated,
        TrailingData,
    };

    PgmError(Kind kind, const std::string& msg)
        : std::runtime_error("pgm: " + msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Raised when a .vvar byte stream cannot be decoded.
class CodeError : public std::runtime_error {
public:
    enum class Kind {
        BadMagic,
        BadVersion,
        BadHeader,   // invalid depth, dimensions or exponent sequence
        Truncated,
        TrailingData,
    };

    CodeError(Kind kind, const std::string& msg)
        : std::runtime_error("vvar code: " + msg), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

} // namespace vvar

#endif
