#pragma once

#include <stdexcept>
#include <string>

#include "cubic/bigint.hpp"

namespace cubic {

// Every failure mode the library reports deliberately. Precondition abuse
// (null sizes, malformed arguments) throws std::invalid_argument instead.
enum class Errc {
    NotInvertible,
    NonResidue,
    SearchExhausted,
    NotCoprime,
    BadPrimeClass,
    OutOfRange,
    RootCheckFailed,
    DegenerateRoots,
    BadRank,
    TrivialGcd,
    BadMagic,
    UnknownType,
    Truncated,
    Oversize,
    ProtocolViolation,
    AckMismatch,
    ConnectionFailed,
    ConnectionClosed,
    Timeout,
    BadKeyFile,
    BadAddress,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

// mod_inv failure; carries the nontrivial gcd it found.
class NotInvertibleError : public Error {
public:
    NotInvertibleError(BigInt gcd_found, const std::string& message)
        : Error(Errc::NotInvertible, message), gcd_(std::move(gcd_found)) {}

    const BigInt& gcd() const { return gcd_; }

private:
    BigInt gcd_;
};

}  // namespace cubic
