#include "cubic/errors.hpp"

namespace cubic {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NotInvertible: return "NotInvertible";
        case Errc::NonResidue: return "NonResidue";
        case Errc::SearchExhausted: return "SearchExhausted";
        case Errc::NotCoprime: return "NotCoprime";
        case Errc::BadPrimeClass: return "BadPrimeClass";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::RootCheckFailed: return "RootCheckFailed";
        case Errc::DegenerateRoots: return "DegenerateRoots";
        case Errc::BadRank: return "BadRank";
        case Errc::TrivialGcd: return "TrivialGcd";
        case Errc::BadMagic: return "BadMagic";
        case Errc::UnknownType: return "UnknownType";
        case Errc::Truncated: return "Truncated";
        case Errc::Oversize: return "Oversize";
        case Errc::ProtocolViolation: return "ProtocolViolation";
        case Errc::AckMismatch: return "AckMismatch";
        case Errc::ConnectionFailed: return "ConnectionFailed";
        case Errc::ConnectionClosed: return "ConnectionClosed";
        case Errc::Timeout: return "Timeout";
        case Errc::BadKeyFile: return "BadKeyFile";
        case Errc::BadAddress: return "BadAddress";
    }
    return "Error";
}

}  // namespace cubic
