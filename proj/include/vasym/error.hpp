#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vasym {

enum class ErrorKind {
    Syntax,
    NotModerate,
    NonInvertibleDivisor,
    Unsupported,
    NotVFinite,
    DomainError,
    IndexOutOfRange,
    InvariantViolation,
    InsufficientData,
    NullCandidate,
    IllConditioned,
    NoValuationGap,
    NonConvergent,
    PrecisionTooLow,
    Io,
};

constexpr std::string_view to_string(ErrorKind k) noexcept
{
    switch (k) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::NotModerate: return "NotModerate";
    case ErrorKind::NonInvertibleDivisor: return "NonInvertibleDivisor";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::NotVFinite: return "NotVFinite";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NullCandidate: return "NullCandidate";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NoValuationGap: return "NoValuationGap";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

/// True for failures of a numerical procedure (as opposed to a domain or
/// input error). The CLI maps these to a distinct exit status.
constexpr bool is_numeric_failure(ErrorKind k) noexcept
{
    return k == ErrorKind::IllConditioned || k == ErrorKind::NonConvergent
        || k == ErrorKind::PrecisionTooLow || k == ErrorKind::NoValuationGap;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure carrying the byte offset into the source text.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, const std::string& what)
        : Error(ErrorKind::Syntax, what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace vasym
