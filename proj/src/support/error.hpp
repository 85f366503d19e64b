#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbsdde {

enum class ErrorCode {
    InvalidArgument,
    Alignment,       ///< delay lag not a multiple of the grid step
    Bounds,          ///< time or scenario index outside the lattice
    GridMismatch,    ///< lattices/increments on different grids or scenario counts
    KindMismatch,    ///< coefficient used in the wrong role
    Conditioning,    ///< singular regression design
    OracleCap,       ///< binomial tree larger than the configured cap
    NonFinite,       ///< NaN/Inf produced or supplied
    Parse,           ///< malformed problem file
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ConditioningError : public Error {
public:
    ConditioningError(std::size_t time_index, const std::string& what)
        : Error(ErrorCode::Conditioning, what), time_index_(time_index) {}

    std::size_t time_index() const noexcept { return time_index_; }

private:
    std::size_t time_index_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : Error(ErrorCode::Parse, what), line_(line), field_(std::move(field)) {}

    /// 1-based line in the source file; 0 when the problem is file-wide.
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::Alignment: return "alignment";
        case ErrorCode::Bounds: return "bounds";
        case ErrorCode::GridMismatch: return "grid mismatch";
        case ErrorCode::KindMismatch: return "kind mismatch";
        case ErrorCode::Conditioning: return "conditioning";
        case ErrorCode::OracleCap: return "oracle cap";
        case ErrorCode::NonFinite: return "non-finite";
        case ErrorCode::Parse: return "parse";
    }
    return "unknown";
}

}  // namespace fbsdde
