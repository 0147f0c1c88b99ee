#pragma once

#include <stdexcept>
#include <string>

namespace mcsp {

enum class ErrorCode {
    InvalidValue,
    MismatchedEdgeSet,
    EmptyGraph,
    ArithmeticOverflow,
    PreconditionViolated,
    EmptyHop,
    InvalidVertex,
    InvalidProvenance,
    TooLarge,
    BucketEmpty,
    BadIndexFormat,
    VersionMismatch,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidValue: return "InvalidValue";
        case ErrorCode::MismatchedEdgeSet: return "MismatchedEdgeSet";
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::EmptyHop: return "EmptyHop";
        case ErrorCode::InvalidVertex: return "InvalidVertex";
        case ErrorCode::InvalidProvenance: return "InvalidProvenance";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::BucketEmpty: return "BucketEmpty";
        case ErrorCode::BadIndexFormat: return "BadIndexFormat";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, ErrorCode code, const std::string& msg) {
    if (!ok) fail(code, msg);
}

}  // namespace mcsp
