#include "gu/error.hpp"

namespace gu {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::InvalidRatio: return "InvalidRatio";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::EmptyRequest: return "EmptyRequest";
        case ErrorCode::MissingTarget: return "MissingTarget";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::MissingLabels: return "MissingLabels";
        case ErrorCode::NoEdges: return "NoEdges";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::CGDiverged: return "CGDiverged";
        case ErrorCode::WrongBackbone: return "WrongBackbone";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::InsufficientCandidates: return "InsufficientCandidates";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownMethod: return "UnknownMethod";
        case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

int exit_code_for(ErrorCode code) {
    // 1 is reserved for uncategorized failures.
    return 10 + static_cast<int>(code);
}

} // namespace gu
