#include "corpusdedup/error.hpp"

namespace corpusdedup {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnbalancedBraces: return "UnbalancedBraces";
    case ErrorCode::NotUtf8: return "NotUtf8";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::VocabMissingSymbol: return "VocabMissingSymbol";
    case ErrorCode::UnknownTokenId: return "UnknownTokenId";
    case ErrorCode::TokenIdOverflow: return "TokenIdOverflow";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::KMismatch: return "KMismatch";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::HasherMismatch: return "HasherMismatch";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::ManifestMismatch: return "ManifestMismatch";
    case ErrorCode::MissingPart: return "MissingPart";
    case ErrorCode::JobMismatch: return "JobMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace corpusdedup
