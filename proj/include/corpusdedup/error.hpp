#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corpusdedup {

enum class ErrorCode {
  // corpus
  UnbalancedBraces,
  NotUtf8,
  MalformedRecord,
  UnknownId,
  // textprep
  VocabMissingSymbol,
  UnknownTokenId,
  TokenIdOverflow,
  // minhash / lsh
  InvalidK,
  KMismatch,
  InvalidThreshold,
  DuplicateId,
  HasherMismatch,
  FormatVersionMismatch,
  ChecksumMismatch,
  // dedup
  ManifestMismatch,
  MissingPart,
  JobMismatch,
  // shared
  IoFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the HTTP layer can map it to an exit code / status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace corpusdedup
