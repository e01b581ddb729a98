#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace guirepair {

enum class ErrorCode {
  InvalidArgument,
  IoError,
  ConfigError,
  // workspace
  MissingField,
  UnreadableImage,
  UnsupportedMediaType,
  NotADirectory,
  EmptyRepository,
  NoDocumentation,
  // provider
  EndpointUnreachable,
  RateLimited,
  ReplayMiss,
  ScriptMiss,
  // retrieval
  DimensionMismatch,
  EmptyScope,
  // knowledge / localize
  UnparseableSelection,
  NoCandidateFiles,
  NoHunksLocalized,
  // repro
  NoCodeBlock,
  GenerationRefused,
  // codeview
  ParseFailure,
  ElementNotFound,
  AmbiguousElement,
  AnchorOutOfRange,
  // patchgen
  NoEditBlocks,
  SearchNotFound,
  AmbiguousMatch,
  UnknownFile,
  NoValidCandidates,
  DiffApplyFailure,
  // validate
  BuildFailure,
  BundleMissing,
  HarnessCrash,
  PageLoadTimeout,
  RenderFailed,
  NoCandidates,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library. what() is "<Code>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace guirepair
