#include "guirepair/error.hpp"

namespace guirepair {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::UnreadableImage: return "UnreadableImage";
    case ErrorCode::UnsupportedMediaType: return "UnsupportedMediaType";
    case ErrorCode::NotADirectory: return "NotADirectory";
    case ErrorCode::EmptyRepository: return "EmptyRepository";
    case ErrorCode::NoDocumentation: return "NoDocumentation";
    case ErrorCode::EndpointUnreachable: return "EndpointUnreachable";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::ReplayMiss: return "ReplayMiss";
    case ErrorCode::ScriptMiss: return "ScriptMiss";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyScope: return "EmptyScope";
    case ErrorCode::UnparseableSelection: return "UnparseableSelection";
    case ErrorCode::NoCandidateFiles: return "NoCandidateFiles";
    case ErrorCode::NoHunksLocalized: return "NoHunksLocalized";
    case ErrorCode::NoCodeBlock: return "NoCodeBlock";
    case ErrorCode::GenerationRefused: return "GenerationRefused";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::ElementNotFound: return "ElementNotFound";
    case ErrorCode::AmbiguousElement: return "AmbiguousElement";
    case ErrorCode::AnchorOutOfRange: return "AnchorOutOfRange";
    case ErrorCode::NoEditBlocks: return "NoEditBlocks";
    case ErrorCode::SearchNotFound: return "SearchNotFound";
    case ErrorCode::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorCode::UnknownFile: return "UnknownFile";
    case ErrorCode::NoValidCandidates: return "NoValidCandidates";
    case ErrorCode::DiffApplyFailure: return "DiffApplyFailure";
    case ErrorCode::BuildFailure: return "BuildFailure";
    case ErrorCode::BundleMissing: return "BundleMissing";
    case ErrorCode::HarnessCrash: return "HarnessCrash";
    case ErrorCode::PageLoadTimeout: return "PageLoadTimeout";
    case ErrorCode::RenderFailed: return "RenderFailed";
    case ErrorCode::NoCandidates: return "NoCandidates";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace guirepair
