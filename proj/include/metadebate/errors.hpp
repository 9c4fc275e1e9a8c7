#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metadebate {

enum class Errc {
  // core model
  DuplicateAgentId,
  EmptyRegistry,
  DuplicateRoleId,
  BadRoleOrdinals,
  TooFewChoices,
  TooManyChoices,
  BadChoiceLetters,
  BadGoldAnswer,
  InvalidSpec,
  // gateway
  BackendUnavailable,
  Timeout,
  UnknownAgent,
  EmptyResponse,
  // meta-debate
  ScoreParseFailure,
  MissingProposalScore,
  NoValidEvaluators,
  // criteria
  UnknownRole,
  DrafterFailure,
  ConstraintViolation,
  // engines
  AnswerExtractionFailure,
  // harness
  ParseError,
  ValidationError,
  ManifestMissing,
  CorruptRun,
  // cli / config
  ConfigError,
  IoError,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::DuplicateAgentId: return "DuplicateAgentId";
    case Errc::EmptyRegistry: return "EmptyRegistry";
    case Errc::DuplicateRoleId: return "DuplicateRoleId";
    case Errc::BadRoleOrdinals: return "BadRoleOrdinals";
    case Errc::TooFewChoices: return "TooFewChoices";
    case Errc::TooManyChoices: return "TooManyChoices";
    case Errc::BadChoiceLetters: return "BadChoiceLetters";
    case Errc::BadGoldAnswer: return "BadGoldAnswer";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::BackendUnavailable: return "BackendUnavailable";
    case Errc::Timeout: return "Timeout";
    case Errc::UnknownAgent: return "UnknownAgent";
    case Errc::EmptyResponse: return "EmptyResponse";
    case Errc::ScoreParseFailure: return "ScoreParseFailure";
    case Errc::MissingProposalScore: return "MissingProposalScore";
    case Errc::NoValidEvaluators: return "NoValidEvaluators";
    case Errc::UnknownRole: return "UnknownRole";
    case Errc::DrafterFailure: return "DrafterFailure";
    case Errc::ConstraintViolation: return "ConstraintViolation";
    case Errc::AnswerExtractionFailure: return "AnswerExtractionFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::ManifestMissing: return "ManifestMissing";
    case Errc::CorruptRun: return "CorruptRun";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

// Single exception type for the whole library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace metadebate
