#pragma once

#include <stdexcept>
#include <string>

namespace itsa {

// Error conditions raised across the library. Each maps to one failure
// mode of a public operation; tests match on the code, messages are for
// humans.
enum class Errc {
  EmptyInput,
  EmptySegment,
  InvalidProbability,
  TooFewObservations,
  SingularDesign,
  DegenerateVariance,
  InvalidDf,
  TooFewPoints,
  EmptySlopeSample,
  InsufficientReplicates,
  InvalidAlpha,
  DegenerateResiduals,
  InvalidLag,
  MalformedHeader,
  NonNumericCell,
  DuplicateTime,
  NonPositiveValue,
  InvalidConfig,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EmptySegment: return "EmptySegment";
    case Errc::InvalidProbability: return "InvalidProbability";
    case Errc::TooFewObservations: return "TooFewObservations";
    case Errc::SingularDesign: return "SingularDesign";
    case Errc::DegenerateVariance: return "DegenerateVariance";
    case Errc::InvalidDf: return "InvalidDf";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::EmptySlopeSample: return "EmptySlopeSample";
    case Errc::InsufficientReplicates: return "InsufficientReplicates";
    case Errc::InvalidAlpha: return "InvalidAlpha";
    case Errc::DegenerateResiduals: return "DegenerateResiduals";
    case Errc::InvalidLag: return "InvalidLag";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::NonNumericCell: return "NonNumericCell";
    case Errc::DuplicateTime: return "DuplicateTime";
    case Errc::NonPositiveValue: return "NonPositiveValue";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace itsa
