#pragma once

#include <stdexcept>
#include <string>

namespace wakegate {

enum class ErrorCode {
  // audio_io
  NotWav,
  UnsupportedFormat,
  TruncatedFile,
  IoError,
  SilentInput,
  // dsp
  TooShort,
  InvalidRange,
  InvalidConfig,
  // stream_state
  UnknownWakewordKey,
  InsufficientAudio,
  // backbone / wakeword
  ShapeMismatch,
  EmptyBatch,
  SingleClassData,
  // speaker_auth
  ZeroVector,
  DimMismatch,
  WrongChunkSize,
  DegenerateAudio,
  EmptyEnrollment,
  // augment
  SilentSignal,
  SilentNoise,
  EmptyRir,
  InvalidBand,
  NonPositiveDrive,
  // evalkit
  EmptyPositives,
  EmptyNegatives,
  // pipeline / cli
  UnknownClient,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace wakegate
