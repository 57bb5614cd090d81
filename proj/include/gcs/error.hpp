#ifndef GCS_ERROR_HPP
#define GCS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace gcs {

enum class ErrorCode {
  kCyclicRule,
  kDanglingReference,
  kLengthMismatch,
  kNotCNF,
  kUnreachable,
  kEmptyInput,
  kPositionOutOfRange,
  kOccurrenceOutOfRange,
  kInvalidSymbol,
  kCyclicInput,
  kNoSink,
  kUnknownNode,
  kNotASink,
  kPathLimitExceeded,
  kIoError,
  kInvalidGrammarFile,
  kInvalidDagFile,
  kCorruptIndex,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gcs

#endif  // GCS_ERROR_HPP
