#ifndef JELLYFISH_ERROR_H_
#define JELLYFISH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace jellyfish {

enum class ErrorCode {
  kDuplicateEdge,
  kSelfLoop,
  kNodeOutOfRange,
  kConflictingRelationship,
  kEmptyGraph,
  kNoEdges,
  kInvalidDecomposition,
  kDegenerateInput,
  kInfeasibleProfile,
  kInfeasibleQuota,
  kInvalidConfig,
  kParseError,
  kIoError,
  kSchemaVersionMismatch,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kNodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::kConflictingRelationship: return "ConflictingRelationship";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kNoEdges: return "NoEdges";
    case ErrorCode::kInvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kInfeasibleProfile: return "InfeasibleProfile";
    case ErrorCode::kInfeasibleQuota: return "InfeasibleQuota";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
  }
  return "Unknown";
}

}  // namespace jellyfish

#endif  // JELLYFISH_ERROR_H_
