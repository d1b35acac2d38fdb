#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fixrank {

// Every failure the toolchain reports maps to one of these; the CLI turns
// the code into its process exit status.
enum class ErrorCode {
  InvalidArgument = 2,
  IOFailure = 3,
  UnknownFeature = 10,
  EmptyCategory = 11,
  CatalogMismatch = 12,
  VersionMismatch = 13,
  ChecksumMismatch = 14,
  RepoUnreadable = 20,
  BranchMissing = 21,
  MalformedDiff = 22,
  MalformedReviewFile = 30,
  UnknownTripleId = 31,
  Unparseable = 40,
  EmptyCorpus = 50,
  InsufficientRecords = 51,
  EmptyPatchSet = 60,
  MixedBugIds = 61,
  EmptyModel = 62,
  EmptyOutcomes = 70,
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

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fixrank
