#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wifiscout {

// Every failure the platform can report. The API layer folds these onto its
// closed set of wire codes (see api_code()).
enum class ErrorCode {
  kValidationFailed,
  kMalformedBssid,
  kUnknownUser,
  kUnknownAp,
  kDuplicateUser,
  kInvalidBbox,
  kStaleTimestamp,
  kNonMonotonicTimestamp,
  kMalformedBody,
  kUnsupportedVersion,
  kMalformedSnapshot,
  kMalformedHeader,
  kCorruptLog,
  kStorageFailure,
  kInternal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<std::string> details = {})
      : std::runtime_error(std::move(message)), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

// Carries the byte offset at which snapshot parsing failed.
class MalformedSnapshot : public Error {
 public:
  MalformedSnapshot(std::size_t offset, const std::string& reason)
      : Error(ErrorCode::kMalformedSnapshot,
              "malformed snapshot at byte " + std::to_string(offset) + ": " + reason),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Carries the sequence number of the first bad log record.
class CorruptLog : public Error {
 public:
  CorruptLog(std::uint64_t seq, const std::string& reason)
      : Error(ErrorCode::kCorruptLog, "corrupt log at seq " + std::to_string(seq) + ": " + reason),
        seq_(seq) {}

  std::uint64_t seq() const noexcept { return seq_; }

 private:
  std::uint64_t seq_;
};

}  // namespace wifiscout
