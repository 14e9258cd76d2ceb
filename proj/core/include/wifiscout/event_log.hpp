#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wifiscout/store.hpp"

namespace wifiscout {

// Append-only event file. Each record is a 4-byte little-endian payload
// length followed by the event as compact JSON. Records are in seq order.
class FileEventLog : public EventSink {
 public:
  // Opens (creating if needed) the log for appending. `sync_every` = 1
  // fsyncs after each write; n > 1 fsyncs after every n writes.
  explicit FileEventLog(std::filesystem::path path, unsigned sync_every = 1);
  ~FileEventLog() override;

  FileEventLog(const FileEventLog&) = delete;
  FileEventLog& operator=(const FileEventLog&) = delete;

  // Writes the batch with one write(2); on failure the file is truncated
  // back to its prior length. Throws Error{kStorageFailure}.
  void write(std::span<const Event> events) override;

  void sync();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  unsigned sync_every_;
  unsigned unsynced_ = 0;
  int fd_ = -1;
};

std::string encode_log_records(std::span<const Event> events);

// Decodes records; throws CorruptLog on a truncated or unparsable record or
// a seq that does not follow its predecessor.
std::vector<Event> decode_log_records(std::string_view bytes);

// Missing file reads as an empty log.
std::vector<Event> read_event_log(const std::filesystem::path& path);

}  // namespace wifiscout
