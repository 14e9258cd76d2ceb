#include "wifiscout/event_log.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json_codec.hpp"
#include "wifiscout/error.hpp"

namespace wifiscout {

namespace {

constexpr std::size_t kLengthPrefix = 4;
constexpr std::uint32_t kMaxRecordBytes = 64u << 20;

std::string errno_message(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

}  // namespace

std::string encode_log_records(std::span<const Event> events) {
  std::string out;
  for (const auto& event : events) {
    const auto payload = codec::to_json(event).dump();
    const auto len = static_cast<std::uint32_t>(payload.size());
    for (int shift = 0; shift < 32; shift += 8) {
      out.push_back(static_cast<char>((len >> shift) & 0xFFu));
    }
    out += payload;
  }
  return out;
}

std::vector<Event> decode_log_records(std::string_view bytes) {
  std::vector<Event> events;
  std::size_t pos = 0;
  std::uint64_t expected = 1;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kLengthPrefix) throw CorruptLog(expected, "truncated length prefix");
    std::uint32_t len = 0;
    for (std::size_t i = 0; i < kLengthPrefix; ++i) {
      len |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    }
    pos += kLengthPrefix;
    if (len > kMaxRecordBytes || bytes.size() - pos < len) {
      throw CorruptLog(expected, "truncated record");
    }
    Event event;
    try {
      event = codec::event_from_json(codec::json::parse(bytes.substr(pos, len)));
    } catch (const codec::json::exception& e) {
      throw CorruptLog(expected, std::string("unparsable record: ") + e.what());
    } catch (const Error& e) {
      throw CorruptLog(expected, e.what());
    }
    if (event.seq != expected) {
      throw CorruptLog(expected, "found seq " + std::to_string(event.seq));
    }
    events.push_back(std::move(event));
    pos += len;
    ++expected;
  }
  return events;
}

std::vector<Event> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return {};
    throw Error(ErrorCode::kStorageFailure, "cannot open event log " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_log_records(bytes);
}

FileEventLog::FileEventLog(std::filesystem::path path, unsigned sync_every)
    : path_(std::move(path)), sync_every_(sync_every == 0 ? 1 : sync_every) {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error(ErrorCode::kStorageFailure, errno_message("open " + path_.string()));
}

FileEventLog::~FileEventLog() {
  if (fd_ >= 0) {
    if (unsynced_ > 0) ::fsync(fd_);
    ::close(fd_);
  }
}

void FileEventLog::write(std::span<const Event> events) {
  const auto bytes = encode_log_records(events);
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    throw Error(ErrorCode::kStorageFailure, errno_message("fstat " + path_.string()));
  }
  std::size_t written = 0;
  while (written < bytes.size()) {
    const auto n = ::write(fd_, bytes.data() + written, bytes.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const auto message = errno_message("write " + path_.string());
      // Drop the partial batch so the file never holds half a record.
      if (::ftruncate(fd_, st.st_size) != 0) {
        throw Error(ErrorCode::kStorageFailure, message + " (truncate failed too)");
      }
      throw Error(ErrorCode::kStorageFailure, message);
    }
    written += static_cast<std::size_t>(n);
  }
  if (++unsynced_ >= sync_every_) sync();
}

void FileEventLog::sync() {
  if (::fsync(fd_) != 0) throw Error(ErrorCode::kStorageFailure, errno_message("fsync " + path_.string()));
  unsynced_ = 0;
}

}  // namespace wifiscout
