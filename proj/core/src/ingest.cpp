#include "wifiscout/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "numfmt.hpp"
#include "wifiscout/error.hpp"

namespace wifiscout {

namespace {

struct CsvRecord {
  std::size_t line_no = 0;
  std::vector<std::string> fields;
  std::optional<std::string> error;
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes, and line
// breaks. Accepts LF or CRLF line endings.
class CsvReader {
 public:
  explicit CsvReader(std::string_view bytes) : bytes_(bytes) {}

  bool next(CsvRecord& record) {
    if (pos_ >= bytes_.size()) return false;
    record = CsvRecord{};
    record.line_no = line_;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < bytes_.size() && bytes_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        if (!field.empty() || field_was_quoted) {
          if (!record.error) record.error = "stray quote inside unquoted field";
        }
        quoted = true;
        field_was_quoted = true;
      } else if (c == ',') {
        record.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
      } else if (c == '\n' || (c == '\r' && pos_ < bytes_.size() && bytes_[pos_] == '\n')) {
        if (c == '\r') ++pos_;
        ++line_;
        record.fields.push_back(std::move(field));
        return true;
      } else {
        if (field_was_quoted && !record.error) record.error = "text after closing quote";
        field.push_back(c);
      }
    }
    if (quoted && !record.error) record.error = "unterminated quoted field";
    record.fields.push_back(std::move(field));
    return true;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::optional<std::string> non_empty(std::string s) {
  if (s.empty()) return std::nullopt;
  return s;
}

// Empty string on success, else the reason the row is rejected.
std::string parse_row(const CsvRecord& record, ExternalHotspotRow& row) {
  if (record.error) return *record.error;
  if (record.fields.size() != 7) {
    return "expected 7 fields, found " + std::to_string(record.fields.size());
  }
  const auto& f = record.fields;
  std::vector<std::string> reasons;
  row.ssid = f[0];
  if (row.ssid.empty()) reasons.emplace_back("ssid is empty");
  if (const auto lat = detail::parse_double(f[1]); !lat) {
    reasons.emplace_back("lat is not a number");
  } else if (!(*lat >= -90.0 && *lat <= 90.0)) {
    reasons.emplace_back("lat out of range");
  } else {
    row.lat = *lat;
  }
  if (const auto lon = detail::parse_double(f[2]); !lon) {
    reasons.emplace_back("lon is not a number");
  } else if (!(*lon > -180.0 && *lon <= 180.0)) {
    reasons.emplace_back("lon out of range");
  } else {
    row.lon = *lon;
  }
  row.street_address = f[3];
  if (row.street_address.empty()) reasons.emplace_back("street_address is empty");
  row.floor = non_empty(f[4]);
  row.room = non_empty(f[5]);
  row.operator_name = non_empty(f[6]);
  for (const auto* text : {&row.ssid, &row.street_address}) {
    if (!utf8_length(*text)) reasons.emplace_back("field is not valid UTF-8");
  }
  std::string joined;
  for (const auto& r : reasons) {
    if (!joined.empty()) joined += "; ";
    joined += r;
  }
  return joined;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string external_ap_id(std::string_view ssid, double lat, double lon) {
  std::string key(ssid);
  key += '|';
  key += detail::format_double(lat);
  key += '|';
  key += detail::format_double(lon);
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
  return std::string(kExternalIdPrefix) + hex;
}

AccessPoint to_access_point(const ExternalHotspotRow& row) {
  AccessPoint ap;
  ap.ap_id = external_ap_id(row.ssid, row.lat, row.lon);
  ap.ssid = row.ssid;
  ap.location = {row.lat, row.lon};
  ap.place = PlaceTag{row.street_address, row.floor, row.room};
  ap.source = ApSource::kExternal;
  return ap;
}

ImportResult import_external_csv(AdvisoryStore& store, std::string_view bytes, Timestamp at) {
  CsvReader reader(bytes);
  CsvRecord header;
  if (!reader.next(header) || header.error || header.fields.size() != 7) {
    throw Error(ErrorCode::kMalformedHeader,
                "CSV header must be exactly '" + std::string(kExternalCsvHeader) + "'");
  }
  std::string header_line;
  for (const auto& f : header.fields) {
    if (!header_line.empty()) header_line += ',';
    header_line += f;
  }
  if (header_line != kExternalCsvHeader) {
    throw Error(ErrorCode::kMalformedHeader,
                "CSV header must be exactly '" + std::string(kExternalCsvHeader) + "'");
  }

  return store.exclusive([&](AdvisoryStore::Writer& writer) {
    ImportResult result;
    const Timestamp stamp = std::max(at, writer.state().last_at());
    // ap_id -> line that defined it in this file; the first row wins.
    std::map<ApId, std::size_t> seen;
    CsvRecord record;
    while (reader.next(record)) {
      // A trailing blank line is not a row.
      if (record.fields.size() == 1 && record.fields[0].empty() && !record.error) continue;
      ExternalHotspotRow row;
      if (auto reason = parse_row(record, row); !reason.empty()) {
        result.errors.push_back({record.line_no, std::move(reason)});
        continue;
      }
      auto ap = to_access_point(row);
      if (const auto [it, fresh] = seen.emplace(ap.ap_id, record.line_no); !fresh) {
        result.errors.push_back({record.line_no, "duplicate hotspot (same ssid, lat, lon) as line " +
                                                     std::to_string(it->second)});
        continue;
      }
      if (const auto* existing = writer.state().find_ap(ap.ap_id); existing && *existing == ap) {
        continue;
      }
      try {
        writer.append(make_event(std::move(ap), stamp));
        ++result.imported;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kStorageFailure) throw;
        result.errors.push_back({record.line_no, e.what()});
      }
    }
    return result;
  });
}

RewardEvent submit_review(AdvisoryStore& store, const Review& review,
                          const std::optional<NewApFields>& ap_fields) {
  validate_review(review);
  std::optional<AccessPoint> candidate;
  if (ap_fields && is_canonical_bssid(review.ap_id)) {
    AccessPoint ap;
    ap.ap_id = review.ap_id;
    ap.bssid = review.ap_id;
    ap.ssid = ap_fields->ssid;
    ap.location = ap_fields->location;
    ap.place = ap_fields->place ? ap_fields->place : review.place;
    ap.source = ApSource::kCrowdsensed;
    candidate = std::move(ap);
  }
  const auto result = store.append_review(review, candidate);
  if (!result.reward) throw Error(ErrorCode::kInternal, "review produced no reward event");
  return *result.reward;
}

}  // namespace wifiscout
