#include "wifiscout/snapshot.hpp"

#include <array>

#include "numfmt.hpp"
#include "wifiscout/error.hpp"

namespace wifiscout {

namespace {

constexpr std::string_view kMagic = "wifiscout-snapshot";
constexpr std::size_t kFieldCount = 15;

void append_escaped(std::string& out, std::string_view text) {
  for (const char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
}

template <typename T, typename Fmt>
void append_optional(std::string& out, const std::optional<T>& v, Fmt fmt) {
  if (v) out += fmt(*v);
}

std::string fmt_real(double v) { return detail::format_double(v); }
std::string fmt_int(std::int64_t v) { return std::to_string(v); }

}  // namespace

Snapshot make_snapshot(const PlatformState& state, const std::optional<Bbox>& bbox) {
  Snapshot snap;
  snap.generated_at = state.last_at();
  snap.bbox = bbox;
  if (bbox) {
    check_bbox(*bbox);
    snap.entries = state.summaries_in(*bbox);
  } else {
    snap.entries = state.summaries();
  }
  return snap;
}

std::string encode_snapshot(const Snapshot& snapshot) {
  std::string out;
  out.reserve(64 + snapshot.entries.size() * 160);
  out += kMagic;
  out += " v" + std::to_string(snapshot.format_version) + ' ' +
         std::to_string(snapshot.generated_at) + ' ';
  out += snapshot.bbox ? format_bbox(*snapshot.bbox) : "all";
  out += '\n';

  for (const auto& e : snapshot.entries) {
    const auto& ap = e.ap;
    append_escaped(out, ap.ap_id);
    out += '\t';
    append_escaped(out, ap.ssid);
    out += '\t';
    out += fmt_real(ap.location.lat);
    out += '\t';
    out += fmt_real(ap.location.lon);
    out += '\t';
    if (ap.place) {
      append_escaped(out, ap.place->street_address);
      out += '\t';
      if (ap.place->floor) append_escaped(out, *ap.place->floor);
      out += '\t';
      if (ap.place->room) append_escaped(out, *ap.place->room);
    } else {
      out += "\t\t";
    }
    out += '\t';
    out += std::to_string(e.review_count);
    out += '\t';
    append_optional(out, e.mean_rating, fmt_real);
    out += '\t';
    if (e.latest_metrics) {
      const auto& m = *e.latest_metrics;
      out += std::to_string(m.rssi_dbm) + '\t' + fmt_real(m.link_speed_mbps) + '\t' +
             fmt_real(m.upload_mbps) + '\t' + fmt_real(m.download_mbps);
    } else {
      out += "\t\t\t";
    }
    out += '\t';
    append_optional(out, e.latest_review_at, fmt_int);
    out += '\t';
    if (e.owner_user_id) append_escaped(out, *e.owner_user_id);
    out += '\n';
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view bytes) : bytes_(bytes) {}

  Snapshot parse() {
    Snapshot snap;
    parse_header(snap);
    while (pos_ < bytes_.size()) {
      snap.entries.push_back(parse_record());
      if (snap.entries.size() > 1) {
        const auto& prev = snap.entries[snap.entries.size() - 2].ap.ap_id;
        if (!(prev < snap.entries.back().ap.ap_id)) {
          fail(record_start_, "records not strictly ascending by ap_id");
        }
      }
    }
    return snap;
  }

 private:
  [[noreturn]] void fail(std::size_t offset, const std::string& reason) const {
    throw MalformedSnapshot(offset, reason);
  }

  // Returns the current line without its '\n' and advances past it.
  std::string_view take_line() {
    const auto nl = bytes_.find('\n', pos_);
    if (nl == std::string_view::npos) fail(bytes_.size(), "truncated record (missing newline)");
    const auto line = bytes_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return line;
  }

  void parse_header(Snapshot& snap) {
    if (bytes_.empty()) fail(0, "empty input");
    const auto line = take_line();
    std::array<std::string_view, 4> parts{};
    std::size_t n = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      const auto sp = line.find(' ', start);
      const auto part = line.substr(start, sp == std::string_view::npos ? line.npos : sp - start);
      if (n == parts.size()) fail(start, "header has too many fields");
      parts[n++] = part;
      if (sp == std::string_view::npos) break;
      start = sp + 1;
    }
    if (n != parts.size() || parts[0] != kMagic) fail(0, "not a wifiscout snapshot header");
    const auto version_offset = static_cast<std::size_t>(parts[1].data() - bytes_.data());
    if (parts[1].size() < 2 || parts[1][0] != 'v') fail(version_offset, "bad version field");
    const auto version = detail::parse_int<int>(parts[1].substr(1));
    if (!version) fail(version_offset, "bad version field");
    if (*version != kSnapshotFormatVersion) {
      throw Error(ErrorCode::kUnsupportedVersion,
                  "unsupported snapshot format version " + std::to_string(*version));
    }
    snap.format_version = *version;
    const auto generated_at = detail::parse_int<Timestamp>(parts[2]);
    if (!generated_at) {
      fail(static_cast<std::size_t>(parts[2].data() - bytes_.data()), "bad generated_at");
    }
    snap.generated_at = *generated_at;
    if (parts[3] != "all") {
      try {
        snap.bbox = parse_bbox(parts[3]);
      } catch (const Error&) {
        fail(static_cast<std::size_t>(parts[3].data() - bytes_.data()), "bad bbox");
      }
    }
  }

  std::string unescape(std::string_view field) const {
    std::string out;
    out.reserve(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
      if (field[i] != '\\') {
        out.push_back(field[i]);
        continue;
      }
      if (i + 1 == field.size()) fail(offset_of(field) + i, "dangling escape");
      switch (field[++i]) {
        case '\\': out.push_back('\\'); break;
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        default: fail(offset_of(field) + i, "unknown escape");
      }
    }
    return out;
  }

  std::size_t offset_of(std::string_view field) const {
    return static_cast<std::size_t>(field.data() - bytes_.data());
  }

  double real(std::string_view field, const char* what) const {
    const auto v = detail::parse_double(field);
    if (!v) fail(offset_of(field), std::string("bad ") + what);
    return *v;
  }

  template <typename Int>
  Int integer(std::string_view field, const char* what) const {
    const auto v = detail::parse_int<Int>(field);
    if (!v) fail(offset_of(field), std::string("bad ") + what);
    return *v;
  }

  std::optional<std::string> optional_text(std::string_view field) const {
    if (field.empty()) return std::nullopt;
    return unescape(field);
  }

  ApSummary parse_record() {
    record_start_ = pos_;
    const auto line = take_line();
    std::array<std::string_view, kFieldCount> f{};
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      if (n == kFieldCount) fail(record_start_ + start, "too many fields");
      f[n++] = line.substr(start, tab == std::string_view::npos ? line.npos : tab - start);
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (n != kFieldCount) fail(record_start_, "expected 15 fields, found " + std::to_string(n));

    ApSummary s;
    auto& ap = s.ap;
    ap.ap_id = unescape(f[0]);
    if (ap.ap_id.starts_with(kExternalIdPrefix)) {
      ap.source = ApSource::kExternal;
    } else {
      ap.bssid = ap.ap_id;
      ap.source = ApSource::kCrowdsensed;
    }
    ap.ssid = unescape(f[1]);
    ap.location = {real(f[2], "lat"), real(f[3], "lon")};
    if (!f[4].empty()) {
      ap.place = PlaceTag{unescape(f[4]), optional_text(f[5]), optional_text(f[6])};
    } else if (!f[5].empty() || !f[6].empty()) {
      fail(offset_of(f[5]), "floor or room without street_address");
    }
    if (auto v = access_point_violations(ap); !v.empty()) fail(record_start_, v.front());

    s.review_count = integer<std::uint64_t>(f[7], "review_count");
    if (!f[8].empty()) s.mean_rating = real(f[8], "mean_rating");
    if (s.mean_rating.has_value() != (s.review_count > 0)) {
      fail(offset_of(f[8]), "mean_rating must be present iff review_count > 0");
    }
    if (s.mean_rating && !(*s.mean_rating >= 1.0 && *s.mean_rating <= 5.0)) {
      fail(offset_of(f[8]), "mean_rating out of range");
    }

    const bool any_metric = !f[9].empty() || !f[10].empty() || !f[11].empty() || !f[12].empty();
    if (any_metric) {
      s.latest_metrics = NetMetrics{integer<int>(f[9], "rssi_dbm"), real(f[10], "link_speed_mbps"),
                                    real(f[11], "upload_mbps"), real(f[12], "download_mbps")};
    }
    if (!f[13].empty()) s.latest_review_at = integer<Timestamp>(f[13], "latest_review_at");
    s.owner_user_id = optional_text(f[14]);
    return s;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
  std::size_t record_start_ = 0;
};

}  // namespace

Snapshot import_snapshot(std::string_view bytes) { return Parser(bytes).parse(); }

}  // namespace wifiscout
