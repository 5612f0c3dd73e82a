#ifndef MECSWEEP_TRACE_HPP
#define MECSWEEP_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mecsweep {
namespace trace {

// One crowd-sourced observation: who was where, on which cell, running
// which app, and how many bytes moved.
struct TraceRecord {
  std::int64_t timestamp = 0;  // UTC epoch seconds
  std::string user_id;
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
  std::string operator_name;
  std::string cell_id;
  std::string lac;
  std::string app;  // client package name, e.g. COM.FACEBOOK.KATANA
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;

  std::uint64_t total_bytes() const { return bytes_up + bytes_down; }

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

// Traffic categories tracked alongside the total. Every record maps to
// exactly one of the first four; kTotal is the no-filter pseudo-category.
enum class AppCategory : int {
  kFacebook = 0,
  kYouTube = 1,
  kMaps = 2,
  kOther = 3,
  kTotal = 4,
};

inline constexpr int kNumAppCategories = 4;  // excluding kTotal

// Maps a client package name to its category; kOther is the fallback.
// Matching is exact on the upper-cased package name.
AppCategory categorize(std::string_view app);

// True when a record of category `cat` passes the filter `filter`.
inline bool category_matches(AppCategory filter, AppCategory cat) {
  return filter == AppCategory::kTotal || filter == cat;
}

std::string_view category_name(AppCategory cat);

// Parses "facebook|youtube|maps|other|total" (case-insensitive).
// Throws std::invalid_argument on anything else.
AppCategory category_from_name(std::string_view name);

enum class Format { kCsv, kJsonl };

// A skipped input line and why it was skipped. Line numbers are 1-based
// and count the header for CSV.
struct Diagnostic {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  std::vector<TraceRecord> records;
  std::vector<Diagnostic> diagnostics;
};

// Fatal input problems: unreadable stream, bad header, mixed timestamp
// forms. Per-line schema violations are diagnostics, not exceptions.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV column order; a header row with exactly these names is required.
inline constexpr std::string_view kCsvHeader =
    "timestamp,user_id,lat,lon,operator,cell_id,lac,app,bytes_up,bytes_down";

// Reads records in the declared format. Timestamps may be integer epoch
// seconds or RFC 3339 text; the form is auto-detected from the first
// record and mixing forms within one file is a fatal error.
ParseResult parse_records(std::istream& in, Format format);

void write_csv(std::ostream& out, std::span<const TraceRecord> records);
void write_jsonl(std::ostream& out, std::span<const TraceRecord> records);

// Splits records by operator, preserving relative order within each key.
std::map<std::string, std::vector<TraceRecord>> partition_by_operator(
    std::span<const TraceRecord> records);

// Parses an RFC 3339 timestamp ("2014-10-05T14:30:00Z", optional
// fractional seconds and numeric offsets) to UTC epoch seconds.
// Throws ParseError on malformed input.
std::int64_t parse_rfc3339(std::string_view text);

}  // namespace trace
}  // namespace mecsweep

#endif  // MECSWEEP_TRACE_HPP
