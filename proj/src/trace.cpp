#include "mecsweep/trace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>

#include "json.hpp"

namespace mecsweep {
namespace trace {

namespace {

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + i, s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[m - 1];
}

// Splits one CSV line into fields, honoring RFC 4180 quoting.
// Returns nullopt on malformed quoting.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      if (!current.empty()) return std::nullopt;  // quote inside bare field
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
    ++i;
  }
  if (in_quotes) return std::nullopt;
  fields.push_back(std::move(current));
  return fields;
}

void append_csv_field(std::string& out, std::string_view field) {
  if (field.find_first_of("\n\r") != std::string_view::npos) {
    throw std::invalid_argument("csv field contains a newline");
  }
  if (field.find_first_of(",\"") == std::string_view::npos) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  for (const int prec : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// Field-level validation shared by both formats. Returns an error message
// for the first violated invariant, or nullopt when the record is valid.
std::optional<std::string> validate(const TraceRecord& r) {
  if (r.timestamp <= 0) return "timestamp must be positive";
  if (r.lat < -90.0 || r.lat > 90.0) return "latitude out of range";
  if (r.lon < -180.0 || r.lon > 180.0) return "longitude out of range";
  return std::nullopt;
}

enum class TimestampMode { kUnset, kEpoch, kRfc3339 };

const char* mode_name(TimestampMode m) {
  return m == TimestampMode::kEpoch ? "epoch seconds" : "RFC 3339";
}

struct TimestampParser {
  TimestampMode mode = TimestampMode::kUnset;

  // Returns the epoch seconds or an error message. Throws ParseError when
  // the line's form contradicts the form already seen in this file.
  std::optional<std::int64_t> parse(std::string_view text, std::size_t line,
                                    std::string* error) {
    const TimestampMode shape =
        is_integer_token(text) ? TimestampMode::kEpoch : TimestampMode::kRfc3339;
    if (mode != TimestampMode::kUnset && shape != mode) {
      throw ParseError("line " + std::to_string(line) +
                       ": mixed timestamp forms in one file (expected " +
                       mode_name(mode) + ")");
    }
    std::optional<std::int64_t> ts;
    if (shape == TimestampMode::kEpoch) {
      ts = parse_number<std::int64_t>(text);
      if (!ts) {
        *error = "invalid timestamp";
        return std::nullopt;
      }
    } else {
      try {
        ts = parse_rfc3339(text);
      } catch (const ParseError& e) {
        *error = e.what();
        return std::nullopt;
      }
    }
    mode = shape;  // lock the form on first success
    return ts;
  }
};

struct LineOutcome {
  std::optional<TraceRecord> record;
  std::string error;
};

LineOutcome parse_csv_fields(const std::vector<std::string>& fields,
                             std::size_t line, TimestampParser& ts_parser) {
  LineOutcome out;
  if (fields.size() != 10) {
    out.error = "expected 10 fields, got " + std::to_string(fields.size());
    return out;
  }
  TraceRecord r;
  std::string ts_error;
  const auto ts = ts_parser.parse(fields[0], line, &ts_error);
  if (!ts) {
    out.error = ts_error;
    return out;
  }
  r.timestamp = *ts;
  r.user_id = fields[1];
  const auto lat = parse_double(fields[2]);
  if (!lat) {
    out.error = "invalid lat";
    return out;
  }
  r.lat = *lat;
  const auto lon = parse_double(fields[3]);
  if (!lon) {
    out.error = "invalid lon";
    return out;
  }
  r.lon = *lon;
  r.operator_name = fields[4];
  r.cell_id = fields[5];
  r.lac = fields[6];
  r.app = fields[7];
  const auto up = parse_number<std::uint64_t>(fields[8]);
  if (!up) {
    out.error = "invalid bytes_up";
    return out;
  }
  r.bytes_up = *up;
  const auto down = parse_number<std::uint64_t>(fields[9]);
  if (!down) {
    out.error = "invalid bytes_down";
    return out;
  }
  r.bytes_down = *down;
  if (auto err = validate(r)) {
    out.error = *err;
    return out;
  }
  out.record = std::move(r);
  return out;
}

LineOutcome parse_json_line(const std::string& line, std::size_t line_no,
                            TimestampParser& ts_parser) {
  LineOutcome out;
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    out.error = "invalid JSON object";
    return out;
  }
  for (const char* key : {"timestamp", "user_id", "lat", "lon", "operator",
                          "cell_id", "lac", "app", "bytes_up", "bytes_down"}) {
    if (!j.contains(key)) {
      out.error = std::string("missing field '") + key + "'";
      return out;
    }
  }
  TraceRecord r;
  const auto& ts_field = j["timestamp"];
  std::string ts_text;
  if (ts_field.is_number_integer()) {
    ts_text = ts_field.dump();
  } else if (ts_field.is_string()) {
    ts_text = ts_field.get<std::string>();
  } else {
    out.error = "invalid timestamp";
    return out;
  }
  std::string ts_error;
  const auto ts = ts_parser.parse(ts_text, line_no, &ts_error);
  if (!ts) {
    out.error = ts_error;
    return out;
  }
  r.timestamp = *ts;

  auto get_string = [&](const char* key, std::string* dst) {
    if (!j[key].is_string()) {
      out.error = std::string("field '") + key + "' must be a string";
      return false;
    }
    *dst = j[key].get<std::string>();
    return true;
  };
  auto get_number = [&](const char* key, double* dst) {
    if (!j[key].is_number()) {
      out.error = std::string("field '") + key + "' must be a number";
      return false;
    }
    *dst = j[key].get<double>();
    return true;
  };
  auto get_bytes = [&](const char* key, std::uint64_t* dst) {
    if (!j[key].is_number_integer() || (j[key].is_number_integer() &&
                                        !j[key].is_number_unsigned() &&
                                        j[key].get<std::int64_t>() < 0)) {
      out.error = std::string(key) + " must be a non-negative integer";
      return false;
    }
    *dst = j[key].get<std::uint64_t>();
    return true;
  };

  if (!get_string("user_id", &r.user_id) || !get_number("lat", &r.lat) ||
      !get_number("lon", &r.lon) ||
      !get_string("operator", &r.operator_name) ||
      !get_string("cell_id", &r.cell_id) || !get_string("lac", &r.lac) ||
      !get_string("app", &r.app) || !get_bytes("bytes_up", &r.bytes_up) ||
      !get_bytes("bytes_down", &r.bytes_down)) {
    return out;
  }
  if (auto err = validate(r)) {
    out.error = *err;
    return out;
  }
  out.record = std::move(r);
  return out;
}

}  // namespace

AppCategory categorize(std::string_view app) {
  const std::string upper = to_upper(app);
  if (upper == "COM.FACEBOOK.KATANA") return AppCategory::kFacebook;
  if (upper == "COM.GOOGLE.ANDROID.YOUTUBE") return AppCategory::kYouTube;
  if (upper == "COM.GOOGLE.ANDROID.APPS.MAPS") return AppCategory::kMaps;
  return AppCategory::kOther;
}

std::string_view category_name(AppCategory cat) {
  switch (cat) {
    case AppCategory::kFacebook: return "facebook";
    case AppCategory::kYouTube: return "youtube";
    case AppCategory::kMaps: return "maps";
    case AppCategory::kOther: return "other";
    case AppCategory::kTotal: return "total";
  }
  return "total";
}

AppCategory category_from_name(std::string_view name) {
  const std::string lower = [&] {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
  }();
  if (lower == "facebook") return AppCategory::kFacebook;
  if (lower == "youtube") return AppCategory::kYouTube;
  if (lower == "maps") return AppCategory::kMaps;
  if (lower == "other") return AppCategory::kOther;
  if (lower == "total") return AppCategory::kTotal;
  throw std::invalid_argument("unknown app category: " + std::string(name));
}

std::int64_t parse_rfc3339(std::string_view text) {
  const auto fail = [&]() -> std::int64_t {
    throw ParseError("invalid RFC 3339 timestamp: " + std::string(text));
  };
  auto digits = [&](std::size_t pos, std::size_t count) -> std::int64_t {
    if (pos + count > text.size()) fail();
    std::int64_t v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail();
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  auto expect = [&](std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) fail();
  };

  if (text.size() < 20) fail();
  const std::int64_t year = digits(0, 4);
  expect(4, '-');
  const std::int64_t month = digits(5, 2);
  expect(7, '-');
  const std::int64_t day = digits(8, 2);
  if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') fail();
  const std::int64_t hour = digits(11, 2);
  expect(13, ':');
  const std::int64_t minute = digits(14, 2);
  expect(16, ':');
  const std::int64_t second = digits(17, 2);

  if (month < 1 || month > 12) fail();
  if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month))) fail();
  if (hour > 23 || minute > 59 || second > 60) fail();

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (pos == start) fail();  // bare dot
  }

  std::int64_t offset = 0;
  if (pos >= text.size()) fail();  // offset is mandatory
  if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '+' ? 1 : -1;
    const std::int64_t oh = digits(pos + 1, 2);
    expect(pos + 3, ':');
    const std::int64_t om = digits(pos + 4, 2);
    if (oh > 23 || om > 59) fail();
    offset = sign * (oh * 3600 + om * 60);
    pos += 6;
  } else {
    fail();
  }
  if (pos != text.size()) fail();

  const std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month),
                      static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

ParseResult parse_records(std::istream& in, Format format) {
  if (in.fail()) {
    throw ParseError("unreadable input stream");
  }
  ParseResult result;
  TimestampParser ts_parser;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (format == Format::kCsv && !header_seen) {
      if (line != kCsvHeader) {
        throw ParseError("line 1: bad or missing CSV header (expected \"" +
                         std::string(kCsvHeader) + "\")");
      }
      header_seen = true;
      continue;
    }

    LineOutcome outcome;
    if (format == Format::kCsv) {
      const auto fields = split_csv_line(line);
      if (!fields) {
        outcome.error = "malformed quoting";
      } else {
        outcome = parse_csv_fields(*fields, line_no, ts_parser);
      }
    } else {
      outcome = parse_json_line(line, line_no, ts_parser);
    }

    if (outcome.record) {
      result.records.push_back(std::move(*outcome.record));
    } else {
      result.diagnostics.push_back({line_no, std::move(outcome.error)});
    }
  }
  if (in.bad()) {
    throw ParseError("unreadable input stream");
  }
  return result;
}

void write_csv(std::ostream& out, std::span<const TraceRecord> records) {
  out << kCsvHeader << '\n';
  std::string row;
  for (const auto& r : records) {
    row.clear();
    row += std::to_string(r.timestamp);
    row += ',';
    append_csv_field(row, r.user_id);
    row += ',';
    row += format_double(r.lat);
    row += ',';
    row += format_double(r.lon);
    row += ',';
    append_csv_field(row, r.operator_name);
    row += ',';
    append_csv_field(row, r.cell_id);
    row += ',';
    append_csv_field(row, r.lac);
    row += ',';
    append_csv_field(row, r.app);
    row += ',';
    row += std::to_string(r.bytes_up);
    row += ',';
    row += std::to_string(r.bytes_down);
    row += '\n';
    out << row;
  }
}

void write_jsonl(std::ostream& out, std::span<const TraceRecord> records) {
  for (const auto& r : records) {
    nlohmann::json j{
        {"timestamp", r.timestamp}, {"user_id", r.user_id},
        {"lat", r.lat},             {"lon", r.lon},
        {"operator", r.operator_name}, {"cell_id", r.cell_id},
        {"lac", r.lac},             {"app", r.app},
        {"bytes_up", r.bytes_up},   {"bytes_down", r.bytes_down},
    };
    out << j.dump() << '\n';
  }
}

std::map<std::string, std::vector<TraceRecord>> partition_by_operator(
    std::span<const TraceRecord> records) {
  std::map<std::string, std::vector<TraceRecord>> by_operator;
  for (const auto& r : records) {
    by_operator[r.operator_name].push_back(r);
  }
  return by_operator;
}

}  // namespace trace
}  // namespace mecsweep
