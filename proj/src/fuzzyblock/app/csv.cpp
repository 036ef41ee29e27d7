#include "fuzzyblock/app/csv.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "fuzzyblock/error.hpp"

namespace fuzzyblock::app {

namespace {

bool needs_quotes(std::string_view f) { return f.find_first_of(",\"\r\n") != std::string_view::npos; }

std::string quote(std::string_view f) {
  if (!needs_quotes(f)) return std::string(f);
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int CsvTable::require_column(std::string_view name) const {
  const int c = column(name);
  if (c < 0) fail(ErrorCode::Schema, fmt::format("csv is missing column '{}'", name));
  return c;
}

double CsvTable::number(std::size_t row, int col) const {
  const std::string& f = rows.at(row).at(static_cast<std::size_t>(col));
  double v = 0.0;
  const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || p != f.data() + f.size()) {
    if (f == "inf" || f == "stable") return INFINITY;
    fail(ErrorCode::Parse, fmt::format("csv row {}, column '{}': '{}' is not a number", row + 2, header[col], f));
  }
  return v;
}

CsvTable parse_csv(std::string_view text, const std::string& label) {
  CsvTable t;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false, at_line_start = true, field_quoted = false;
  std::size_t line = 1;
  auto end_record = [&] {
    record.push_back(field);
    field.clear();
    field_quoted = false;
    if (t.header.empty()) {
      t.header = std::move(record);
    } else if (!(record.size() == 1 && record[0].empty())) {
      if (record.size() != t.header.size()) {
        fail(ErrorCode::Parse, fmt::format("{}: line {} has {} fields, header has {}", label, line, record.size(),
                                           t.header.size()));
      }
      t.rows.push_back(std::move(record));
    }
    record.clear();
    at_line_start = true;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (at_line_start && t.header.empty() && c == '#') {
      const auto nl = text.find('\n', i);
      std::string_view body = text.substr(i + 1, nl == std::string_view::npos ? std::string_view::npos : nl - i - 1);
      if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      t.comments.emplace_back(body);
      if (nl == std::string_view::npos) break;
      i = nl;
      ++line;
      continue;
    }
    at_line_start = false;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_quoted) {
      in_quotes = field_quoted = true;
    } else if (c == ',') {
      record.push_back(field);
      field.clear();
      field_quoted = false;
    } else if (c == '\n') {
      end_record();
      ++line;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // CRLF tolerated on input
    } else {
      field += c;
    }
  }
  if (in_quotes) fail(ErrorCode::Parse, label + ": unterminated quoted field");
  if (!field.empty() || !record.empty()) end_record();
  if (t.header.empty()) fail(ErrorCode::Parse, label + ": missing header row");
  return t;
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  for (const auto& c : t.comments) out += "# " + c + "\n";
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + quote(r[i]);
    out += "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::string fmt_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  return fmt::format("{}", v);
}

}  // namespace fuzzyblock::app
