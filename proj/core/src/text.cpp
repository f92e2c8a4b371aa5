#include "sdfnoc/text.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sdfnoc/error.hpp"

namespace sdfnoc::text {

std::vector<Line> split_lines(std::string_view doc, bool hash_comments) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= doc.size()) {
    std::size_t end = doc.find('\n', pos);
    if (end == std::string_view::npos) end = doc.size();
    std::string_view raw = doc.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;

    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
      if (i >= raw.size()) break;
      if (raw[i] == '#' && (hash_comments || line.words.empty())) break;
      const std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t') ++i;
      line.words.push_back({raw.substr(start, i - start), start + 1});
    }
    if (!line.words.empty()) lines.push_back(std::move(line));
    if (end == doc.size()) break;
    pos = end + 1;
  }
  return lines;
}

bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(s.front())) return false;
  for (char c : s.substr(1)) {
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

std::uint64_t parse_uint(std::string_view s, std::size_t line, std::size_t column) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected unsigned integer, got '" + std::string(s) + "'", line, column);
  }
  return v;
}

std::int64_t parse_int(std::string_view s, std::size_t line, std::size_t column) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected integer, got '" + std::string(s) + "'", line, column);
  }
  return v;
}

std::string_view expect_key(const Word& w, std::string_view key, std::size_t line) {
  if (w.text.size() <= key.size() || !w.text.starts_with(key) || w.text[key.size()] != '=') {
    throw ParseError("expected '" + std::string(key) + "=...', got '" + std::string(w.text) + "'", line,
                     w.column);
  }
  return w.text.substr(key.size() + 1);
}

std::pair<std::uint32_t, std::uint32_t> parse_dims(std::string_view s, std::size_t line, std::size_t column) {
  const auto x = s.find('x');
  if (x == std::string_view::npos) {
    throw ParseError("expected <rows>x<cols>, got '" + std::string(s) + "'", line, column);
  }
  const auto rows = parse_uint(s.substr(0, x), line, column);
  const auto cols = parse_uint(s.substr(x + 1), line, column + x + 1);
  if (rows > 4096 || cols > 4096) throw ParseError("mesh dimension too large", line, column);
  return {static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(cols)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace sdfnoc::text
