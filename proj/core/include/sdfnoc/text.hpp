#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sdfnoc::text {

/// Whitespace-separated word with its 1-based column.
struct Word {
  std::string_view text;
  std::size_t column;
};

struct Line {
  std::size_t number;  // 1-based
  std::vector<Word> words;
};

/// Splits a document into non-blank lines of words. When `hash_comments` is
/// set, a '#' at the start of a word begins a comment running to end of line.
/// Otherwise only lines whose first word starts with '#' are comments.
std::vector<Line> split_lines(std::string_view doc, bool hash_comments);

bool is_ident(std::string_view s);

/// Strict unsigned decimal; throws ParseError at `line`/`column` on failure.
std::uint64_t parse_uint(std::string_view s, std::size_t line, std::size_t column);
std::int64_t parse_int(std::string_view s, std::size_t line, std::size_t column);

/// Parses "key=value" requiring the given key; returns the value.
std::string_view expect_key(const Word& w, std::string_view key, std::size_t line);

/// Parses "<rows>x<cols>".
std::pair<std::uint32_t, std::uint32_t> parse_dims(std::string_view s, std::size_t line, std::size_t column);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace sdfnoc::text
