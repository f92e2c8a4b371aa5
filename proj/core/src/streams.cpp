#include "sdfnoc/streams.hpp"

#include <filesystem>
#include <sstream>

#include "sdfnoc/error.hpp"
#include "sdfnoc/netpbm.hpp"
#include "sdfnoc/text.hpp"

namespace sdfnoc {

namespace fs = std::filesystem;

NamedStreams parse_streams(std::string_view doc, const ImageLoader& load_image) {
  NamedStreams out;
  for (const auto& line : text::split_lines(doc, true)) {
    const auto& w = line.words;
    if (w[0].text != "stream" || w.size() < 2 || !w[1].text.ends_with(':') || w[1].text.size() < 2) {
      throw ParseError("expected 'stream <vertex>: <token> ...'", line.number, w[0].column);
    }
    std::string vertex(w[1].text.substr(0, w[1].text.size() - 1));
    if (out.contains(vertex)) throw ParseError("duplicate stream for " + vertex, line.number, w[1].column);
    Stream s;
    for (std::size_t i = 2; i < w.size(); ++i) {
      const std::string_view t = w[i].text;
      if (t == "N") {
        s.emplace_back(NullToken{});
      } else if (t.starts_with('@')) {
        const std::string path(t.substr(1));
        if (!path.ends_with(".pgm") && !path.ends_with(".ppm")) {
          throw ParseError("image reference must end in .pgm or .ppm", line.number, w[i].column);
        }
        try {
          s.emplace_back(load_image(path));
        } catch (const ParseError& e) {
          throw ParseError(path + ": " + e.what(), line.number, w[i].column);
        } catch (const Error& e) {
          throw ParseError(e.what(), line.number, w[i].column);
        }
      } else {
        s.emplace_back(text::parse_int(t, line.number, w[i].column));
      }
    }
    out.emplace(std::move(vertex), std::move(s));
  }
  return out;
}

std::string write_streams(const NamedStreams& streams, const ImageSink& store_image) {
  std::ostringstream out;
  for (const auto& [vertex, stream] : streams) {
    out << "stream " << vertex << ':';
    for (std::size_t k = 0; k < stream.size(); ++k) {
      const Token& t = stream[k];
      if (is_null(t)) {
        out << " N";
      } else if (auto* i = std::get_if<std::int64_t>(&t)) {
        out << ' ' << *i;
      } else {
        out << " @" << store_image(vertex, k, std::get<Image>(t));
      }
    }
    out << '\n';
  }
  return out.str();
}

NamedStreams load_streams(const std::string& path) {
  const fs::path base = fs::path(path).parent_path();
  return parse_streams(text::read_file(path), [&](const std::string& ref) { return load_pnm((base / ref).string()); });
}

void save_streams(const std::string& path, const NamedStreams& streams) {
  const fs::path p(path);
  const std::string stem = p.stem().string();
  const std::string doc = write_streams(streams, [&](const std::string& vertex, std::size_t k, const Image& img) {
    const std::string name = stem + "." + vertex + "." + std::to_string(k) + (img.gray() ? ".pgm" : ".ppm");
    save_pnm((p.parent_path() / name).string(), img);
    return name;
  });
  text::write_file(path, doc);
}

}  // namespace sdfnoc
