#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "sdfnoc/token.hpp"

namespace sdfnoc {

/// Streams keyed by vertex name as written in the file.
using NamedStreams = std::map<std::string, Stream>;

/// Resolves "@<path>" references. Receives the path text after '@'.
using ImageLoader = std::function<Image(const std::string& path)>;
/// Stores an image and returns the reference to write after '@'.
using ImageSink = std::function<std::string(const std::string& vertex, std::size_t index, const Image& img)>;

/// Lines "stream <vertex>: t1 t2 ..." where a token is a decimal integer, N,
/// or @<path>.pgm / @<path>.ppm. Throws ParseError.
NamedStreams parse_streams(std::string_view text, const ImageLoader& load_image);
std::string write_streams(const NamedStreams& streams, const ImageSink& store_image);

/// File variants. Image paths are relative to the stream file's directory;
/// save_streams writes images next to `path` as <stem>.<vertex>.<k>.pgm|ppm.
NamedStreams load_streams(const std::string& path);
void save_streams(const std::string& path, const NamedStreams& streams);

}  // namespace sdfnoc
