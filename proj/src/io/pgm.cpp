#include "slr/io/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "slr/errors.hpp"

namespace slr::io {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool done() const noexcept { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (!done()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (!done() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > 1'000'000'000UL) throw ParseError(std::string(what) + " is too large", start);
      ++pos_;
    }
    if (pos_ == start) {
      if (done()) throw ParseError(std::string("unexpected end of data reading ") + what, pos_);
      throw ParseError(std::string("expected ") + what, pos_);
    }
    return value;
  }

  std::string_view take(std::size_t n) {
    const auto view = bytes_.substr(pos_, n);
    pos_ += view.size();
    return view;
  }

  void advance() { ++pos_; }
  char peek() const { return bytes_[pos_]; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Grid<std::uint8_t> parse_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("not a P2/P5 graymap (bad magic number)", 0);
  }
  const bool binary = bytes[1] == '5';
  Cursor in(bytes);
  in.take(2);
  in.skip_space_and_comments();
  const std::size_t dims_at = in.offset();
  const auto width = in.number("width");
  const auto height = in.number("height");
  in.skip_space_and_comments();
  const std::size_t maxval_at = in.offset();
  const auto maxval = in.number("maxval");
  if (width == 0 || height == 0) throw ParseError("image dimensions must be positive", dims_at);
  if (maxval == 0 || maxval > 255) {
    throw ParseError("maxval " + std::to_string(maxval) + " outside 1..255", maxval_at);
  }
  const std::size_t count = width * height;
  std::vector<std::uint8_t> pixels;
  pixels.reserve(count);

  if (binary) {
    if (in.done() || !std::isspace(static_cast<unsigned char>(in.peek()))) {
      throw ParseError("expected a single whitespace before binary raster", in.offset());
    }
    in.advance();
    const std::size_t start = in.offset();
    const auto raster = in.take(count);
    if (raster.size() < count) {
      throw ParseError("truncated P5 raster: expected " + std::to_string(count) +
                           " bytes, received " + std::to_string(raster.size()),
                       start + raster.size());
    }
    for (char c : raster) {
      const auto v = static_cast<std::uint8_t>(c);
      if (v > maxval) throw ParseError("pixel value exceeds maxval", in.offset());
      pixels.push_back(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = in.offset();
      const auto v = in.number("pixel value");
      if (v > maxval) throw ParseError("pixel value exceeds maxval", at);
      pixels.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return Grid<std::uint8_t>({height, width}, std::move(pixels));
}

std::string format_pgm(const Grid<std::uint8_t>& img, PgmFormat format) {
  std::ostringstream out;
  out << (format == PgmFormat::Binary ? "P5" : "P2") << '\n'
      << img.cols() << ' ' << img.rows() << '\n'
      << 255 << '\n';
  if (format == PgmFormat::Binary) {
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.size()));
  } else {
    for (std::size_t r = 0; r < img.rows(); ++r) {
      for (std::size_t c = 0; c < img.cols(); ++c) {
        if (c) out << ' ';
        out << static_cast<int>(img(r, c));
      }
      out << '\n';
    }
  }
  return out.str();
}

Grid<std::uint8_t> read_pgm(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
  try {
    return parse_pgm(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.offset());
  }
}

void write_pgm(const Grid<std::uint8_t>& img, const std::filesystem::path& path,
               PgmFormat format) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  const std::string bytes = format_pgm(img, format);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("write failed for " + path.string());
}

}  // namespace slr::io
