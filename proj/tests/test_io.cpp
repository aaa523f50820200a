#include <doctest.h>

#include <filesystem>
#include <random>

#include "slr/errors.hpp"
#include "slr/io/csv.hpp"
#include "slr/io/pgm.hpp"

using namespace slr;
using namespace slr::io;
namespace fs = std::filesystem;

TEST_CASE("ascii graymap") {
  const auto g = parse_pgm("P2\n2 2\n255\n0 64 128 255");
  CHECK(g == Grid<std::uint8_t>::matrix({{0, 64}, {128, 255}}));
}

TEST_CASE("comments and odd whitespace in the header") {
  const auto g = parse_pgm("P2 # made by hand\n3\t1 # dims\n9\n1 2\n9\n");
  CHECK(g == Grid<std::uint8_t>::matrix({{1, 2, 9}}));
}

TEST_CASE("binary graymap") {
  std::string bytes = "P5\n3 2\n255\n";
  for (int v : {0, 1, 2, 253, 254, 255}) bytes.push_back(static_cast<char>(v));
  CHECK(parse_pgm(bytes) == Grid<std::uint8_t>::matrix({{0, 1, 2}, {253, 254, 255}}));
}

TEST_CASE("round trip through both encodings") {
  std::mt19937 rng(5);
  Grid<std::uint8_t> g({13, 17}, 0);
  for (auto& v : g.data()) v = static_cast<std::uint8_t>(rng());
  CHECK(parse_pgm(format_pgm(g, PgmFormat::Binary)) == g);
  CHECK(parse_pgm(format_pgm(g, PgmFormat::Ascii)) == g);

  const auto path = fs::temp_directory_path() / "slr_io_roundtrip.pgm";
  write_pgm(g, path);
  CHECK(read_pgm(path) == g);
  fs::remove(path);
}

TEST_CASE("truncated binary raster names both byte counts") {
  std::string bytes = "P5\n4 4\n255\n";
  bytes.append(10, '\x07');
  try {
    parse_pgm(bytes);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("expected 16") != std::string::npos);
    CHECK(what.find("received 10") != std::string::npos);
  }
}

TEST_CASE("malformed headers report a byte offset") {
  CHECK_THROWS_AS(parse_pgm("P6\n1 1\n255\n0"), ParseError);
  CHECK_THROWS_AS(parse_pgm("P2\n2 x\n255\n0 0"), ParseError);
  CHECK_THROWS_AS(parse_pgm("P2\n1 1\n65535\n0"), ParseError);
  CHECK_THROWS_AS(parse_pgm("P2\n2 1\n10\n3 11"), ParseError);
  CHECK_THROWS_AS(parse_pgm("P2\n0 1\n255\n"), ParseError);
  try {
    parse_pgm("P2\n1 1\n300\n0");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 7);
  }
  CHECK_THROWS_AS(read_pgm("/nonexistent/slr.pgm"), IoError);
}

TEST_CASE("csv quoting and number formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_number(1.5) == "1.5");
  CHECK(csv_number(1234567.0) == "1.23457e+06");
  CHECK(csv_number(0.0) == "0");
}

TEST_CASE("csv rows are ordered by input then configuration") {
  BenchRow a{.app = "sobel", .input = "b.pgm", .partitions = 1};
  BenchRow b{.app = "sobel", .input = "a.pgm", .partitions = 2};
  BenchRow c{.app = "sobel", .input = "a.pgm", .partitions = 1, .width = 2};
  BenchRow d{.app = "sobel", .input = "a.pgm", .partitions = 1, .width = 1};
  const auto text = format_csv({a, b, c, d});
  const std::string header = std::string(kBenchHeader) + "\r\n";
  CHECK(text.rfind(header, 0) == 0);
  const auto first = text.find("a.pgm,1,1");
  const auto second = text.find("a.pgm,1,2");
  const auto third = text.find("a.pgm,2,1");
  const auto fourth = text.find("b.pgm");
  CHECK(first < second);
  CHECK(second < third);
  CHECK(third < fourth);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("csv row layout") {
  BenchRow r;
  r.app = "gol";
  r.input = "x,y";
  r.partitions = 2;
  r.mode = "1:n";
  r.iterations = 10;
  r.wall_ms = 2.25;
  r.fill_events = 2;
  r.halo_elems = 1152;
  r.readback_events = 2;
  r.reduce_final = 301;
  const auto text = format_csv({r});
  CHECK(text.substr(text.find("\r\n") + 2) == "gol,\"x,y\",2,1,1:n,10,2.25,2,1152,2,301,42\r\n");
  CHECK_THROWS_AS(emit_csv({r}, "/nonexistent/dir/out.csv"), IoError);
}

TEST_CASE("empty report is just the header") {
  CHECK(format_csv({}) == std::string(kBenchHeader) + "\r\n");
}

TEST_CASE("rows differing only in partitions sort ascending") {
  BenchRow four{.app = "gol", .input = "x", .partitions = 4};
  BenchRow two{.app = "gol", .input = "x", .partitions = 2};
  const auto text = format_csv({four, two});
  CHECK(text.find("gol,x,2,") < text.find("gol,x,4,"));
}
