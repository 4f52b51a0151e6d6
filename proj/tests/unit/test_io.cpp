#include <gtest/gtest.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "qbm/error.hpp"
#include "qbm/io.hpp"

using namespace qbm::io;

TEST(Io, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    const double v = std::bit_cast<double>(bits(rng));
    if (!std::isfinite(v)) continue;
    const std::string text = format_double(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    ASSERT_EQ(back, v) << text;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Io, CsvQuotingAndLineEndings) {
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"name", "value", "count"});
  w.field("plain").field(1.5).field(3);
  w.end_row();
  w.field("a,b").field(-0.25).field(std::size_t{7});
  w.end_row();
  w.field("say \"hi\"\nbye").field(1e-300).field(std::int64_t{-4});
  w.end_row();
  const std::string text = os.str();
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.substr(0, 24), "name,value,count\nplain,1");
  EXPECT_NE(text.find("\"a,b\",-0.25,7\n"), std::string::npos);
  EXPECT_NE(text.find("\"say \"\"hi\"\"\nbye\""), std::string::npos);

  const auto t = parse_csv(text);
  EXPECT_EQ(t.header, (std::vector<std::string>{"name", "value", "count"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[1][0], "a,b");
  EXPECT_EQ(t.rows[2][0], "say \"hi\"\nbye");
  EXPECT_EQ(std::stod(t.rows[2][1]), 1e-300);
  EXPECT_EQ(t.column("count"), 2u);
  EXPECT_THROW(t.column("missing"), qbm::Error);
}

TEST(Io, ParseToleratesCrlfAndMissingFinalNewline) {
  const auto t = parse_csv("a,b\r\n1,2\r\n3,4");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"3", "4"}));
  EXPECT_TRUE(parse_csv("").rows.empty());
}

TEST(Io, TextFilesRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "qbm_io_test.csv";
  write_text(path, "x,y\n1,2\n");
  EXPECT_EQ(read_text(path), "x,y\n1,2\n");
  const auto t = read_csv(path);
  EXPECT_EQ(t.rows.at(0).at(1), "2");
  std::filesystem::remove(path);
  EXPECT_THROW(read_text(path), qbm::Error);
  EXPECT_THROW(write_text("/nonexistent-dir/x.csv", "x"), qbm::Error);
}
