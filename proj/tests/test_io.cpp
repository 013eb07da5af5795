#include <gtest/gtest.h>

#include <charconv>
#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sptq/io.hpp"
#include "sptq/rng.hpp"

using namespace sptq;
namespace fs = std::filesystem;

TEST(Fnv, ReferenceVectors) {
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
}

TEST(FormatDouble, RoundTrips) {
  Stream rng(606, 1, 0);
  for (int i = 0; i < 2000; ++i) {
    double x = std::ldexp(rng.uniform(-1, 1), int(rng.uniform(-300, 300)));
    std::string s = format_double(x);
    double y = 0;
    std::from_chars(s.data(), s.data() + s.size(), y);
    EXPECT_EQ(x, y) << s;
  }
}

TEST(FormatDouble, SpecialValues) {
  EXPECT_EQ(format_double(NAN), "nan");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(FormatDouble, IgnoresLocale) {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) EXPECT_EQ(format_double(1.25), "1.25");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(Csv, HeaderColumnsRows) {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{1, 2.5}, {NAN, -3}};
  std::string s = render_csv(t, {"x: 1", "y"});
  EXPECT_EQ(s, "# x: 1\n# y\na,b\n1,2.5\nnan,-3\n");
}

TEST(Csv, RaggedRowRejected) {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{1}};
  try {
    render_csv(t, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(WriteAtomic, ReplacesAndLeavesNoTemp) {
  fs::path dir = fs::temp_directory_path() / "sptq_io_test" / "nested";
  fs::remove_all(dir.parent_path());
  std::string p = (dir / "out.csv").string();
  write_atomic(p, "first\n");
  write_atomic(p, "second\n");
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "second\n");
  int n = 0;
  for (auto& e : fs::directory_iterator(dir)) n += e.is_regular_file();
  EXPECT_EQ(n, 1);
  fs::remove_all(dir.parent_path());
}
