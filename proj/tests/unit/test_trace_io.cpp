#include "tempora/error.hpp"
#include "tempora/trace_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace tempora;
using tempora::testing::ms;

namespace {

const char* kHeader = R"({"method":"ETA","lambda_ms":39.9,"corruption":"fog","n":2})";

ValidationError read_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_trace_jsonl(in);
  } catch (const ValidationError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a validation error";
  return ValidationError(ValidationKind::header, 0, "", "");
}

}  // namespace

TEST(TraceIo, ReadsMillisecondFieldsExactly) {
  std::istringstream in(std::string(kHeader) + "\n" +
                        R"({"index":1,"e_ms":38.7,"ell_ms":0,"batch_size":64,"correct":12})" "\n" +
                        R"({"index":2,"e_ms":41.1,"ell_ms":56.6,"batch_size":64,"correct":30})" "\n");
  const auto t = read_trace_jsonl(in);
  EXPECT_EQ(t.method, "ETA");
  EXPECT_EQ(t.corruption, "fog");
  EXPECT_EQ(t.lambda, Duration{39'900'000});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.at(1).e, Duration{38'700'000});
  EXPECT_EQ(t.at(1).ell, Duration{0});
  EXPECT_DOUBLE_EQ(t.at(1).accuracy(), 0.1875);
  EXPECT_EQ(t.at(2).ell, Duration{56'600'000});
}

TEST(TraceIo, NonContiguousIndexNamesRow) {
  const auto e = read_error(std::string(kHeader) + "\n" +
                            R"({"index":1,"e_ms":1,"ell_ms":0,"batch_size":64,"correct":1})" "\n" +
                            R"({"index":3,"e_ms":1,"ell_ms":0,"batch_size":64,"correct":1})" "\n");
  EXPECT_EQ(e.kind(), ValidationKind::non_contiguous_index);
  EXPECT_NE(std::string(e.what()).find("non-contiguous index at row 2"), std::string::npos);
}

TEST(TraceIo, MissingAndMalformedFields) {
  auto e = read_error(std::string(kHeader) + "\n" + R"({"index":1,"e_ms":1,"batch_size":64,"correct":1})" "\n");
  EXPECT_EQ(e.kind(), ValidationKind::missing_field);
  EXPECT_EQ(e.field(), "ell_ms");
  e = read_error(std::string(kHeader) + "\n" + R"({"index":1,"e_ms":"x","ell_ms":0,"batch_size":64,"correct":1})" "\n");
  EXPECT_EQ(e.kind(), ValidationKind::malformed_value);
  e = read_error(R"({"method":"ETA","corruption":"fog","n":1})" "\n");
  EXPECT_EQ(e.kind(), ValidationKind::missing_field);
}

TEST(TraceIo, HeaderCountMustMatchRecords) {
  const auto e = read_error(std::string(kHeader) + "\n" +
                            R"({"index":1,"e_ms":1,"ell_ms":0,"batch_size":64,"correct":1})" "\n");
  EXPECT_EQ(e.kind(), ValidationKind::header);
}

TEST(TraceIo, RoundTripsBothFormats) {
  std::mt19937_64 rng(5);
  const auto t = tempora::testing::random_trace(rng, 781, ms(1), ms(200), Duration{39'900'000});
  const auto dir = tempora::testing::temp_dir("trace-io");
  write_trace(t, dir / "a.jsonl", TraceFormat::jsonl);
  write_trace(t, dir / "a.csv", TraceFormat::csv);
  EXPECT_EQ(load_trace(dir / "a.jsonl"), t);
  EXPECT_EQ(load_trace(dir / "a.csv"), t);
  EXPECT_TRUE(std::filesystem::exists(dir / "a.csv.meta.json"));
  EXPECT_THROW(format_from_path(dir / "a.txt"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(TraceIo, FrozenRunRoundTrip) {
  const auto adapted = tempora::testing::constant_trace(10, ms(90));
  FrozenRunFile f{"Tent", "c", ms(40), 10, FrozenRun::make(7, 10, {{8, ms(40), ms(0), 64, 1}, {9, ms(40), ms(0), 64, 2},
                                                                    {10, ms(40), ms(0), 64, 3}})};
  std::stringstream s;
  write_frozen_jsonl(f, s);
  const auto back = read_frozen_jsonl(s);
  EXPECT_EQ(back.method, "Tent");
  EXPECT_EQ(back.n, 10u);
  EXPECT_EQ(back.run, f.run);
}

TEST(TraceIo, LatencySamplesSkipCommentsAndBlanks) {
  const auto dir = tempora::testing::temp_dir("latency");
  std::ofstream(dir / "s.txt") << "# samples\n38.5\n\n38.9\n";
  const auto s = load_latency_samples(dir / "s.txt");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1], Duration{38'900'000});
  std::filesystem::remove_all(dir);
}
