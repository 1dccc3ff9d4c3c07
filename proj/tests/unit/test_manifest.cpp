#include "tempora/manifest.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

using namespace tempora;

TEST(Manifest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, TimestampFromSourceDateEpoch) {
  ::setenv("SOURCE_DATE_EPOCH", "0", 1);
  EXPECT_EQ(manifest_timestamp(), "1970-01-01T00:00:00Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
}

TEST(Manifest, RoundTripAndVerify) {
  const auto dir = tempora::testing::temp_dir("manifest");
  std::ofstream(dir / "in.txt") << "input";
  std::ofstream(dir / "out.csv") << "a,b\n1,2\n";
  const auto m = make_manifest("evaluate", "rho=1\n", 7, {dir / "in.txt"}, dir, {"out.csv"});
  EXPECT_EQ(m.config_hash, sha256_hex("rho=1\n"));
  EXPECT_EQ(m.outputs.size(), 1u);
  write_manifest(m, dir / "manifest.json");
  const auto back = read_manifest(dir / "manifest.json");
  EXPECT_EQ(back.to_json(), m.to_json());
  EXPECT_TRUE(verify_manifest(back, dir).empty());
  std::ofstream(dir / "out.csv") << "tampered";
  EXPECT_EQ(verify_manifest(back, dir), (std::vector<std::string>{"out.csv"}));
  std::filesystem::remove(dir / "out.csv");
  EXPECT_EQ(verify_manifest(back, dir).size(), 1u);
  EXPECT_THROW(sha256_file(dir / "missing"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
