#include "tempora/analysis.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace tempora;

TEST(MatrixIo, RoundTripsValuesAbsencesAndOffline) {
  UtilityMatrix m;
  const Scenario a{Protocol::discrete, "rho", 0.35};
  const Scenario b{Protocol::amortised, "B_s", 16};
  m.set("ETA", a, "fog", 0.123456789012345);
  m.set_absent("ETA", b, "fog", "timed out");
  m.set("SAR", a, "fog", 0.0);
  m.set("SAR", b, "fog", 0.25);
  m.set_offline("ETA", "fog", 0.4835);
  m.set_offline("SAR", "fog", 0.4414);

  std::stringstream s;
  write_matrix_csv(m, s);
  EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "method,protocol,parameter,corruption,utility");
  EXPECT_NE(s.str().find("NA"), std::string::npos);
  const auto back = read_matrix_csv(s);

  ASSERT_EQ(back.methods(), m.methods());
  ASSERT_EQ(back.scenarios(), m.scenarios());
  EXPECT_EQ(back.get(0, 0, 0), m.get(0, 0, 0));
  EXPECT_FALSE(back.get(0, 1, 0));
  EXPECT_EQ(back.get(1, 1, 0), 0.25);
  EXPECT_EQ(back.offline(0, 0), 0.4835);
}

TEST(MatrixIo, LatencyRoundTrip) {
  const LatencyTable t{{"ETA", 97.7}, {"Standard", 38.7}};
  std::stringstream s;
  write_latency_csv(t, s);
  EXPECT_EQ(read_latency_csv(s), t);
}

TEST(MatrixIo, WinnersOutputs) {
  UtilityMatrix m;
  const Scenario a{Protocol::continuous, "T_ms", 50};
  m.set("AdaBN", a, "fog", 0.3);
  m.set("ETA", a, "fog", 0.1);
  const auto w = winners(m);
  std::ostringstream csv, md;
  write_winners_csv(m, w, csv);
  write_winners_markdown(m, w, md);
  EXPECT_NE(csv.str().find("AdaBN"), std::string::npos);
  EXPECT_NE(md.str().find("|"), std::string::npos);
}

TEST(MatrixIo, MalformedCsvThrows) {
  std::istringstream bad("method,protocol,parameter,corruption,utility\nETA,discrete,rho=0.5,fog\n");
  EXPECT_ANY_THROW(read_matrix_csv(bad));
}
