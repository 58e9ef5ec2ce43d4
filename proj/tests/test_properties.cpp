// The invariant suites behind `articugeo verify`, one GTest case per suite.
// The scene-heavy suites run in the acceptance binary instead.

#include <gtest/gtest.h>

#include "articugeo/error.hpp"
#include "articugeo/verify.hpp"

using namespace articugeo;

class Suite : public ::testing::TestWithParam<std::string> {};

TEST_P(Suite, AllChecksPass) {
  const auto results = run_suite(GetParam());
  ASSERT_EQ(results.size(), 1u);
  ASSERT_FALSE(results[0].checks.empty());
  for (const auto& c : results[0].checks) {
    EXPECT_TRUE(c.passed) << c.name << " value=" << c.value << " tol=" << c.tolerance << " " << c.detail;
  }
}

INSTANTIATE_TEST_SUITE_P(Fast, Suite,
                         ::testing::Values("geometry", "rig", "warping", "losses", "synth", "metrics", "pose",
                                           "closure"));

TEST(Suites, UnknownNameIsRejected) {
  try {
    run_suite("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSuite);
  }
}

TEST(Suites, TextLines) {
  SuiteResult r;
  r.suite = "demo";
  r.checks.push_back({"ok", true, 0.5, 1.0, "note"});
  r.checks.push_back({"bad", false, 2.0, 1.0, ""});
  EXPECT_FALSE(r.passed());
  const std::string t = r.to_text();
  EXPECT_NE(t.find("PASS demo.ok value=0.5 tol=1 note"), std::string::npos) << t;
  EXPECT_NE(t.find("FAIL demo.bad"), std::string::npos) << t;
}
