#include <gtest/gtest.h>

#include "hypercondense/errors.hpp"
#include "hypercondense/theory.hpp"

using namespace hypercondense;

TEST(Theory, SpectralEquivalence) {
  const CheckResult r = check_spectral(1);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_EQ(r.violations, 0);
  EXPECT_GT(r.trials, 0);
}

TEST(Theory, TailBoundGrid) {
  const CheckResult r = check_tail();
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_EQ(r.trials, 24);
}

TEST(Theory, MmdIdentity) {
  const CheckResult r = check_mmd_identity(2, 300);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_EQ(r.trials, 300);
}

TEST(Theory, MarginBound) {
  const CheckResult r = check_margin(3, 300);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_GE(r.worst_margin, 0.0);
}

TEST(Theory, MisrankingBound) {
  const CheckResult r = check_misranking(4, 5000);
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Theory, DeterministicPerSeed) {
  const CheckResult a = check_margin(9, 100), b = check_margin(9, 100);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
  EXPECT_EQ(a.detail, b.detail);
}

TEST(Theory, CheckSelection) {
  const auto tail = run_checks("tail-bound", 0);
  ASSERT_EQ(tail.size(), 1u);
  EXPECT_EQ(tail[0].name, "tail");
  EXPECT_THROW(run_checks("nope", 0), Error);
  const auto j = to_json(tail[0]);
  EXPECT_EQ(j.at("name"), "tail");
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_NE(format_table(tail).find("tail"), std::string::npos);
}
