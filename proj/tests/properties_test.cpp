#include <gtest/gtest.h>

#include "support/acceptance_checks.hpp"

namespace guirepair::testing {
namespace {

TEST(Properties, EditEngineRandomizedApplications) {
  auto r = check_edit_engine(1000, 99);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, RetrievalMatchesExhaustiveRanking) {
  auto r = check_retrieval_oracle(200, 123);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, CodeviewSoundOnGeneratedCorpus) {
  auto r = check_codeview_soundness(50, 5);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, PixelDiffMatchesNaiveReference) {
  auto r = check_pixel_oracle(100, 17);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, ConfigDefaultsTable) {
  auto r = check_config_defaults();
  EXPECT_TRUE(r.ok) << r.detail;
}

}  // namespace
}  // namespace guirepair::testing
