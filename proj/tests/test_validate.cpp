#include <gtest/gtest.h>

#include "sptq/validate.hpp"

using namespace sptq;

namespace {

CriterionResult run(int id, double scale) {
  ValidateOptions o;
  if (scale != 1) o.tol_scale[id] = scale;
  return run_criterion(id, o);
}

}  // namespace

TEST(ValidateHook, FlatbandPassesAtNominalTolerance) { EXPECT_TRUE(run(5, 1).pass); }

TEST(ValidateHook, FlatbandFailsWithZeroedTolerance) {
  CriterionResult r = run(5, 0);
  EXPECT_FALSE(r.pass);
  ASSERT_FALSE(r.tolerance.empty());
  EXPECT_EQ(r.tolerance[0].second, 0);
}

TEST(ValidateHook, FreeFermionOraclesFailWithZeroedTolerance) {
  EXPECT_TRUE(run(6, 1).pass);
  EXPECT_FALSE(run(6, 0).pass);
}

TEST(ValidateHook, ScaleOnlyAffectsItsCriterion) {
  ValidateOptions o;
  o.tol_scale[6] = 0;
  o.only = {5};
  auto v = validate_suite(o);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(v[0].pass);
}

TEST(ValidateHook, UnknownCriterionFails) {
  ValidateOptions o;
  EXPECT_FALSE(run_criterion(13, o).pass);
  EXPECT_EQ(criterion_name(13), "unknown");
}
