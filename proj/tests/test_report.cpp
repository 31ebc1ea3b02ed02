#include <cmath>

#include <gtest/gtest.h>

#include "fsdisc/report.hpp"

namespace {

using namespace fsdisc;

const DualParams S2 = DualParams::make(Theorem::S2_bergman, 3.0, 1.8);

ReportOptions no_search() {
  ReportOptions o;
  o.search = false;
  return o;
}

CorpusEntry make_entry(TaylorFunction f, std::string label) { return CorpusEntry{std::move(f), std::move(label)}; }

TEST(Report, EmptyCorpus) {
  const EquivalenceReport r = equivalence_report({}, S2, no_search());
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.summary.rows, 0u);
  EXPECT_TRUE(std::isnan(r.summary.band));
}

TEST(Report, RowForZ) {
  ReportOptions o;
  o.search_config.budget = 40;
  const EquivalenceReport r = equivalence_report({make_entry(TaylorFunction::monomial(1), "z")}, S2, o);
  ASSERT_EQ(r.rows.size(), 1u);
  const EquivalenceRow& row = r.rows[0];
  EXPECT_TRUE(row.message().empty()) << row.message();
  EXPECT_NEAR(row.lhs_power_value, 0.4 * 3.141592653589793, 1e-6);
  EXPECT_LE(row.holder_floor, row.searched_dual * (1.0 + 1e-10));
  EXPECT_LE(row.searched_dual, row.test_dual * (1.0 + 1e-12));
  EXPECT_DOUBLE_EQ(r.summary.band, 1.0);
}

TEST(Report, RotationInvariant) {
  const TaylorFunction f({0.0, 1.0, complex(0.4, -0.2), 0.3});
  const auto a = equivalence_report({make_entry(f, "f")}, S2, no_search()).rows[0];
  const auto b = equivalence_report({make_entry(rotate(f, 3.141592653589793 / 4), "f")}, S2, no_search()).rows[0];
  EXPECT_NEAR(b.test_dual / a.test_dual, 1.0, 1e-9);
  EXPECT_NEAR(b.lhs_power_value / a.lhs_power_value, 1.0, 1e-9);
  EXPECT_NEAR(b.holder_floor / a.holder_floor, 1.0, 1e-9);
}

TEST(Report, ErrorRowsDoNotAbortTheBatch) {
  const std::vector<CorpusEntry> c{make_entry(TaylorFunction(), "zero"), make_entry(TaylorFunction::monomial(2), "z^2"),
                                   make_entry(TaylorFunction({1.0, 1.0}), "shifted")};
  const EquivalenceReport r = equivalence_report(c, S2, no_search());
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_FALSE(r.rows[0].error.empty());
  EXPECT_TRUE(r.rows[1].error.empty());
  EXPECT_FALSE(r.rows[2].error.empty());
  EXPECT_EQ(r.summary.errors, 2u);
  EXPECT_TRUE(std::isfinite(r.summary.band));
}

TEST(Report, NormalizationUsesTheLeftHandSide) {
  const TaylorFunction f({0.0, 1.0, 0.5});
  const auto a = equivalence_report({make_entry(f, "f")}, S2, no_search()).rows[0];
  const auto b = equivalence_report({make_entry(scale(f, 3.0), "3f")}, S2, no_search()).rows[0];
  EXPECT_NEAR(b.lhs_power_value / a.lhs_power_value, 27.0, 1e-9);
  EXPECT_NEAR(b.ratio_test / a.ratio_test, 1.0, 1e-9);
}

TEST(Report, Json) {
  const auto r = equivalence_report({make_entry(TaylorFunction::monomial(1), "z")}, S2, no_search());
  const auto j = to_json(r.rows[0]);
  EXPECT_EQ(j.at("theorem"), "S2_bergman");
  EXPECT_TRUE(j.at("searched_dual").is_null());
  EXPECT_EQ(j.at("error"), "");
  EXPECT_EQ(to_json(r.summary).at("rows"), 1);
}

}  // namespace
