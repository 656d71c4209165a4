#include <gtest/gtest.h>

#include "ftop/suites.hpp"

using namespace ftop;

namespace {

std::string failures(const SuiteReport& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.pass) s += c.name + ": " + c.detail + "\n";
  for (const auto& w : r.witnesses) s += w + "\n";
  return s;
}

}  // namespace

TEST(Suites, SmallRunsPass) {
  SuiteOptions o;
  o.samples = 20;
  o.depth = 2;
  o.formula_depth = 3;
  for (const SuiteReport& r : {topology_suite(o), forcing_suite(o), sheaf_suite(o),
                               brouwer_suite(o), alt_baire_suite(o)}) {
    EXPECT_TRUE(r.ok()) << r.suite << "\n" << failures(r);
    EXPECT_FALSE(r.checks.empty()) << r.suite;
  }
}

TEST(Suites, SameSeedSameReport) {
  SuiteOptions o;
  o.samples = 15;
  o.seed = 7;
  const SuiteReport a = forcing_suite(o), b = forcing_suite(o);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].instances, b.checks[i].instances);
    EXPECT_EQ(a.checks[i].detail, b.checks[i].detail);
  }
}

TEST(Suites, PresentationSystemOfATruncatedSpace) {
  auto sp = TruncatedSpace::baire(2, 2);
  const CoveringSystem sys = presentation_system(*sp->topology());
  EXPECT_FALSE(sys.find_violation());
  const TopologyPtr t = generate_topology(sys, 5);
  for (int a = 0; a < sp->size(); ++a)
    for (const Sieve& s : sp->topology()->all_covers(a)) EXPECT_TRUE(t->covers(a, s));
}
