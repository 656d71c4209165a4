#include <gtest/gtest.h>

#include <random>

#include "ftop/errors.hpp"
#include "ftop/rules.hpp"

using namespace ftop;

namespace {

std::string failures(const Transcript& t) {
  std::string out;
  for (const auto& s : t)
    for (const auto& l : s.lines)
      if (!s.ok) out += s.name + ": " + l + "\n";
  return out;
}

Bar monotone_bar(SpacePtr sp, Bar::Predicate p) { return Bar(std::move(sp), p, true, false); }

// Random generators among the sequences of length at most max_len.
std::vector<FinSeq> random_generators(std::mt19937_64& rng, const TruncatedSpace& sp, int max_len,
                                      int count) {
  std::vector<FinSeq> pool;
  for (const FinSeq& u : sp.sequences())
    if (static_cast<int>(u.size()) <= max_len) pool.push_back(u);
  std::vector<FinSeq> out;
  for (int i = 0; i < count; ++i) out.push_back(pool[rng() % pool.size()]);
  return out;
}

bool bars_every_leaf(const Bar& bar) {
  for (const FinSeq& v : bar.space()->u_bracket({}, bar.space()->depth()))
    if (!bar(v)) return false;
  return true;
}

}  // namespace

TEST(FanRule, LengthBar) {
  auto sp = TruncatedSpace::cantor(4);
  const FanResult r = fan_rule(monotone_bar(sp, [](const FinSeq& u) { return u.size() >= 3; }));
  EXPECT_EQ(r.n, 3);
  EXPECT_EQ(r.uniform_depth, 3);
  EXPECT_EQ(r.conclusions.size(), 8u);
  EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
}

TEST(FanRule, OneOrLength) {
  auto sp = TruncatedSpace::cantor(4);
  auto phi = [](const FinSeq& u) {
    return u.size() >= 3 || std::find(u.begin(), u.end(), 1) != u.end();
  };
  const FanResult r = fan_rule(monotone_bar(sp, phi));
  EXPECT_EQ(r.n, 3);
  EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
  for (const auto& c : r.conclusions) EXPECT_TRUE(phi(c.v));
}

TEST(FanRule, TrivialBar) {
  auto sp = TruncatedSpace::cantor(3);
  const FanResult r = fan_rule(monotone_bar(sp, [](const FinSeq&) { return true; }));
  EXPECT_EQ(r.n, 0);
  ASSERT_EQ(r.conclusions.size(), 1u);
  EXPECT_EQ(r.conclusions[0].u, FinSeq{});
  EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
}

TEST(FanRule, Preconditions) {
  auto baire = TruncatedSpace::baire(2, 3);
  EXPECT_THROW(fan_rule(monotone_bar(baire, [](const FinSeq&) { return true; })), InputError);
  auto sp = TruncatedSpace::cantor(3);
  EXPECT_THROW(fan_rule(Bar(sp, [](const FinSeq& u) { return u.size() >= 2; }, false, false)),
               NotMonotone);
  try {
    fan_rule(Bar::from_generators(sp, {{0}}, true, false));
    FAIL() << "expected PremiseNotForced";
  } catch (const PremiseNotForced& e) {
    EXPECT_NE(std::string(e.what()).find("<1,0,0>"), std::string::npos) << e.what();
  }
}

TEST(FanRule, RandomBarsAgainstBruteForce) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 40; ++iter) {
    const int depth = 2 + static_cast<int>(rng() % 3);
    auto sp = TruncatedSpace::cantor(depth);
    const auto gens = random_generators(rng, *sp, depth, 1 + static_cast<int>(rng() % 6));
    const Bar bar = Bar::from_generators(sp, gens, true, false);
    if (!bars_every_leaf(bar)) {
      EXPECT_THROW(fan_rule(bar), PremiseNotForced);
      continue;
    }
    const FanResult r = fan_rule(bar);
    EXPECT_EQ(r.n, uniform_depth(bar)) << iter;
    for (const FinSeq& v : sp->u_bracket({}, r.n)) EXPECT_TRUE(bar(v));
    EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
  }
}

TEST(FanRule, TamperedResultsFailRecheck) {
  auto sp = TruncatedSpace::cantor(3);
  const Bar bar = monotone_bar(sp, [](const FinSeq& u) { return u.size() >= 2; });
  const FanResult r = fan_rule(bar);
  ASSERT_TRUE(transcript_ok(r.transcript));

  FanResult bad = r;
  bad.n = 1;
  EXPECT_FALSE(transcript_ok(recheck_fan(bar, bad)));
  bad = r;
  bad.witnesses[0].u = {1, 1, 1};
  EXPECT_FALSE(transcript_ok(recheck_fan(bar, bad)));
  bad = r;
  bad.conclusions[0].point_witness = {};
  EXPECT_FALSE(transcript_ok(recheck_fan(bar, bad)));
}

TEST(BarRule, InductiveClosureOfLengthTwo) {
  auto sp = TruncatedSpace::baire(2, 3);
  const Bar bar = Bar::inductive_closure_of(sp, sp->u_bracket({}, 2));
  const BarResult r = bar_rule(bar);
  EXPECT_TRUE(r.holds_at_root);
  EXPECT_TRUE(inductive_closure_contains_root(bar));
  EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
  EXPECT_FALSE(r.induction.steps.empty());
}

TEST(BarRule, TrivialBar) {
  auto sp = TruncatedSpace::baire(2, 2);
  const BarResult r = bar_rule(Bar(sp, [](const FinSeq&) { return true; }, true, true));
  EXPECT_TRUE(r.holds_at_root);
  EXPECT_EQ(r.cover, std::vector<FinSeq>{FinSeq{}});
  EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
}

TEST(BarRule, Preconditions) {
  auto sp = TruncatedSpace::baire(2, 3);
  auto len2 = [](const FinSeq& u) { return u.size() >= 2; };
  EXPECT_THROW(Bar(sp, len2, true, true), NotInductive);
  EXPECT_THROW(bar_rule(Bar(sp, len2, true, false)), NotInductive);
  EXPECT_THROW(bar_rule(Bar(sp, len2, false, false)), NotMonotone);
  EXPECT_THROW(bar_rule(Bar::inductive_closure_of(sp, {{0}})), PremiseNotForced);
}

TEST(BarRule, RandomBarsAgreeWithClosureOracle) {
  std::mt19937_64 rng(5);
  int concluded = 0;
  for (int iter = 0; iter < 30; ++iter) {
    const int branch = 2 + static_cast<int>(rng() % 2);
    const int depth = branch == 2 ? 3 : 2;
    auto sp = TruncatedSpace::baire(branch, depth);
    const auto gens = random_generators(rng, *sp, depth, 2 + static_cast<int>(rng() % 8));
    const Bar bar = Bar::inductive_closure_of(sp, gens);
    if (!inductive_closure_contains_root(bar)) {
      EXPECT_THROW(bar_rule(bar), PremiseNotForced) << iter;
      continue;
    }
    const BarResult r = bar_rule(bar);
    EXPECT_TRUE(r.holds_at_root);
    EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
    ++concluded;
  }
  EXPECT_GT(concluded, 5);
}

TEST(BarRule, TamperedInductionFailsRecheck) {
  auto sp = TruncatedSpace::baire(2, 3);
  const Bar bar = Bar::inductive_closure_of(sp, sp->u_bracket({}, 2));
  const BarResult r = bar_rule(bar);
  BarResult bad = r;
  bad.induction.steps.erase(bad.induction.steps.begin());
  EXPECT_FALSE(transcript_ok(recheck_bar(bar, bad)));
  bad = r;
  bad.cover = {{0}};
  EXPECT_FALSE(transcript_ok(recheck_bar(bar, bad)));
}

namespace {

RelationTable identity_table(int branch, int len) {
  return {branch, len,
          [len](const Point& a, const FinSeq& b) {
            for (int n = 0; n < len; ++n)
              if (b[n] != a.at(n)) return false;
            return true;
          },
          "identity"};
}

RelationTable shift_table(int branch, int len) {
  return {branch, len,
          [len](const Point& a, const FinSeq& b) {
            for (int n = 0; n < len; ++n)
              if (b[n] != a.at(n + 1)) return false;
            return true;
          },
          "shift"};
}

}  // namespace

TEST(ContinuityRule, Identity) {
  const ContinuityResult r = continuity_rule(identity_table(2, 2));
  EXPECT_EQ(r.inner_depth, 3);
  ASSERT_EQ(r.f.size(), r.points.size());
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    EXPECT_EQ(r.f[i], (FinSeq{r.points[i].at(0), r.points[i].at(1)}));
    EXPECT_EQ(r.modulus[i], (std::vector<int>{0, 1, 2}));
  }
  EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
}

TEST(ContinuityRule, Shift) {
  const ContinuityResult r = continuity_rule(shift_table(2, 2));
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    EXPECT_EQ(r.f[i], (FinSeq{r.points[i].at(1), r.points[i].at(2)}));
    EXPECT_EQ(r.modulus[i], (std::vector<int>{0, 2, 3}));
  }
  EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
}

TEST(ContinuityRule, WiderBranchingAndCantor) {
  const ContinuityResult r = continuity_rule(identity_table(3, 1));
  EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
  const ContinuityResult c = continuity_rule(shift_table(2, 1), {SpaceKind::Cantor, 0});
  EXPECT_TRUE(transcript_ok(c.transcript)) << failures(c.transcript);
}

TEST(ContinuityRule, RandomContinuousTables) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 6; ++iter) {
    const int len = 1 + static_cast<int>(rng() % 2);
    const int m = static_cast<int>(rng() % (len + 2));
    const ValueDomain in = ValueDomain::seq(2, m), out = ValueDomain::seq(2, len);
    std::vector<int> g(in.size());
    for (int& x : g) x = static_cast<int>(rng() % out.size());
    RelationTable rel{2, len,
                      [=](const Point& a, const FinSeq& b) {
                        FinSeq head(m);
                        for (int i = 0; i < m; ++i) head[i] = a.at(i);
                        return out.decode(g[in.encode(head)]) == b;
                      },
                      "random"};
    const ContinuityResult r = continuity_rule(rel);
    EXPECT_TRUE(transcript_ok(r.transcript)) << failures(r.transcript);
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      EXPECT_TRUE(rel.phi(r.points[i], r.f[i]));
      for (int k = 0; k <= len; ++k) EXPECT_LE(r.modulus[i][k], m);
    }
  }
}

TEST(ContinuityRule, DiscontinuousTablesHaveNoModulus) {
  RelationTable tail{2, 1, [](const Point& a, const FinSeq& b) { return b[0] == a.tail; }, "tail"};
  EXPECT_THROW(continuity_rule(tail), NoModulus);
  RelationTable deep{2, 1, [](const Point& a, const FinSeq& b) { return b[0] == a.at(2); },
                     "deep"};
  EXPECT_THROW(continuity_rule(deep), NoModulus);
  EXPECT_NO_THROW(continuity_rule(deep, {SpaceKind::Baire, 3}));
}

TEST(ContinuityRule, NonFunctionalTables) {
  RelationTable all{2, 1, [](const Point&, const FinSeq&) { return true; }, "all"};
  EXPECT_THROW(continuity_rule(all), NotUnique);
  RelationTable none{2, 1, [](const Point&, const FinSeq&) { return false; }, "none"};
  EXPECT_THROW(continuity_rule(none), NotForced);
}

TEST(ContinuityRule, TamperedModulusFailsRecheck) {
  const RelationTable rel = identity_table(2, 2);
  const ContinuityResult r = continuity_rule(rel);
  ContinuityResult bad = r;
  bad.modulus[3][2] = 1;
  EXPECT_FALSE(transcript_ok(recheck_continuity(rel, {}, bad)));
  bad = r;
  bad.f[0][0] ^= 1;
  EXPECT_FALSE(transcript_ok(recheck_continuity(rel, {}, bad)));
}
