#include <gtest/gtest.h>

#include <random>

#include "ftop/errors.hpp"
#include "ftop/maps.hpp"
#include "ftop/points.hpp"

using namespace ftop;

namespace {

Mask set_of(const TruncatedSpace& sp, std::initializer_list<FinSeq> xs) {
  Mask m(sp.size(), false);
  for (const FinSeq& u : xs) m[sp.index(u)] = true;
  return m;
}

std::vector<Mask> masks(const TruncatedSpace& sp, const std::vector<Point>& pts) {
  std::vector<Mask> out;
  for (const Point& p : pts) out.push_back(point_mask(sp, p));
  return out;
}

}  // namespace

TEST(Point, ConstantZeroIsAPoint) {
  auto sp = TruncatedSpace::cantor(3);
  EXPECT_TRUE(is_point(*sp, Point{{}, 0}));
}

TEST(Point, NonDirectedSetFailsConditionTwo) {
  auto sp = TruncatedSpace::cantor(3);
  Verdict v = is_point(*sp->topology(), set_of(*sp, {{}, {0}, {1}}));
  EXPECT_FALSE(v);
  EXPECT_EQ(v.condition, 2);
}

TEST(Point, OtherConditions) {
  auto sp = TruncatedSpace::cantor(3);
  EXPECT_EQ(is_point(*sp->topology(), Mask(sp->size(), false)).condition, 0);
  EXPECT_EQ(is_point(*sp->topology(), set_of(*sp, {{0}})).condition, 1);
  // Upwards closed and directed but stops above the leaves.
  EXPECT_EQ(is_point(*sp->topology(), set_of(*sp, {{}, {0}})).condition, 3);
}

TEST(Point, MembershipUnfolds) {
  auto sp = TruncatedSpace::cantor(3);
  Point p{{1, 0}, 1};
  EXPECT_TRUE(is_point(*sp, p));
  EXPECT_TRUE(p.contains({1}));
  EXPECT_FALSE(p.contains({0}));
  EXPECT_TRUE(p.contains({1, 0, 1}));
  EXPECT_FALSE(p.contains({1, 0, 0}));
  Mask m = point_mask(*sp, p);
  // Oracle: exactly the initial segments of 1,0,1,1,...
  Mask expect = set_of(*sp, {{}, {1}, {1, 0}, {1, 0, 1}});
  EXPECT_EQ(m, expect);
}

TEST(Point, NormalizationAndFamily) {
  EXPECT_EQ((Point{{0, 1, 1}, 1}), (Point{{0}, 1}));
  EXPECT_EQ((Point{{0, 1, 1}, 1}).normalized().prefix, (FinSeq{0}));
  auto pts = all_points(2, 2);
  // prefix length 0: 2 tails; length k >= 1: 2^k prefixes, one tail each.
  EXPECT_EQ(pts.size(), 2u + 2u + 4u);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(pts[i] == pts[j]);
  auto sp = TruncatedSpace::baire(3, 3);
  for (const Point& p : all_points(3, 2)) EXPECT_TRUE(is_point(*sp, p));
}

TEST(PtSpace, FullFamily) {
  auto sp = TruncatedSpace::cantor(3);
  PtSpace pt(sp->topology(), masks(*sp, all_points(2, 3)));
  EXPECT_TRUE(pt.leq_pt(sp->index({0}), sp->index({})));
  EXPECT_FALSE(pt.leq_pt(sp->index({}), sp->index({0})));
  EXPECT_TRUE(pt.covers_pt(0, sp->sieve({}, {{0}, {1}})));
}

TEST(PtSpace, ImpoverishedFamily) {
  auto sp = TruncatedSpace::cantor(3);
  PtSpace pt(sp->topology(), masks(*sp, {Point{{}, 0}}));
  Sieve s = sp->sieve({}, {{0}});
  EXPECT_TRUE(pt.covers_pt(0, s));
  EXPECT_FALSE(sp->topology()->covers(0, s));
  EnoughPointsReport rep = enough_points_check(pt, {s});
  EXPECT_EQ(rep.pt_not_cov, 1u);
  EXPECT_EQ(rep.cov_not_pt, 0u);
}

TEST(PtSpace, RejectsNonPoints) {
  auto sp = TruncatedSpace::cantor(2);
  EXPECT_THROW(PtSpace(sp->topology(), {set_of(*sp, {{}, {0}, {1}})}), NotAPoint);
}

TEST(EnoughPoints, FullFamilyAgreesOnGeneratorSieves) {
  auto sp = TruncatedSpace::cantor(3);
  PtSpace pt(sp->topology(), masks(*sp, all_points(2, 3)));
  std::vector<Sieve> sample;
  for (int a = 0; a < sp->size(); ++a)
    enumerate_sieves(sp->basis(), a, {}, [&](const Sieve& s) {
      sample.push_back(s);
      return true;
    });
  EnoughPointsReport rep = enough_points_check(pt, sample);
  EXPECT_EQ(rep.agreements, rep.sampled);
}

TEST(EnoughPoints, CovImpliesCovPtOnRandomSieves) {
  std::mt19937_64 rng(21);
  auto sp = TruncatedSpace::baire(2, 4);
  PtSpace pt(sp->topology(), masks(*sp, {Point{{}, 0}, Point{{1}, 0}, Point{{0, 1, 1}, 0}}));
  std::vector<Sieve> sample;
  for (int i = 0; i < 500; ++i) {
    Mask m(sp->size());
    for (int v = 0; v < sp->size(); ++v) m[v] = rng() % 3 == 0;
    sample.push_back(Sieve::generated(sp->basis(), static_cast<int>(rng() % sp->size()), m));
  }
  EnoughPointsReport rep = enough_points_check(pt, sample);
  EXPECT_EQ(rep.sampled, 500u);
  EXPECT_EQ(rep.cov_not_pt, 0u);
  for (int a = 0; a < sp->size(); ++a)
    for (int b = 0; b < sp->size(); ++b)
      if (sp->basis()->leq(a, b)) EXPECT_TRUE(pt.leq_pt(a, b));
}

TEST(ContinuousMap, IdentityOnCantor) {
  auto sp = TruncatedSpace::cantor(3);
  ContinuousMap id = identity_map(sp->topology());
  EXPECT_TRUE(check_continuous_map(id));
  // Truncated Cantor space is subcanonical: I coincides with <=.
  for (int p = 0; p < sp->size(); ++p)
    for (int q = 0; q < sp->size(); ++q) EXPECT_EQ(id(p, q), sp->basis()->leq(p, q));
}

TEST(ContinuousMap, PointAsMap) {
  auto sp = TruncatedSpace::cantor(3);
  for (const Point& p : all_points(2, 2)) {
    ContinuousMap f = point_as_map(sp->topology(), point_mask(*sp, p));
    EXPECT_TRUE(check_continuous_map(f)) << p.name();
  }
  // A non-point fails as a map.
  ContinuousMap bad = point_as_map(sp->topology(), set_of(*sp, {{}, {0}, {1}}));
  EXPECT_FALSE(check_continuous_map(bad));
}

TEST(ContinuousMap, DroppingClosureFailsFive) {
  auto sp = TruncatedSpace::cantor(2);
  auto rel = identity_map(sp->topology()).relation();
  // <0,0> and <0,1> stay in the fiber of <0> but <0> itself is removed.
  // Conditions (1)-(4) still hold, (5) does not.
  rel[sp->index({0})][sp->index({0})] = false;
  rel[sp->index({0})][sp->index({})] = false;
  rel[sp->index({})][sp->index({})] = false;
  ContinuousMap f = ContinuousMap::from_relation(sp->topology(), sp->topology(), rel);
  Verdict v = check_continuous_map(f);
  EXPECT_FALSE(v);
  EXPECT_EQ(v.condition, 5);
  ContinuousMap g = ContinuousMap::from_relation(
      sp->topology(), sp->topology(), close_relation(*sp->topology(), *sp->topology(), rel));
  EXPECT_TRUE(check_continuous_map(g));
  EXPECT_EQ(g, identity_map(sp->topology()));
}

TEST(ContinuousMap, ComposeWithIdentity) {
  auto sp = TruncatedSpace::cantor(3);
  ContinuousMap id = identity_map(sp->topology());
  // Bitwise complement: (u, v) when v flips every entry of u.
  std::vector<std::pair<int, int>> gens;
  for (int u = 0; u < sp->size(); ++u) {
    FinSeq v = sp->seq(u);
    for (int& x : v) x = 1 - x;
    gens.emplace_back(u, sp->index(v));
  }
  ContinuousMap f = ContinuousMap::from_generators(sp->topology(), sp->topology(), gens);
  EXPECT_TRUE(check_continuous_map(f));
  EXPECT_EQ(compose(f, id), f);
  EXPECT_EQ(compose(id, f), f);
  EXPECT_EQ(compose(f, f), id);
  for (const Point& p : all_points(2, 2)) {
    Mask m = point_mask(*sp, p);
    EXPECT_EQ(pt_functor(id, m), m);
    Mask image = pt_functor(f, m);
    EXPECT_TRUE(is_point(*sp->topology(), image));
    Point flipped = p;
    for (int& x : flipped.prefix) x = 1 - x;
    flipped.tail = 1 - p.tail;
    EXPECT_EQ(image, point_mask(*sp, flipped));
    EXPECT_EQ(pt_functor(compose(f, f), m), pt_functor(f, pt_functor(f, m)));
  }
}

TEST(ContinuousMap, ShiftIsNotContinuousAtTruncation) {
  // Dropping the first entry needs one more level of input than the
  // truncation provides, so condition (4) fails at the leaves.
  auto sp = TruncatedSpace::cantor(3);
  std::vector<std::pair<int, int>> gens;
  for (int u = 0; u < sp->size(); ++u)
    if (!sp->seq(u).empty())
      gens.emplace_back(u, sp->index(FinSeq(sp->seq(u).begin() + 1, sp->seq(u).end())));
  Verdict v = check_continuous_map(ContinuousMap::from_generators(sp->topology(), sp->topology(), gens));
  EXPECT_FALSE(v);
  EXPECT_EQ(v.condition, 4);
}

TEST(ContinuousMap, NotComposable) {
  auto a = TruncatedSpace::cantor(2), b = TruncatedSpace::cantor(3);
  EXPECT_THROW(compose(identity_map(a->topology()), identity_map(b->topology())), NotComposable);
}
