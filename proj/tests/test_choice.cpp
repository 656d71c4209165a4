#include <gtest/gtest.h>

#include <random>

#include "ftop/choice.hpp"
#include "ftop/errors.hpp"

using namespace ftop;

namespace {

void expect_refinement(const Topology& t, const Sieve& s, const std::vector<int>& alpha) {
  const Basis& b = *t.basis();
  EXPECT_TRUE(pairwise_disjoint(b, alpha)) << s.to_string();
  Mask m(b.size(), false);
  for (int a : alpha) {
    EXPECT_TRUE(s.contains(a)) << s.to_string();
    m[a] = true;
  }
  EXPECT_TRUE(t.covers(s.root(), Sieve::generated(t.basis(), s.root(), m))) << s.to_string();
}

// Is there any pairwise disjoint subset of s's members that covers?
bool refinement_exists(const Topology& t, const Sieve& s) {
  const std::vector<int> mem = s.member_list();
  const Basis& b = *t.basis();
  for (std::uint64_t code = 0; code < (1ull << mem.size()); ++code) {
    std::vector<int> pick;
    Mask m(b.size(), false);
    for (std::size_t i = 0; i < mem.size(); ++i)
      if (code >> i & 1) {
        pick.push_back(mem[i]);
        m[mem[i]] = true;
      }
    if (pairwise_disjoint(b, pick) && t.covers(s.root(), Sieve::generated(t.basis(), s.root(), m)))
      return true;
  }
  return false;
}

}  // namespace

TEST(CcRefine, Examples) {
  auto sp = TruncatedSpace::cantor(3);
  Sieve s = sp->sieve({}, {{0}, {1, 0}, {1, 1}});
  EXPECT_EQ(cc_refine(*sp, s),
            (std::vector<int>{sp->index({0}), sp->index({1, 0}), sp->index({1, 1})}));
  const int p = sp->index({1});
  EXPECT_EQ(cc_refine(*sp, Sieve::maximal(sp->basis(), p)), std::vector<int>{p});
  EXPECT_THROW(cc_refine(*sp, sp->sieve({}, {{0}})), NotACover);
}

TEST(CcRefine, EveryCoverOfTruncatedSpacesAndDoubles) {
  std::vector<SpacePtr> spaces{TruncatedSpace::cantor(3), TruncatedSpace::baire(2, 2),
                               TruncatedSpace::baire(3, 2)};
  for (const SpacePtr& sp : spaces) {
    const Topology& t = *sp->topology();
    for (int p = 0; p < sp->size(); ++p)
      for (const Sieve& s : t.all_covers(p)) {
        expect_refinement(t, s, cc_refine(*sp, s));
        expect_refinement(t, s, cc_refine(t, s));
      }
    if (sp->size() > 10) continue;
    auto db = DoubleSpace::make(sp, leaf_points(*sp));
    const Topology& dt = *db->topology();
    for (int p = 0; p < db->size(); ++p)
      for (const Sieve& s : dt.all_covers(p)) {
        expect_refinement(dt, s, cc_refine(*db, s));
        expect_refinement(dt, s, cc_refine(dt, s));
      }
  }
}

TEST(CcRefine, DoubleOfCantor) {
  auto sp = TruncatedSpace::cantor(2);
  auto db = DoubleSpace::make(sp, leaf_points(*sp));
  const Topology& dt = *db->topology();
  const int top = db->d({});
  for (const Sieve& s : dt.all_covers(top)) {
    auto alpha = cc_refine(*db, s);
    for (int a : alpha) EXPECT_TRUE(db->is_d(a) || db->basis()->leq(a, top));
  }
  // A singleton refines to itself.
  EXPECT_EQ(cc_refine(*db, Sieve::maximal(db->basis(), db->singleton(2))),
            std::vector<int>{db->singleton(2)});
}

TEST(CcRefine, SearchIsCompleteOnRandomSystems) {
  std::mt19937_64 rng(8);
  int found = 0, none = 0;
  for (int iter = 0; iter < 150; ++iter) {
    CoveringSystem sys = random_covering_system(rng, 6);
    TopologyPtr t = generate_topology(sys, 10);
    for (int p = 0; p < t->size(); ++p)
      for (const Sieve& s : t->all_covers(p)) {
        if (refinement_exists(*t, s)) {
          expect_refinement(*t, s, cc_refine(*t, s));
          ++found;
        } else {
          EXPECT_THROW(cc_refine(*t, s), NoRefinementFound);
          ++none;
        }
      }
  }
  EXPECT_GT(found, 0);
  EXPECT_GT(none, 0);
}

TEST(ChoiceAmalgamation, TwoPiecesGiveTheMixedSection) {
  auto sp = TruncatedSpace::cantor(3);
  LocallyConstantSheaf nat(sp->topology(), ValueDomain::nat(8));
  const int a = sp->index({0}), b = sp->index({1});
  Section x = choice_amalgamation(nat, 0, {a, b}, {nat.pure(a, 5), nat.pure(b, 7)});
  EXPECT_EQ(nat.show(0, x), "{<0>: 5, <1>: 7}");
  EXPECT_EQ(nat.restrict(0, x, a), nat.pure(a, 5));
  // A single piece returns the witness itself.
  Section w = nat.pure(0, 3);
  EXPECT_EQ(choice_amalgamation(nat, 0, {0}, {w}), w);
  EXPECT_THROW(choice_amalgamation(nat, 0, {0, a}, {w, nat.pure(a, 3)}), NotDisjoint);
  EXPECT_THROW(choice_amalgamation(nat, 0, {a}, {nat.pure(a, 3)}), NotCovering);
  EXPECT_THROW(choice_amalgamation(nat, a, {b}, {nat.pure(b, 3)}), NotBelowRoot);
}

TEST(ChoiceAmalgamation, ConstantPresheafIsNotASheaf) {
  auto sp = TruncatedSpace::cantor(1);
  ConstantPresheaf k(sp->topology(), 2);
  EXPECT_EQ(choice_amalgamation(k, 0, {1, 2}, {{0}, {0}}), Section{0});
  EXPECT_THROW(choice_amalgamation(k, 0, {1, 2}, {{0}, {1}}), NotCovering);
}

TEST(ChoiceAmalgamation, RandomInstancesAreUnique) {
  std::mt19937_64 rng(12);
  auto sp = TruncatedSpace::cantor(3);
  auto db = DoubleSpace::make(sp, leaf_points(*sp));
  std::vector<TopologyPtr> tops{sp->topology(), db->topology()};
  int instances = 0;
  for (const TopologyPtr& t : tops) {
    LocallyConstantSheaf nat(t, ValueDomain::nat(3));
    for (int iter = 0; iter < 50; ++iter) {
      const int p = static_cast<int>(rng() % t->size());
      auto covers = t->all_covers(p);
      const Sieve& s = covers[rng() % covers.size()];
      std::vector<int> alpha = t == tops[0] ? cc_refine(*sp, s) : cc_refine(*db, s);
      std::vector<Section> w;
      for (int a : alpha) w.push_back(nat.nth(a, rng() % nat.count(a)));
      Section x = choice_amalgamation(nat, p, alpha, w);
      int matches = 0;
      for (std::uint64_t i = 0; i < nat.count(p); ++i) {
        Section y = nat.nth(p, i);
        bool ok = true;
        for (std::size_t j = 0; j < alpha.size(); ++j) ok = ok && nat.restrict(p, y, alpha[j]) == w[j];
        if (ok) {
          ++matches;
          EXPECT_EQ(y, x);
        }
      }
      EXPECT_EQ(matches, 1);
      ++instances;
    }
  }
  EXPECT_EQ(instances, 100);
}
