#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ftop/double.hpp"
#include "ftop/errors.hpp"
#include "ftop/sheaves.hpp"

using namespace ftop;

namespace {

std::vector<Sieve> all_sieves(const BasisPtr& b) {
  std::vector<Sieve> out;
  for (int a = 0; a < b->size(); ++a)
    enumerate_sieves(b, a, {}, [&](const Sieve& s) {
      out.push_back(s);
      return true;
    });
  return out;
}

LocallyConstantSheaf::Representative rep_of(const TruncatedSpace& sp, const Sieve& s,
                                            std::vector<std::pair<FinSeq, int>> values) {
  LocallyConstantSheaf::Representative r{s, std::vector<int>(sp.size(), -1)};
  for (int v : s.member_list())
    for (auto& [g, val] : values)
      if (seq_leq(sp.seq(v), g)) r.value[v] = val;
  return r;
}

}  // namespace

TEST(ConstantPresheaf, TwoPieceCoverHasNoAmalgamation) {
  auto sp = TruncatedSpace::cantor(1);
  ConstantPresheaf k(sp->topology(), 2);
  SheafReport rep = sheaf_check(k, {sp->sieve({}, {{0}, {1}})});
  EXPECT_EQ(rep.covers, 1u);
  EXPECT_EQ(rep.families, 4u);
  EXPECT_EQ(rep.missing, 2u);
  EXPECT_FALSE(rep.ok());
  EXPECT_TRUE(check_presheaf_laws(k).ok());
}

TEST(ConstantPresheaf, MaximalCoversOnlyPassVacuously) {
  TopologyPtr d = discrete_space({"a", "b", "c"});
  ConstantPresheaf k(d, 3);
  EXPECT_TRUE(sheaf_check(k, all_sieves(d->basis())).ok());
}

TEST(NatSheaf, PassesOnTruncatedSpacesAndDoubles) {
  std::vector<TopologyPtr> tops{TruncatedSpace::cantor(2)->topology(),
                                TruncatedSpace::baire(2, 2)->topology()};
  auto sp = TruncatedSpace::cantor(2);
  tops.push_back(DoubleSpace::make(sp, leaf_points(*sp))->topology());
  for (const TopologyPtr& t : tops) {
    LocallyConstantSheaf nat(t, ValueDomain::nat(3));
    EXPECT_TRUE(check_presheaf_laws(nat).ok());
    SheafReport rep = sheaf_check(nat, all_sieves(t->basis()));
    EXPECT_TRUE(rep.ok()) << (rep.witnesses.empty() ? "" : rep.witnesses.front());
    EXPECT_GT(rep.families, 0u);
  }
}

TEST(NatSheaf, SolverAgreesWithSearch) {
  auto sp = TruncatedSpace::cantor(3);
  LocallyConstantSheaf nat(sp->topology(), ValueDomain::nat(8));
  SheafCheckOptions small;
  small.section_cap = 0;  // force the solver path
  SheafReport rep = sheaf_check(nat, all_sieves(sp->basis()), small);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.solver_instances, rep.families);
}

TEST(NatSheaf, PureRestrictsToPure) {
  auto sp = TruncatedSpace::cantor(3);
  LocallyConstantSheaf nat(sp->topology(), ValueDomain::nat(8));
  Section five = nat.pure(0, 5);
  Section r = nat.restrict(0, five, sp->index({1, 0}));
  EXPECT_TRUE(nat.is_pure(r));
  EXPECT_EQ(r, nat.pure(sp->index({1, 0}), 5));
  EXPECT_EQ(nat.show(0, five), "5");
}

TEST(NatSheaf, MixedElement) {
  auto sp = TruncatedSpace::cantor(3);
  LocallyConstantSheaf nat(sp->topology(), ValueDomain::nat(8));
  Sieve s = sp->sieve({}, {{0}, {1}});
  Section x = nat.from_representative(0, rep_of(*sp, s, {{{0}, 5}, {{1}, 7}}));
  EXPECT_FALSE(nat.is_pure(x));
  EXPECT_EQ(nat.value_at(0, x, sp->index({0, 1})), 5);
  EXPECT_EQ(nat.value_at(0, x, sp->index({1})), 7);
  EXPECT_EQ(nat.purity_sieve(0, x), s);
  EXPECT_EQ(nat.show(0, x), "{<0>: 5, <1>: 7}");
  EXPECT_TRUE(pure_density_check(nat, 0));
  // Incompatible values and non-covers are rejected.
  auto bad = rep_of(*sp, s, {{{0}, 5}, {{1}, 7}});
  bad.value[sp->index({0, 0})] = 6;
  EXPECT_THROW(nat.from_representative(0, bad), InputError);
  EXPECT_THROW(nat.from_representative(0, rep_of(*sp, sp->sieve({}, {{0}}), {{{0}, 5}})),
               NotCovering);
}

TEST(NatSheaf, EquivalenceOfRepresentatives) {
  auto sp = TruncatedSpace::cantor(3);
  LocallyConstantSheaf nat(sp->topology(), ValueDomain::nat(8));
  auto whole = rep_of(*sp, Sieve::maximal(sp->basis(), 0), {{{}, 5}});
  auto kids = rep_of(*sp, sp->sieve({}, {{0}, {1}}), {{{0}, 5}, {{1}, 5}});
  EXPECT_TRUE(nat.equivalent(0, whole, kids));
  auto other = rep_of(*sp, sp->sieve({}, {{0}, {1}}), {{{0}, 5}, {{1}, 6}});
  EXPECT_FALSE(nat.equivalent(0, whole, other));
}

TEST(NatSheaf, EquivalenceMatchesNormalForm) {
  // Random representatives on covers of <>; ∼ by the definition must agree
  // with equality of normalized sections.
  std::mt19937_64 rng(4);
  auto sp = TruncatedSpace::cantor(3);
  LocallyConstantSheaf nat(sp->topology(), ValueDomain::nat(2));
  std::vector<Sieve> covers = sp->topology()->all_covers(0);
  auto random_rep = [&]() {
    const Sieve& s = covers[rng() % covers.size()];
    std::vector<std::pair<FinSeq, int>> vals;
    for (int g : s.generators()) vals.emplace_back(sp->seq(g), static_cast<int>(rng() % 2));
    return rep_of(*sp, s, vals);
  };
  for (int iter = 0; iter < 300; ++iter) {
    auto a = random_rep(), b = random_rep();
    EXPECT_EQ(nat.equivalent(0, a, b), nat.from_representative(0, a) == nat.from_representative(0, b));
    Section x = nat.from_representative(0, a);
    auto canon = nat.canonical_representative(0, x);
    EXPECT_TRUE(nat.equivalent(0, a, canon));
    EXPECT_EQ(nat.from_representative(0, canon), x);
    // The canonical sieve is the coarsest one.
    EXPECT_TRUE(a.sieve.subset_of(canon.sieve));
  }
}

TEST(DerivedSheaves, ListsAndSequences) {
  auto sp = TruncatedSpace::cantor(2);
  ValueDomain f2 = ValueDomain::finseq(2, 2);
  EXPECT_EQ(f2.size(), 7);
  for (int v = 0; v < f2.size(); ++v) EXPECT_EQ(f2.encode(f2.decode(v)), v);
  LocallyConstantSheaf finseq2(sp->topology(), f2);
  const int v01 = f2.encode({0, 1});
  ASSERT_GE(v01, 0);
  EXPECT_EQ(finseq2.show(0, finseq2.pure(0, v01)), "<0,1>");
  EXPECT_TRUE(pure_density_check(finseq2, 0));
  ValueDomain s2 = ValueDomain::seq(2, 2);
  EXPECT_EQ(s2.size(), 4);
  LocallyConstantSheaf seq2(sp->topology(), s2);
  EXPECT_THROW(pure_density_check(seq2, 0), UnsupportedSort);
  for (auto d : {ValueDomain::two(), f2, s2, ValueDomain::finseq(3, 1), ValueDomain::seq(3, 1)}) {
    LocallyConstantSheaf x(sp->topology(), d);
    EXPECT_TRUE(sheaf_check(x, all_sieves(sp->basis())).ok()) << d.name();
    EXPECT_TRUE(check_presheaf_laws(x).ok()) << d.name();
  }
}

TEST(DerivedSheaves, ProjectionIsAGlobalSequenceSection) {
  auto sp = TruncatedSpace::cantor(2);
  auto db = DoubleSpace::make(sp, leaf_points(*sp));
  LocallyConstantSheaf seq2(db->topology(), ValueDomain::seq(2, 2));
  const int top = db->d({});
  // Each piece of the smallest cover of D<> is a leaf D(v) with its
  // singletons; the projection takes value v there.
  Section pi(seq2.pieces(top));
  for (int k = 0; k < seq2.pieces(top); ++k) {
    const int d = seq2.piece_members(top)[k].front();
    pi[k] = seq2.domain().encode(sp->seq(db->inner_index(d)));
  }
  ContinuousMap m = section_to_sequence_map(seq2, top, pi, *sp);
  EXPECT_TRUE(check_continuous_map(m));
  EXPECT_EQ(m, canonical_maps(*db).pi);
}

TEST(EmptyCover, Rejected) {
  CoveringSystem sys;
  sys.basis = std::make_shared<const Basis>(Basis::from_pairs({"a"}, {}));
  sys.families = {{{}}};
  TopologyPtr t = generate_topology(sys, 5);
  EXPECT_THROW(LocallyConstantSheaf(t, ValueDomain::nat(2)), EmptyCoverPresent);
}

TEST(CoveringSystemCheck, AgreesWithFullCheckOnRandomPresheaves) {
  std::mt19937_64 rng(17);
  int sheaves = 0, non_sheaves = 0;
  for (int iter = 0; iter < 60; ++iter) {
    auto sp = iter % 2 ? TruncatedSpace::baire(2, 2) : TruncatedSpace::baire(3, 2);
    auto x = random_tree_presheaf(rng, *sp, 3, iter % 3 == 0);
    SheafReport full = sheaf_check(*x, all_sieves(sp->basis()));
    SheafReport local = sheaf_check_covering_system(*x, sp->covering_system());
    EXPECT_EQ(full.ok(), local.ok());
    EXPECT_TRUE(check_presheaf_laws(*x).ok());
    (full.ok() ? sheaves : non_sheaves)++;
  }
  EXPECT_GT(sheaves, 0);
  EXPECT_GT(non_sheaves, 0);
}

TEST(CoveringSystemCheck, MaximalOnlySystemPasses) {
  CoveringSystem sys;
  sys.basis = std::make_shared<const Basis>(Basis::from_pairs({"a", "b"}, {{1, 0}}));
  sys.families = {{{0}}, {{1}}};
  TopologyPtr t = generate_topology(sys, 5);
  ConstantPresheaf k(t, 3);
  EXPECT_TRUE(sheaf_check_covering_system(k, sys).ok());
}

TEST(CoveringSystemCheck, DeepFailureShowsUpOnGenerators) {
  std::mt19937_64 rng(23);
  auto sp = TruncatedSpace::baire(2, 2);
  Sieve deep = Sieve::generated(sp->basis(), 0, sp->bracket_mask(0, 2));
  int seen = 0;
  for (int iter = 0; iter < 100; ++iter) {
    auto x = random_tree_presheaf(rng, *sp, 2, false);
    if (sheaf_check(*x, {deep}).ok()) continue;
    ++seen;
    EXPECT_FALSE(sheaf_check_covering_system(*x, sp->covering_system()).ok());
  }
  EXPECT_GT(seen, 0);
}

namespace {

// Every relation from the space to the discrete space on n values that is a
// continuous map.
std::vector<std::vector<Mask>> all_maps_to_discrete(const TopologyPtr& t, const TopologyPtr& d) {
  const int np = t->size(), nq = d->size();
  std::vector<std::vector<Mask>> out;
  const int bits = np * nq;
  for (std::uint64_t code = 0; code < (1ull << bits); ++code) {
    std::vector<Mask> rel(np, Mask(nq, false));
    for (int i = 0; i < bits; ++i) rel[i / nq][i % nq] = code >> i & 1;
    if (check_continuous_map(ContinuousMap::from_relation(t, d, rel))) out.push_back(rel);
  }
  return out;
}

}  // namespace

TEST(NatSheaf, GlobalSectionsAreMapsToDiscreteNaturals) {
  auto c1 = TruncatedSpace::cantor(1), c2 = TruncatedSpace::cantor(2);
  std::vector<TopologyPtr> tops{c1->topology(), c2->topology(),
                                DoubleSpace::make(c1, leaf_points(*c1))->topology()};
  TopologyPtr d = discrete_space({"0", "1"});
  for (const TopologyPtr& t : tops) {
    LocallyConstantSheaf nat(t, ValueDomain::nat(2));
    auto maps = all_maps_to_discrete(t, d);
    const int top = 0;  // <> and D<> come first
    ASSERT_EQ(maps.size(), nat.count(top));
    std::set<std::vector<Mask>> images;
    for (std::uint64_t i = 0; i < nat.count(top); ++i) {
      ContinuousMap m = section_to_discrete_map(nat, top, nat.nth(top, i), d);
      EXPECT_TRUE(check_continuous_map(m));
      images.insert(m.relation());
    }
    EXPECT_EQ(images.size(), maps.size());
    for (const auto& rel : maps) EXPECT_TRUE(images.count(rel));
  }
}
