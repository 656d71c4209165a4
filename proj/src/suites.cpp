#include "ftop/suites.hpp"

#include <random>
#include <set>

#include "ftop/brouwer.hpp"
#include "ftop/double.hpp"
#include "ftop/errors.hpp"
#include "ftop/forcing.hpp"
#include "ftop/maps.hpp"
#include "ftop/sheaves.hpp"

namespace ftop {

namespace {

constexpr std::size_t kWitnessesPerCheck = 5;

void add(SuiteReport& r, std::string name, bool pass, std::size_t instances,
         std::string detail = {}) {
  r.checks.push_back({std::move(name), pass, instances, std::move(detail)});
}

void add_witnesses(SuiteReport& r, const std::string& prefix, const std::vector<std::string>& w) {
  for (std::size_t i = 0; i < w.size() && i < kWitnessesPerCheck; ++i)
    r.witnesses.push_back(prefix + ": " + w[i]);
}

// Every sieve on p when there are at most cap of them; otherwise the
// maximal sieve, the smallest and basic covers, and cap sieves generated by
// random subsets of ↓p.
std::vector<Sieve> sieve_sample(const Topology& t, int p, std::size_t cap, std::mt19937_64& rng) {
  const BasisPtr& b = t.basis();
  std::vector<Sieve> out;
  const std::size_t seen = enumerate_sieves(b, p, Mask(b->size(), false), [&](const Sieve& s) {
    out.push_back(s);
    return out.size() <= cap;
  });
  if (seen <= cap) return out;
  out.clear();
  out.push_back(Sieve::maximal(b, p));
  if (t.has_smallest_cover()) out.push_back(t.smallest_cover(p));
  if (t.has_presentation())
    for (const Sieve& s : t.basic_covers(p)) out.push_back(s);
  const std::vector<int> below = b->below(p);
  for (std::size_t i = 0; i < cap; ++i) {
    Mask m(b->size(), false);
    for (int v : below) m[v] = rng() % 2;
    out.push_back(Sieve::generated(b, p, m));
  }
  return out;
}

// Relations P × {0..k-1} that are continuous maps to the discrete space,
// by enumerating a value set per element.
std::set<std::vector<Mask>> maps_to_discrete(const TopologyPtr& t, const TopologyPtr& d) {
  const int np = t->size(), nq = d->size();
  const std::uint64_t per = 1ull << nq;
  std::uint64_t total = 1;
  for (int i = 0; i < np; ++i) total *= per;
  std::set<std::vector<Mask>> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<Mask> rel(np, Mask(nq, false));
    std::uint64_t c = code;
    for (int p = 0; p < np; ++p, c /= per)
      for (int q = 0; q < nq; ++q) rel[p][q] = (c % per) >> q & 1;
    if (check_continuous_map(ContinuousMap::from_relation(t, d, rel))) out.insert(rel);
  }
  return out;
}

struct NamedTopology {
  std::string name;
  TopologyPtr t;
  std::shared_ptr<const CoveringSystem> system;
};

std::vector<NamedTopology> sheaf_spaces(int depth, int branch) {
  auto c = TruncatedSpace::cantor(depth);
  auto b = TruncatedSpace::baire(branch, depth);
  auto dc = DoubleSpace::make(c, leaf_points(*c));
  auto dbr = DoubleSpace::make(b, leaf_points(*b));
  auto sys = [](const Topology& t) {
    return std::make_shared<const CoveringSystem>(presentation_system(t));
  };
  return {{"cantor", c->topology(), std::make_shared<const CoveringSystem>(c->covering_system())},
          {"baire", b->topology(), std::make_shared<const CoveringSystem>(b->covering_system())},
          {"double-cantor", dc->topology(), sys(*dc->topology())},
          {"double-baire", dbr->topology(), sys(*dbr->topology())}};
}

}  // namespace

bool SuiteReport::ok() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

CoveringSystem presentation_system(const Topology& t) {
  if (!t.has_presentation()) throw InputError("topology has no presentation");
  CoveringSystem sys;
  sys.basis = t.basis();
  sys.families.resize(t.size());
  for (int a = 0; a < t.size(); ++a)
    for (const Sieve& s : t.basic_covers(a)) sys.families[a].push_back(s.generators());
  return sys;
}

std::vector<Point> standard_points() {
  return {Point{{}, 0}, Point{{}, 1}, Point{{0, 1}, 0}, Point{{1, 0}, 1}};
}

SuiteReport topology_suite(const SuiteOptions& opt) {
  SuiteReport r{"topology", {}, {}};
  std::mt19937_64 rng(opt.seed);
  std::size_t instances = 0, failures = 0;
  for (int i = 0; i < opt.samples; ++i) {
    const int n = 1 + static_cast<int>(rng() % opt.max_elements);
    const CoveringSystem sys = random_covering_system(rng, n);
    const TopologyPtr t = generate_topology(sys, n + 1);
    const AxiomReport a = check_topology_axioms(*t, n + 1);
    instances += a.instances;
    failures += a.failures.size();
    add_witnesses(r, "system " + std::to_string(i), a.failures);
  }
  add(r, "maximality, stability, local character", failures == 0, instances,
      std::to_string(opt.samples) + " systems, " + std::to_string(failures) + " failures");
  return r;
}

SuiteReport forcing_suite(const SuiteOptions& opt) {
  SuiteReport r{"forcing", {}, {}};
  auto sp = TruncatedSpace::cantor(opt.depth);
  auto db = DoubleSpace::make(sp, standard_points());
  auto m = ForcingModel::on_double(db, ModelOptions{opt.nat_max, -1});
  std::mt19937_64 rng(opt.seed);
  RandomFormulaOptions fo;
  fo.max_depth = opt.formula_depth;
  std::vector<Formula> fs;
  for (int i = 0; i < opt.samples; ++i) fs.push_back(random_formula(rng, m->signature(), fo));
  const LemmaReport lr = forcing_lemma_check(*m, fs);
  const std::size_t pairs = fs.size() * db->size();
  add(r, "monotonicity", lr.monotonicity == 0, pairs, std::to_string(lr.monotonicity) + " violations");
  add(r, "local character", lr.locality == 0, lr.cover_instances,
      std::to_string(lr.locality) + " violations");
  add(r, "one-pass agreement", lr.naturality == 0, pairs,
      std::to_string(lr.naturality) + " disagreements");
  add(r, "truth at points", lr.truth == 0, lr.truth_instances,
      std::to_string(lr.truth) + " disagreements");
  add_witnesses(r, "forcing", lr.witnesses);
  return r;
}

SuiteReport sheaf_suite(const SuiteOptions& opt) {
  SuiteReport r{"sheaves", {}, {}};
  std::mt19937_64 rng(opt.seed);
  SheafCheckOptions so;
  so.seed = opt.seed;
  so.family_cap = 1024;
  so.sample_families = 64;
  so.section_cap = 4096;
  const std::vector<ValueDomain> domains{ValueDomain::nat(3), ValueDomain::two(),
                                         ValueDomain::finseq(2, 2), ValueDomain::seq(2, 2)};
  for (const auto& nt : sheaf_spaces(opt.depth, opt.branch)) {
    std::vector<Sieve> sample;
    for (int p = 0; p < nt.t->size(); ++p)
      for (Sieve& s : sieve_sample(*nt.t, p, 120, rng)) sample.push_back(std::move(s));
    for (const ValueDomain& d : domains) {
      const LocallyConstantSheaf x(nt.t, d);
      const std::string tag = nt.name + "/" + d.name();
      const SheafReport laws = check_presheaf_laws(x, so);
      add(r, tag + " presheaf laws", laws.ok(), laws.law_instances);
      add_witnesses(r, tag, laws.witnesses);
      const SheafReport sc = sheaf_check(x, sample, so);
      add(r, tag + " sheaf condition", sc.ok() && sc.covers > 0, sc.families,
          std::to_string(sc.covers) + " covers, " + std::to_string(sc.missing) + " missing, " +
              std::to_string(sc.nonunique) + " non-unique");
      add_witnesses(r, tag, sc.witnesses);
      const SheafReport cs = sheaf_check_covering_system(x, *nt.system, so);
      add(r, tag + " sheaf condition on the presentation", cs.ok(), cs.families,
          std::to_string(cs.covers) + " families of covers");
      add_witnesses(r, tag, cs.witnesses);
      if (d.kind == ValueDomain::Kind::Seq) continue;
      std::size_t dense = 0;
      bool ok = true;
      for (int p = 0; p < nt.t->size(); ++p) {
        const Verdict v = pure_density_check(x, p, so);
        ++dense;
        if (!v) {
          ok = false;
          r.witnesses.push_back(tag + " purity at " + nt.t->basis()->name(p) + ": " + v.witness);
        }
      }
      add(r, tag + " pure density", ok, dense);
    }
  }

  // Global sections of the naturals against maps to a discrete space, on
  // spaces small enough to enumerate every relation.
  const TopologyPtr disc = discrete_space({"0", "1"});
  auto c1 = TruncatedSpace::cantor(1), c2 = TruncatedSpace::cantor(2);
  auto b31 = TruncatedSpace::baire(3, 1);
  const std::vector<NamedTopology> small{
      {"cantor/1", c1->topology(), nullptr},
      {"cantor/2", c2->topology(), nullptr},
      {"baire3/1", b31->topology(), nullptr},
      {"double-cantor/1", DoubleSpace::make(c1, leaf_points(*c1))->topology(), nullptr},
      {"double-baire3/1", DoubleSpace::make(b31, leaf_points(*b31))->topology(), nullptr}};
  for (const auto& nt : small) {
    const LocallyConstantSheaf nat(nt.t, ValueDomain::nat(2));
    const auto maps = maps_to_discrete(nt.t, disc);
    std::set<std::vector<Mask>> images;
    bool ok = true;
    for (std::uint64_t i = 0; i < nat.count(0); ++i) {
      const ContinuousMap f = section_to_discrete_map(nat, 0, nat.nth(0, i), disc);
      if (!check_continuous_map(f) || !maps.count(f.relation())) ok = false;
      images.insert(f.relation());
    }
    ok = ok && images.size() == nat.count(0) && images == maps;
    add(r, nt.name + " global sections are maps to discrete naturals", ok, maps.size(),
        std::to_string(nat.count(0)) + " sections, " + std::to_string(maps.size()) + " maps");
  }
  return r;
}

SuiteReport brouwer_suite(const SuiteOptions&) {
  SuiteReport r{"brouwer", {}, {}};
  const std::vector<std::pair<std::string, TopologyPtr>> sites{
      {"one-point", one_point_space()}, {"cantor/1", TruncatedSpace::cantor(1)->topology()}};
  for (const auto& [name, t] : sites) {
    const BrouwerSite site(t, 2);
    const BoReport b = bo_sheaf_checks(site, {2, 4096});
    add(r, name + " labelled tree sheaf", b.ok(), b.trees,
        std::to_string(b.classes) + " classes, " + std::to_string(b.amalgamations) +
            " amalgamations, " + std::to_string(b.sup_instances) + " sup instances");
    add(r, name + " no proper subalgebra", b.closure_classes == b.classes, b.classes,
        std::to_string(b.closure_classes) + " of " + std::to_string(b.classes) + " classes");
    add_witnesses(r, name, b.failures);
  }
  return r;
}

SuiteReport alt_baire_suite(const SuiteOptions& opt) {
  SuiteReport r{"alt-baire", {}, {}};
  for (int b = 1; b <= opt.branch; ++b)
    for (int l = 0; l <= opt.depth; ++l) {
      const AltBaireReport a = alt_baire_equiv_check(b, l, opt.seed);
      add(r, "branch " + std::to_string(b) + " depth " + std::to_string(l), a.verdict.holds,
          a.sieves,
          std::to_string(a.trees) + " trees, " + std::to_string(a.sampled_roots) +
              " sampled roots");
      if (!a.verdict.holds)
        r.witnesses.push_back("condition " + std::to_string(a.verdict.condition) + ": " +
                              a.verdict.witness);
    }
  return r;
}

}  // namespace ftop
