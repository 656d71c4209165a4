#include "ftop/topology.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ftop/errors.hpp"

namespace ftop {

int Derivation::depth() const {
  int d = 0;
  for (const auto& p : premises) d = std::max(d, p.depth() + 1);
  return rule < 0 ? 0 : std::max(d, 1);
}

Topology::Topology(BasisPtr basis, CoverFn cover, int default_fuel, SievesFn basic_covers,
                   SieveFn smallest_cover)
    : basis_(std::move(basis)),
      cover_(std::move(cover)),
      default_fuel_(default_fuel),
      basic_covers_(std::move(basic_covers)),
      smallest_cover_(std::move(smallest_cover)) {}

CoverResult Topology::cover(int a, const Sieve& s, int fuel) const {
  basis_->check(a);
  if (s.root() == a) return cover_(a, s, fuel);
  return cover_(a, s.restrict(a), fuel);
}

bool Topology::covers_set(int a, const Mask& set) const {
  return cover(a, Sieve::interior(basis_, a, set)).covered();
}

std::vector<Sieve> Topology::basic_covers(int a) const {
  basis_->check(a);
  if (basic_covers_) return basic_covers_(a);
  return all_covers(a);
}

std::vector<Sieve> Topology::all_covers(int a) const {
  std::vector<Sieve> out;
  enumerate_sieves(basis_, a, Mask(basis_->size(), false), [&](const Sieve& s) {
    if (covers(a, s)) out.push_back(s);
    return true;
  });
  return out;
}

Sieve Topology::smallest_cover(int a) const {
  basis_->check(a);
  if (smallest_cover_) return smallest_cover_(a);
  Mask m = basis_->down(a);
  for (const Sieve& s : basic_covers(a))
    for (int v = 0; v < basis_->size(); ++v) m[v] = m[v] && s.contains(v);
  return Sieve::generated(basis_, a, m);
}

std::optional<CoveringSystem::Violation> CoveringSystem::find_violation() const {
  const int n = basis->size();
  for (int p = 0; p < n; ++p) {
    for (int f = 0; f < static_cast<int>(families[p].size()); ++f) {
      const auto& alpha = families[p][f];
      for (int q = 0; q < n; ++q) {
        if (!basis->leq(q, p)) continue;
        bool found = false;
        for (const auto& beta : families[q]) {
          bool inside = std::all_of(beta.begin(), beta.end(), [&](int b) {
            return basis->leq(b, q) && std::any_of(alpha.begin(), alpha.end(),
                                                   [&](int x) { return basis->leq(b, x); });
          });
          if (inside) {
            found = true;
            break;
          }
        }
        if (!found) return Violation{p, f, q};
      }
    }
  }
  return std::nullopt;
}

CoverLevels cover_levels(const CoveringSystem& system, const Sieve& s, int fuel) {
  const Basis& basis = *system.basis;
  const int n = basis.size();
  CoverLevels out;
  out.level.assign(n, -1);
  out.rule.assign(n, -1);
  const Mask& region = basis.down(s.root());
  for (int v = 0; v < n; ++v)
    if (s.contains(v)) out.level[v] = 0;

  auto step = [&](int round, bool commit) {
    std::vector<std::pair<int, int>> added;
    for (int x = 0; x < n; ++x) {
      if (!region[x] || out.level[x] >= 0) continue;
      const auto& fams = system.families[x];
      for (int f = 0; f < static_cast<int>(fams.size()); ++f) {
        bool ok = std::all_of(fams[f].begin(), fams[f].end(), [&](int y) {
          return out.level[y] >= 0 && out.level[y] < round;
        });
        if (ok) {
          added.emplace_back(x, f);
          break;
        }
      }
    }
    if (commit)
      for (auto [x, f] : added) {
        out.level[x] = round;
        out.rule[x] = f;
      }
    return !added.empty();
  };

  for (int round = 1; round <= fuel; ++round)
    if (!step(round, true)) return out;
  out.exhausted = step(fuel + 1, false);
  return out;
}

namespace {

Derivation build_derivation(const CoveringSystem& system, const CoverLevels& lv, int x) {
  Derivation d;
  d.element = x;
  if (lv.level[x] == 0) return d;
  d.rule = lv.rule[x];
  for (int y : system.families[x][d.rule]) d.premises.push_back(build_derivation(system, lv, y));
  return d;
}

std::string family_string(const Basis& b, const std::vector<int>& alpha) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? ", " : "") << b.name(alpha[i]);
  os << "}";
  return os.str();
}

}  // namespace

TopologyPtr generate_topology(const CoveringSystem& system, int fuel) {
  if (auto v = system.find_violation()) {
    const Basis& b = *system.basis;
    throw CoveringAxiomViolation(
        "covering axiom fails: p = " + b.name(v->p) + ", alpha = " +
        family_string(b, system.families[v->p][v->family]) + ", q = " + b.name(v->q));
  }
  auto sys = std::make_shared<const CoveringSystem>(system);
  auto cover = [sys](int a, const Sieve& s, int f) {
    CoverLevels lv = cover_levels(*sys, s, f);
    CoverResult r;
    if (lv.level[a] >= 0) {
      r.status = CoverStatus::Covered;
      r.depth = lv.level[a];
      r.derivation = build_derivation(*sys, lv, a);
    } else {
      r.exhausted = lv.exhausted;
    }
    return r;
  };
  return std::make_shared<Topology>(system.basis, cover, fuel);
}

bool check_derivation(const CoveringSystem& system, const Sieve& s, const Derivation& d) {
  if (d.element < 0 || d.element >= system.basis->size()) return false;
  if (d.rule < 0) return d.premises.empty() && s.contains(d.element);
  const auto& fams = system.families[d.element];
  if (d.rule >= static_cast<int>(fams.size())) return false;
  const auto& alpha = fams[d.rule];
  if (alpha.size() != d.premises.size()) return false;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (d.premises[i].element != alpha[i]) return false;
    if (!check_derivation(system, s, d.premises[i])) return false;
  }
  return true;
}

InductionTranscript cover_induction(const CoveringSystem& system,
                                    const std::function<bool(int)>& predicate, int a,
                                    const Sieve& s, int fuel) {
  const Basis& basis = *system.basis;
  basis.check(a);
  const Sieve t = s.root() == a ? s : s.restrict(a);
  CoverLevels lv = cover_levels(system, t, fuel);
  if (lv.level[a] < 0)
    throw NotACover(t.to_string() + " does not cover " + basis.name(a) + " within fuel");
  for (int y : t.member_list())
    if (!predicate(y)) throw PremiseFails("predicate fails on sieve member " + basis.name(y));
  for (int x = 0; x < basis.size(); ++x) {
    for (const auto& alpha : system.families[x]) {
      bool all = std::all_of(alpha.begin(), alpha.end(), predicate);
      if (all && !predicate(x))
        throw HypothesisFails("inductive hypothesis fails at " + basis.name(x) +
                              " with family " + family_string(basis, alpha));
    }
  }
  InductionTranscript tr;
  tr.target = a;
  std::vector<bool> done(basis.size(), false);
  std::function<void(int)> replay = [&](int x) {
    if (done[x]) return;
    InductionStep step{x, -1, {}};
    if (lv.level[x] > 0) {
      step.rule = lv.rule[x];
      step.premises = system.families[x][step.rule];
      for (int y : step.premises) replay(y);
    }
    done[x] = true;
    tr.steps.push_back(std::move(step));
  };
  replay(a);
  return tr;
}

bool check_induction_transcript(const CoveringSystem& system,
                                const std::function<bool(int)>& predicate, const Sieve& s,
                                const InductionTranscript& tr) {
  std::vector<bool> established(system.basis->size(), false);
  for (const auto& step : tr.steps) {
    if (step.element < 0 || step.element >= system.basis->size()) return false;
    if (step.rule < 0) {
      if (!s.contains(step.element)) return false;
    } else {
      const auto& fams = system.families[step.element];
      if (step.rule >= static_cast<int>(fams.size())) return false;
      if (fams[step.rule] != step.premises) return false;
      for (int y : step.premises)
        if (!established[y]) return false;
    }
    if (!predicate(step.element)) return false;
    established[step.element] = true;
  }
  return !tr.steps.empty() && tr.steps.back().element == tr.target;
}

ClosedSieve closed_closure(const Topology& t, const Sieve& s, int fuel) {
  const BasisPtr& basis = t.basis();
  Mask m(basis->size(), false);
  bool approximate = false;
  for (int a : basis->below(s.root())) {
    CoverResult r = t.cover(a, s.restrict(a), fuel);
    if (r.covered()) m[a] = true;
    else if (r.exhausted) approximate = true;
  }
  return {Sieve::generated(basis, s.root(), m), approximate};
}

AxiomReport check_topology_axioms(const Topology& t, int fuel) {
  AxiomReport rep;
  const BasisPtr& basis = t.basis();
  const int n = basis->size();
  auto fail = [&](const std::string& what) { rep.failures.push_back(what); };
  for (int a = 0; a < n; ++a) {
    ++rep.instances;
    if (!t.cover(a, Sieve::maximal(basis, a), fuel).covered())
      fail("maximality fails at " + basis->name(a));

    std::vector<Sieve> sieves;
    enumerate_sieves(basis, a, Mask(n, false), [&](const Sieve& s) {
      sieves.push_back(s);
      return true;
    });
    std::vector<bool> cov(sieves.size());
    std::vector<Mask> locally(sieves.size(), Mask(n, false));
    const std::vector<int> below = basis->below(a);
    for (std::size_t i = 0; i < sieves.size(); ++i) {
      cov[i] = t.cover(a, sieves[i], fuel).covered();
      for (int b : below) locally[i][b] = t.cover(b, sieves[i].restrict(b), fuel).covered();
    }
    for (std::size_t i = 0; i < sieves.size(); ++i) {
      ++rep.instances;
      if (cov[i])
        for (int b : below)
          if (!locally[i][b])
            fail("stability fails: " + sieves[i].to_string() + " restricted to " +
                 basis->name(b));
    }
    for (std::size_t r = 0; r < sieves.size(); ++r) {
      if (!cov[r]) continue;
      for (std::size_t s = 0; s < sieves.size(); ++s) {
        if (cov[s]) continue;
        ++rep.instances;
        bool inside = true;
        for (int b : below)
          if (sieves[r].contains(b) && !locally[s][b]) inside = false;
        if (inside)
          fail("local character fails: R = " + sieves[r].to_string() + ", S = " +
               sieves[s].to_string());
      }
    }
  }
  return rep;
}

CoveringSystem random_covering_system(std::mt19937_64& rng, int n) {
  std::bernoulli_distribution edge(0.35), member(0.5);
  std::uniform_int_distribution<int> nfam(0, 2);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) pairs.emplace_back(j, i);
  CoveringSystem sys;
  sys.basis = std::make_shared<const Basis>(Basis::from_pairs(names, pairs));
  sys.families.assign(n, {});
  for (int a = 0; a < n; ++a) {
    int k = nfam(rng);
    for (int f = 0; f < k; ++f) {
      std::vector<int> alpha;
      for (int v : sys.basis->below(a))
        if (v != a && member(rng)) alpha.push_back(v);
      if (!alpha.empty()) sys.families[a].push_back(alpha);
    }
  }
  while (auto v = sys.find_violation()) {
    const auto alpha = sys.families[v->p][v->family];
    std::vector<int> beta;
    for (int r : sys.basis->below(v->q))
      if (std::any_of(alpha.begin(), alpha.end(), [&](int x) { return sys.basis->leq(r, x); }))
        beta.push_back(r);
    sys.families[v->q].push_back(beta);
  }
  return sys;
}

}  // namespace ftop
