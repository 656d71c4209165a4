#include "ftop/choice.hpp"

#include <algorithm>
#include <functional>

#include "ftop/errors.hpp"

namespace ftop {

bool pairwise_disjoint(const Basis& b, const std::vector<int>& family) {
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (!b.disjoint(family[i], family[j])) return false;
  return true;
}

namespace {

bool covers_by(const Topology& t, int p, const std::vector<int>& family) {
  Mask m(t.size(), false);
  for (int g : family) m[g] = true;
  return t.covers(p, Sieve::generated(t.basis(), p, m));
}

void require_cover(const Topology& t, const Sieve& s) {
  if (!t.covers(s.root(), s))
    throw NotACover(s.to_string() + " does not cover " + t.basis()->name(s.root()));
}

}  // namespace

std::vector<int> cc_refine(const Topology& t, const Sieve& s) {
  require_cover(t, s);
  const Basis& b = *t.basis();
  if (pairwise_disjoint(b, s.generators())) return s.generators();
  Sieve min = t.smallest_cover(s.root());
  if (pairwise_disjoint(b, min.generators())) return min.generators();

  // Disjoint subfamilies of the members, extended greedily from each start
  // in index order, then checked for covering.
  const std::vector<int> members = s.member_list();
  std::vector<int> chosen;
  std::size_t budget = 100000;
  std::function<bool(std::size_t)> search = [&](std::size_t i) {
    if (budget-- == 0) return false;
    if (covers_by(t, s.root(), chosen)) return true;
    for (std::size_t k = i; k < members.size(); ++k) {
      const int v = members[k];
      if (std::any_of(chosen.begin(), chosen.end(), [&](int c) { return !b.disjoint(c, v); }))
        continue;
      chosen.push_back(v);
      if (search(k + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (search(0)) return chosen;
  throw NoRefinementFound("no disjoint refinement of " + s.to_string());
}

std::vector<int> cc_refine(const TruncatedSpace& space, const Sieve& s) {
  const Topology& t = *space.topology();
  require_cover(t, s);
  if (pairwise_disjoint(*space.basis(), s.generators())) return s.generators();
  const FinSeq& u = space.seq(s.root());
  CantorCover c = cantor_cover_test(space, u, s);
  if (!c.covered()) throw NoRefinementFound("no level of " + seq_name(u) + " lies inside " + s.to_string());
  std::vector<int> out;
  for (const FinSeq& v : space.u_bracket(u, *c.q)) out.push_back(space.index(v));
  return out;
}

std::vector<int> cc_refine(const DoubleSpace& db, const Sieve& s) {
  const Topology& t = *db.topology();
  require_cover(t, s);
  const Basis& b = *db.basis();
  if (pairwise_disjoint(b, s.generators())) return s.generators();
  const int root = s.root();
  if (!db.is_d(root)) return {root};
  const TruncatedSpace& inner = *db.inner();
  Mask d_part(inner.size(), false);
  for (int v = 0; v < inner.size(); ++v) d_part[v] = s.contains(db.d_at(v));
  Sieve inner_sieve = Sieve::generated(inner.basis(), db.inner_index(root), d_part);
  std::vector<int> out;
  for (int v : cc_refine(inner, inner_sieve)) out.push_back(db.d_at(v));
  const std::size_t lifted = out.size();
  for (int k = 0; k < static_cast<int>(db.points().size()); ++k) {
    const int x = db.singleton(k);
    if (!s.contains(x)) continue;
    if (std::none_of(out.begin(), out.begin() + lifted, [&](int d) { return b.leq(x, d); }))
      out.push_back(x);
  }
  if (!pairwise_disjoint(b, out) || !covers_by(t, root, out))
    throw NoRefinementFound("lifted refinement fails for " + s.to_string());
  return out;
}

Section choice_amalgamation(const Presheaf& x, int p, const std::vector<int>& family,
                            const std::vector<Section>& witnesses) {
  const Topology& t = *x.topology();
  const Basis& b = *t.basis();
  if (family.size() != witnesses.size()) throw InputError("one witness per family member");
  for (int g : family)
    if (!b.leq(g, p)) throw NotBelowRoot(b.name(g) + " is not below " + b.name(p));
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (!b.disjoint(family[i], family[j]))
        throw NotDisjoint(b.name(family[i]) + " and " + b.name(family[j]) + " overlap");
  if (!covers_by(t, p, family)) throw NotCovering("the family does not cover " + b.name(p));

  auto matches = [&](const Section& s) {
    for (std::size_t i = 0; i < family.size(); ++i)
      if (x.restrict(p, s, family[i]) != witnesses[i]) return false;
    return true;
  };
  constexpr std::uint64_t kSearchCap = 200000;
  if (x.count(p) <= kSearchCap) {
    std::vector<Section> found;
    for (std::uint64_t i = 0; i < x.count(p) && found.size() < 2; ++i) {
      Section s = x.nth(p, i);
      if (matches(s)) found.push_back(std::move(s));
    }
    if (found.empty()) throw NotCovering("no amalgamation over " + b.name(p));
    if (found.size() > 1)
      throw NotUnique("two amalgamations over " + b.name(p) + ": " + x.show(p, found[0]) +
                      " and " + x.show(p, found[1]));
    return found.front();
  }
  if (!x.has_solver()) throw NotCovering("too many sections to search over " + b.name(p));
  auto s = x.solve(p, family, witnesses);
  if (!s || !matches(*s)) throw NotCovering("no amalgamation over " + b.name(p));
  return *s;
}

}  // namespace ftop
