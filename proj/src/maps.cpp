#include "ftop/maps.hpp"

#include "ftop/errors.hpp"

namespace ftop {

namespace {

void check_shape(const Topology& s, const Topology& t, const std::vector<Mask>& rel) {
  if (static_cast<int>(rel.size()) != s.size()) throw InputError("relation has wrong row count");
  for (const Mask& row : rel)
    if (static_cast<int>(row.size()) != t.size())
      throw InputError("relation has wrong column count");
}

Mask column(const std::vector<Mask>& rel, int q) {
  Mask m(rel.size(), false);
  for (std::size_t p = 0; p < rel.size(); ++p) m[p] = rel[p][q];
  return m;
}

}  // namespace

ContinuousMap::ContinuousMap(TopologyPtr source, TopologyPtr target, std::vector<Mask> rel)
    : source_(std::move(source)), target_(std::move(target)), rel_(std::move(rel)) {
  check_shape(*source_, *target_, rel_);
}

ContinuousMap ContinuousMap::from_generators(TopologyPtr source, TopologyPtr target,
                                             const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Mask> rel(source->size(), Mask(target->size(), false));
  for (auto [p, q] : pairs) {
    source->basis()->check(p);
    target->basis()->check(q);
    rel[p][q] = true;
  }
  rel = close_relation(*source, *target, std::move(rel));
  return ContinuousMap(std::move(source), std::move(target), std::move(rel));
}

ContinuousMap ContinuousMap::from_relation(TopologyPtr source, TopologyPtr target,
                                           std::vector<Mask> rel) {
  return ContinuousMap(std::move(source), std::move(target), std::move(rel));
}

std::vector<std::pair<int, int>> ContinuousMap::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t p = 0; p < rel_.size(); ++p)
    for (std::size_t q = 0; q < rel_[p].size(); ++q)
      if (rel_[p][q]) out.emplace_back(static_cast<int>(p), static_cast<int>(q));
  return out;
}

std::vector<Mask> close_relation(const Topology& source, const Topology& target,
                                 std::vector<Mask> rel) {
  check_shape(source, target, rel);
  const Basis& P = *source.basis();
  const Basis& Q = *target.basis();
  const int np = P.size(), nq = Q.size();
  for (bool changed = true; changed;) {
    changed = false;
    // (1): down in the source, up in the target.
    for (int p = 0; p < np; ++p)
      for (int q = 0; q < nq; ++q) {
        if (!rel[p][q]) continue;
        for (int p2 = 0; p2 < np; ++p2)
          if (P.leq(p2, p))
            for (int q2 = 0; q2 < nq; ++q2)
              if (Q.leq(q, q2) && !rel[p2][q2]) rel[p2][q2] = changed = true;
      }
    // (5): each fiber closed under covers.
    for (int q = 0; q < nq; ++q) {
      Mask fiber = column(rel, q);
      for (int a = 0; a < np; ++a)
        if (!fiber[a] && source.covers_set(a, fiber)) rel[a][q] = changed = true;
    }
  }
  return rel;
}

Verdict check_continuous_map(const ContinuousMap& f) {
  const Topology& S = *f.source();
  const Topology& T = *f.target();
  const Basis& P = *S.basis();
  const Basis& Q = *T.basis();
  const int np = P.size(), nq = Q.size();
  const auto& rel = f.relation();
  auto pair_name = [&](int p, int q) { return "(" + P.name(p) + ", " + Q.name(q) + ")"; };

  for (int p = 0; p < np; ++p)
    for (int q = 0; q < nq; ++q) {
      if (!rel[p][q]) continue;
      for (int p2 = 0; p2 < np; ++p2)
        if (P.leq(p2, p) && !rel[p2][q])
          return Verdict::fail(1, pair_name(p, q) + " but not " + pair_name(p2, q));
      for (int q2 = 0; q2 < nq; ++q2)
        if (Q.leq(q, q2) && !rel[p][q2])
          return Verdict::fail(1, pair_name(p, q) + " but not " + pair_name(p, q2));
    }

  Mask dom(np, false);
  for (int p = 0; p < np; ++p)
    for (int q = 0; q < nq; ++q) dom[p] = dom[p] || rel[p][q];
  for (int p = 0; p < np; ++p)
    if (!S.covers_set(p, dom))
      return Verdict::fail(2, "no cover of " + P.name(p) + " is inside the domain");

  // (3): for each p, the set {p' : F(p', r) for some r <= q, q'}.
  for (int p = 0; p < np; ++p)
    for (int q = 0; q < nq; ++q) {
      if (!rel[p][q]) continue;
      for (int q2 = q + 1; q2 < nq; ++q2) {
        if (!rel[p][q2]) continue;
        Mask meet(np, false);
        for (int p2 = 0; p2 < np; ++p2)
          for (int r = 0; r < nq && !meet[p2]; ++r)
            if (rel[p2][r] && Q.leq(r, q) && Q.leq(r, q2)) meet[p2] = true;
        if (!S.covers_set(p, meet))
          return Verdict::fail(3, pair_name(p, q) + " and " + pair_name(p, q2) +
                                      " without a common refinement on a cover");
      }
    }

  // (4): enough to test the smallest cover of q.
  std::vector<Mask> into(nq);
  for (int q = 0; q < nq; ++q) {
    Sieve min = T.smallest_cover(q);
    Mask m(np, false);
    for (int p2 = 0; p2 < np; ++p2)
      for (int r = 0; r < nq && !m[p2]; ++r)
        if (rel[p2][r] && min.contains(r)) m[p2] = true;
    into[q] = std::move(m);
  }
  for (int p = 0; p < np; ++p)
    for (int q = 0; q < nq; ++q)
      if (rel[p][q] && !S.covers_set(p, into[q]))
        return Verdict::fail(4, pair_name(p, q) + " and cover " + T.smallest_cover(q).to_string());

  for (int q = 0; q < nq; ++q) {
    Mask fiber = column(rel, q);
    for (int a = 0; a < np; ++a)
      if (!fiber[a] && S.covers_set(a, fiber))
        return Verdict::fail(5, "fiber of " + Q.name(q) + " is covered at " + P.name(a) +
                                    " but does not contain it");
  }
  return Verdict::ok();
}

ContinuousMap identity_map(const TopologyPtr& t) {
  const int n = t->size();
  std::vector<Mask> rel(n, Mask(n, false));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) rel[p][q] = t->covers_set(p, t->basis()->down(q));
  return ContinuousMap::from_relation(t, t, std::move(rel));
}

ContinuousMap compose(const ContinuousMap& outer, const ContinuousMap& inner) {
  if (inner.target()->basis() != outer.source()->basis())
    throw NotComposable("target of the inner map is not the source of the outer map");
  const int np = inner.source()->size();
  const int nq = inner.target()->size();
  const int nr = outer.target()->size();
  std::vector<Mask> rel(np, Mask(nr, false));
  for (int p = 0; p < np; ++p)
    for (int q = 0; q < nq; ++q)
      if (inner(p, q))
        for (int r = 0; r < nr; ++r)
          if (outer(q, r)) rel[p][r] = true;
  rel = close_relation(*inner.source(), *outer.target(), std::move(rel));
  return ContinuousMap::from_relation(inner.source(), outer.target(), std::move(rel));
}

Mask pt_functor(const ContinuousMap& f, const Mask& point) {
  const int np = f.source()->size(), nq = f.target()->size();
  if (static_cast<int>(point.size()) != np) throw InputError("point mask has the wrong size");
  Mask out(nq, false);
  for (int p = 0; p < np; ++p)
    if (point[p])
      for (int q = 0; q < nq; ++q) out[q] = out[q] || f(p, q);
  return out;
}

TopologyPtr discrete_space(const std::vector<std::string>& names) {
  auto basis = std::make_shared<const Basis>(Basis::from_pairs(names, {}));
  auto cover = [](int a, const Sieve& s, int) {
    CoverResult r;
    if (s.contains(a)) r.status = CoverStatus::Covered;
    return r;
  };
  auto bcov = [basis](int a) { return std::vector<Sieve>{Sieve::maximal(basis, a)}; };
  auto smallest = [basis](int a) { return Sieve::maximal(basis, a); };
  return std::make_shared<Topology>(basis, cover, 1, bcov, smallest);
}

TopologyPtr one_point_space() { return discrete_space({"*"}); }

ContinuousMap point_as_map(const TopologyPtr& t, const Mask& point) {
  std::vector<Mask> rel{point};
  return ContinuousMap::from_relation(one_point_space(), t, std::move(rel));
}

}  // namespace ftop
