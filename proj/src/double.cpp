#include "ftop/double.hpp"

#include <algorithm>

#include "ftop/errors.hpp"

namespace ftop {

DoublePtr DoubleSpace::make(SpacePtr inner, std::vector<Point> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    Verdict v = is_point(*inner, points[i]);
    if (!v) throw NotAPoint(points[i].name() + ": " + v.witness);
    for (std::size_t j = 0; j < i; ++j)
      if (points[i] == points[j]) throw InputError("point " + points[i].name() + " repeated");
  }
  return DoublePtr(new DoubleSpace(std::move(inner), std::move(points)));
}

DoubleSpace::DoubleSpace(SpacePtr inner, std::vector<Point> points)
    : inner_(std::move(inner)), points_(std::move(points)) {
  const int m = inner_->size();
  const int k = static_cast<int>(points_.size());
  const int n = m + k;
  for (const Point& p : points_) point_masks_.push_back(ftop::point_mask(*inner_, p));

  std::vector<std::string> names;
  for (int u = 0; u < m; ++u) names.push_back("D" + seq_name(inner_->seq(u)));
  for (const Point& p : points_) names.push_back("{" + p.name() + "}");
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  const Basis& ib = *inner_->basis();
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) leq[u][v] = ib.leq(u, v);
  for (int q = 0; q < k; ++q) {
    leq[m + q][m + q] = true;
    for (int v = 0; v < m; ++v) leq[m + q][v] = point_masks_[q][v];
  }
  basis_ = std::make_shared<const Basis>(std::move(names), std::move(leq));

  const BasisPtr b = basis_;
  const TopologyPtr it = inner_->topology();
  auto cover = [it, m](int a, const Sieve& s, int fuel) {
    if (a >= m) {
      CoverResult r;
      if (s.contains(a)) r.status = CoverStatus::Covered;
      return r;
    }
    Mask x(m, false);
    for (int v = 0; v < m; ++v) x[v] = s.contains(v);
    return it->cover(a, Sieve::generated(it->basis(), a, x), fuel);
  };
  auto lift = [b, m](const Sieve& s) {
    Mask x(b->size(), false);
    for (int v = 0; v < m; ++v) x[v] = s.contains(v);
    return Sieve::generated(b, s.root(), x);
  };
  auto bcov = [it, b, m, lift](int a) {
    if (a >= m) return std::vector<Sieve>{Sieve::maximal(b, a)};
    std::vector<Sieve> out;
    for (const Sieve& s : it->basic_covers(a)) out.push_back(lift(s));
    return out;
  };
  auto smallest = [it, b, m, lift](int a) {
    if (a >= m) return Sieve::maximal(b, a);
    return lift(it->smallest_cover(a));
  };
  topology_ = std::make_shared<Topology>(basis_, cover, it->default_fuel(), bcov, smallest);
}

int DoubleSpace::parse_element(const std::string& text) const {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.size() >= 3 && t[0] == 'D' && t[1] == '(' && t.back() == ')')
    return d(parse_seq(t.substr(2, t.size() - 3)));
  if (t.size() >= 2 && t[0] == 'D' && t[1] == '<') return d(parse_seq(t.substr(1)));
  return basis_->index(t);
}

CanonicalMaps canonical_maps(const DoubleSpace& db) {
  const TopologyPtr& inner = db.inner()->topology();
  const TopologyPtr& dt = db.topology();
  const int m = db.d_count();
  ContinuousMap id = identity_map(inner);

  std::vector<std::pair<int, int>> mu, pi;
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (id(u, v)) {
        mu.emplace_back(u, db.d_at(v));
        pi.emplace_back(db.d_at(u), v);
      }
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> nu;
  for (std::size_t k = 0; k < db.points().size(); ++k) {
    names.push_back("{" + db.points()[k].name() + "}");
    nu.emplace_back(static_cast<int>(k), db.singleton(static_cast<int>(k)));
  }
  return CanonicalMaps{ContinuousMap::from_generators(inner, dt, mu),
                       ContinuousMap::from_generators(dt, inner, pi),
                       ContinuousMap::from_generators(discrete_space(names), dt, nu)};
}

}  // namespace ftop
