#include "ftop/points.hpp"

#include "ftop/errors.hpp"

namespace ftop {

Point Point::normalized() const {
  Point p = *this;
  while (!p.prefix.empty() && p.prefix.back() == p.tail) p.prefix.pop_back();
  return p;
}

int Point::at(int n) const {
  return n < static_cast<int>(prefix.size()) ? prefix[n] : tail;
}

bool Point::contains(const FinSeq& u) const {
  for (int i = 0; i < static_cast<int>(u.size()); ++i)
    if (u[i] != at(i)) return false;
  return true;
}

std::string Point::name() const { return seq_name(prefix) + ";" + std::to_string(tail); }

Mask point_mask(const TruncatedSpace& space, const Point& point) {
  Mask m(space.size(), false);
  for (int i = 0; i < space.size(); ++i) m[i] = point.contains(space.seq(i));
  return m;
}

Verdict is_point(const Topology& t, const Mask& alpha) {
  const Basis& b = *t.basis();
  const int n = b.size();
  if (static_cast<int>(alpha.size()) != n) return Verdict::fail(0, "mask has the wrong size");
  std::vector<int> members;
  for (int v = 0; v < n; ++v)
    if (alpha[v]) members.push_back(v);
  if (members.empty()) return Verdict::fail(0, "not inhabited");
  for (int a : members)
    for (int c = 0; c < n; ++c)
      if (b.leq(a, c) && !alpha[c])
        return Verdict::fail(1, b.name(a) + " is in, " + b.name(c) + " above it is not");
  for (int a : members)
    for (int c : members) {
      bool common = false;
      for (int d : members) common = common || (b.leq(d, a) && b.leq(d, c));
      if (!common)
        return Verdict::fail(2, b.name(a) + " and " + b.name(c) + " have no common refinement");
    }
  for (int a : members) {
    Sieve s = t.smallest_cover(a);
    bool meets = false;
    for (int v : members) meets = meets || s.contains(v);
    if (!meets) return Verdict::fail(3, "cover " + s.to_string() + " of " + b.name(a) + " missed");
  }
  return Verdict::ok();
}

Verdict is_point(const TruncatedSpace& space, const Point& point) {
  if (point.tail < 0 || point.tail >= space.branch())
    return Verdict::fail(0, "tail outside the alphabet");
  for (int x : point.prefix)
    if (x < 0 || x >= space.branch()) return Verdict::fail(0, "prefix outside the alphabet");
  return is_point(*space.topology(), point_mask(space, point));
}

std::vector<Point> all_points(int branch, int max_prefix) {
  std::vector<Point> out;
  std::vector<FinSeq> level{FinSeq{}};
  for (int len = 0; len <= max_prefix; ++len) {
    for (const FinSeq& u : level)
      for (int t = 0; t < branch; ++t)
        if (u.empty() || u.back() != t) out.push_back(Point{u, t});
    std::vector<FinSeq> next;
    for (const FinSeq& u : level)
      for (int x = 0; x < branch; ++x) {
        FinSeq v = u;
        v.push_back(x);
        next.push_back(v);
      }
    level = std::move(next);
  }
  return out;
}

std::vector<Point> leaf_points(const TruncatedSpace& space, int tail) {
  std::vector<Point> out;
  for (int i = 0; i < space.size(); ++i)
    if (static_cast<int>(space.seq(i).size()) == space.depth())
      out.push_back(Point{space.seq(i), tail});
  return out;
}

PtSpace::PtSpace(TopologyPtr topology, std::vector<Mask> points)
    : topology_(std::move(topology)), points_(std::move(points)) {
  const int n = topology_->size();
  for (std::size_t k = 0; k < points_.size(); ++k) {
    Verdict v = is_point(*topology_, points_[k]);
    if (!v) throw NotAPoint("point " + std::to_string(k) + ": " + v.witness);
  }
  ext_.assign(n, Mask(points_.size(), false));
  for (int a = 0; a < n; ++a)
    for (std::size_t k = 0; k < points_.size(); ++k) ext_[a][k] = points_[k][a];
}

bool PtSpace::leq_pt(int a, int b) const {
  for (std::size_t k = 0; k < points_.size(); ++k)
    if (ext_[a][k] && !ext_[b][k]) return false;
  return true;
}

bool PtSpace::covers_pt(int a, const Sieve& s) const {
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!ext_[a][k]) continue;
    bool hit = false;
    for (int p : s.member_list()) hit = hit || ext_[p][k];
    if (!hit) return false;
  }
  return true;
}

EnoughPointsReport enough_points_check(const PtSpace& pt, const std::vector<Sieve>& sample) {
  EnoughPointsReport rep;
  for (const Sieve& s : sample) {
    ++rep.sampled;
    const bool cov = pt.topology()->covers(s.root(), s);
    const bool cov_pt = pt.covers_pt(s.root(), s);
    if (cov == cov_pt) {
      ++rep.agreements;
      continue;
    }
    if (cov) ++rep.cov_not_pt;
    else ++rep.pt_not_cov;
    if (rep.disagreements.size() < 5)
      rep.disagreements.push_back(s.to_string() + (cov ? ": Cov but not Cov_pt" : ": Cov_pt but not Cov"));
  }
  return rep;
}

}  // namespace ftop
