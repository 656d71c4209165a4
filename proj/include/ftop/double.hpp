// The double of a truncated space over a finite set of its points.

#ifndef FTOP_DOUBLE_HPP
#define FTOP_DOUBLE_HPP

#include <memory>
#include <string>
#include <vector>

#include "ftop/maps.hpp"
#include "ftop/points.hpp"
#include "ftop/spaces.hpp"

namespace ftop {

class DoubleSpace;
using DoublePtr = std::shared_ptr<const DoubleSpace>;

/// Elements D(u), numbered like u in the inner space, followed by one
/// singleton {q} per point.  D(v) <= D(u) iff v <= u, {q} <= D(v) iff v is
/// in q, and the singletons are pairwise incomparable and only covered by
/// their maximal sieve.
class DoubleSpace {
 public:
  // Throws NotAPoint, or InputError for repeated points.
  static DoublePtr make(SpacePtr inner, std::vector<Point> points);

  const SpacePtr& inner() const { return inner_; }
  const std::vector<Point>& points() const { return points_; }
  const Mask& point_mask(int k) const { return point_masks_[k]; }
  const BasisPtr& basis() const { return basis_; }
  const TopologyPtr& topology() const { return topology_; }
  int size() const { return basis_->size(); }
  int d_count() const { return inner_->size(); }

  int d_at(int u) const { return u; }
  int d(const FinSeq& u) const { return inner_->index(u); }
  int singleton(int k) const { return d_count() + k; }
  bool is_d(int x) const { return x < d_count(); }
  int inner_index(int x) const { return x; }  // for x with is_d(x)
  int point_index(int x) const { return x - d_count(); }

  // "D()", "D(0,1)", "D<0,1>" or any element name; throws UnknownElement.
  int parse_element(const std::string& text) const;

 private:
  DoubleSpace(SpacePtr inner, std::vector<Point> points);

  SpacePtr inner_;
  std::vector<Point> points_;
  std::vector<Mask> point_masks_;
  BasisPtr basis_;
  TopologyPtr topology_;
};

struct CanonicalMaps {
  ContinuousMap mu;  // inner -> double
  ContinuousMap pi;  // double -> inner
  ContinuousMap nu;  // discrete points -> double
};
CanonicalMaps canonical_maps(const DoubleSpace& db);

}  // namespace ftop

#endif  // FTOP_DOUBLE_HPP
