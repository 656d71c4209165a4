// Continuous maps between formal spaces given as relations.

#ifndef FTOP_MAPS_HPP
#define FTOP_MAPS_HPP

#include <utility>
#include <vector>

#include "ftop/points.hpp"
#include "ftop/topology.hpp"

namespace ftop {

/// F ⊆ P × Q stored as a dense matrix rel[p][q].
class ContinuousMap {
 public:
  // Closes the generator pairs under conditions (1) and (5).
  static ContinuousMap from_generators(TopologyPtr source, TopologyPtr target,
                                       const std::vector<std::pair<int, int>>& pairs);
  // Takes the relation as given, without any closure.
  static ContinuousMap from_relation(TopologyPtr source, TopologyPtr target,
                                     std::vector<Mask> rel);

  const TopologyPtr& source() const { return source_; }
  const TopologyPtr& target() const { return target_; }
  bool operator()(int p, int q) const { return rel_[p][q]; }
  const std::vector<Mask>& relation() const { return rel_; }
  std::vector<std::pair<int, int>> pairs() const;

  friend bool operator==(const ContinuousMap& a, const ContinuousMap& b) {
    return a.rel_ == b.rel_;
  }

 private:
  ContinuousMap(TopologyPtr source, TopologyPtr target, std::vector<Mask> rel);

  TopologyPtr source_;
  TopologyPtr target_;
  std::vector<Mask> rel_;
};

// Saturates a relation under (1) and (5).
std::vector<Mask> close_relation(const Topology& source, const Topology& target,
                                 std::vector<Mask> rel);

// Conditions (1)-(5), first failure with a witness.
Verdict check_continuous_map(const ContinuousMap& f);

// I(p, q) iff some cover of p lies below q.
ContinuousMap identity_map(const TopologyPtr& t);

// outer ∘ inner, then closed.  Throws NotComposable.
ContinuousMap compose(const ContinuousMap& outer, const ContinuousMap& inner);

// Image of a point of the source (as a mask) under postcomposition.
Mask pt_functor(const ContinuousMap& f, const Mask& point);

// One element "*" whose only cover is the maximal sieve.
TopologyPtr one_point_space();
// Discrete order, only maximal covers.
TopologyPtr discrete_space(const std::vector<std::string>& names);

// The map 1 -> space of a point.
ContinuousMap point_as_map(const TopologyPtr& t, const Mask& point);

}  // namespace ftop

#endif  // FTOP_MAPS_HPP
