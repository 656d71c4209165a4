// Points of formal spaces and the space of points.

#ifndef FTOP_POINTS_HPP
#define FTOP_POINTS_HPP

#include <string>
#include <vector>

#include "ftop/spaces.hpp"
#include "ftop/topology.hpp"

namespace ftop {

/// Result of a mechanical check.  condition names the first clause that
/// failed (its number in the definition being checked, 0 for side
/// conditions such as inhabitedness) and witness describes the instance.
struct Verdict {
  bool holds = true;
  int condition = 0;
  std::string witness;

  static Verdict ok() { return {}; }
  static Verdict fail(int condition, std::string witness) {
    return {false, condition, std::move(witness)};
  }
  explicit operator bool() const { return holds; }
};

/// The infinite sequence prefix·tail·tail·…
struct Point {
  FinSeq prefix;
  int tail = 0;

  // Drops trailing entries equal to tail, so equal sequences compare equal.
  Point normalized() const;
  int at(int n) const;
  // Is u an initial segment of the sequence?
  bool contains(const FinSeq& u) const;
  std::string name() const;  // "<1,0>;1"

  friend bool operator==(const Point& a, const Point& b) {
    Point x = a.normalized(), y = b.normalized();
    return x.prefix == y.prefix && x.tail == y.tail;
  }
};

Mask point_mask(const TruncatedSpace& space, const Point& point);

// Checks inhabited (0), upwards closed (1), downwards directed (2) and
// meeting every cover of a member (3), the last through smallest covers.
Verdict is_point(const Topology& t, const Mask& alpha);
Verdict is_point(const TruncatedSpace& space, const Point& point);

// Every normalized eventually-constant point whose prefix has length at
// most max_prefix, ordered by prefix length, prefix, then tail.
std::vector<Point> all_points(int branch, int max_prefix);
// One point per sequence of length space.depth(), continuing with tail.
std::vector<Point> leaf_points(const TruncatedSpace& space, int tail = 0);

/// Same basis, order by inclusion of extents, covers by union of extents.
class PtSpace {
 public:
  // Throws NotAPoint for a mask failing is_point.
  PtSpace(TopologyPtr topology, std::vector<Mask> points);

  const TopologyPtr& topology() const { return topology_; }
  std::size_t point_count() const { return points_.size(); }
  const Mask& ext(int a) const { return ext_[a]; }
  bool leq_pt(int a, int b) const;
  bool covers_pt(int a, const Sieve& s) const;

 private:
  TopologyPtr topology_;
  std::vector<Mask> points_;
  std::vector<Mask> ext_;  // ext_[a][k]: point k contains a
};

struct EnoughPointsReport {
  std::size_t sampled = 0;
  std::size_t agreements = 0;
  std::size_t cov_not_pt = 0;  // must be zero
  std::size_t pt_not_cov = 0;
  std::vector<std::string> disagreements;  // first few, for display
};
EnoughPointsReport enough_points_check(const PtSpace& pt, const std::vector<Sieve>& sample);

}  // namespace ftop

#endif  // FTOP_POINTS_HPP
