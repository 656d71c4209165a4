// Truncated formal Cantor and Baire spaces, and bars on them.

#ifndef FTOP_SPACES_HPP
#define FTOP_SPACES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ftop/basis.hpp"
#include "ftop/topology.hpp"

namespace ftop {

using FinSeq = std::vector<int>;

std::string seq_name(const FinSeq& u);  // "<0,1>", "<>" for the empty sequence
// Accepts "<0,1>", "<>", "0,1" and "" (the empty sequence).
FinSeq parse_seq(const std::string& text);
// u <= v iff v is an initial segment of u.
bool seq_leq(const FinSeq& u, const FinSeq& v);
FinSeq concat(const FinSeq& u, const FinSeq& v);

enum class SpaceKind { Cantor, Baire };

class TruncatedSpace;
using SpacePtr = std::shared_ptr<const TruncatedSpace>;

/// All sequences over {0..branch-1} of length at most depth, ordered by
/// extension.  Elements are numbered by length, then lexicographically.
///
/// Cantor covers are decided by the u[q] test; Baire covers are generated
/// from C(u) = {{u*<n> : n < branch}}.  At the truncation depth the leaves
/// get C(u) = {{u}} so the covering axiom holds for the finite system.
class TruncatedSpace {
 public:
  static SpacePtr make(SpaceKind kind, int branch, int depth);
  static SpacePtr cantor(int depth) { return make(SpaceKind::Cantor, 2, depth); }
  static SpacePtr baire(int branch, int depth) { return make(SpaceKind::Baire, branch, depth); }

  SpaceKind kind() const { return kind_; }
  int branch() const { return branch_; }
  int depth() const { return depth_; }
  std::string kind_name() const { return kind_ == SpaceKind::Cantor ? "cantor" : "baire"; }

  const BasisPtr& basis() const { return basis_; }
  const TopologyPtr& topology() const { return topology_; }
  const CoveringSystem& covering_system() const { return system_; }
  int size() const { return basis_->size(); }

  int index(const FinSeq& u) const;  // throws UnknownElement / DepthExceeded
  const FinSeq& seq(int i) const;
  const std::vector<FinSeq>& sequences() const;
  int child(int i, int n) const;  // index of seq(i)*<n>, -1 at the leaves

  // Sieve on root generated by the given sequences.
  Sieve sieve(const FinSeq& root, const std::vector<FinSeq>& generators) const;

  // u[q]: the length-q extensions of u.  Throws DepthExceeded if q > depth.
  std::vector<FinSeq> u_bracket(const FinSeq& u, int q) const;
  Mask bracket_mask(int u, int q) const;

 private:
  TruncatedSpace(SpaceKind kind, int branch, int depth);

  struct Shape;

  SpaceKind kind_;
  int branch_;
  int depth_;
  std::shared_ptr<const Shape> shape_;  // shared with the cover closures
  BasisPtr basis_;
  CoveringSystem system_;
  TopologyPtr topology_;
};

struct CantorCover {
  std::optional<int> q;         // least q with u[q] ⊆ S
  std::vector<FinSeq> frontier;  // u[L] \ S when not covered
  bool covered() const { return q.has_value(); }
};
// Exact within the truncation.  Works for either kind of space.
CantorCover cantor_cover_test(const TruncatedSpace& space, const FinSeq& u, const Sieve& s);

// u[q] for the least covering q.  Throws NotACover.
std::vector<FinSeq> kfinite_subcover(const TruncatedSpace& space, const FinSeq& u,
                                     const Sieve& s);

/// A decidable predicate on the sequences of a truncated space.  The
/// monotone and inductive flags are verified at construction.
class Bar {
 public:
  using Predicate = std::function<bool(const FinSeq&)>;

  // Throws NotMonotone / NotInductive with a counterexample.
  Bar(SpacePtr space, const Predicate& predicate, bool monotone, bool inductive);

  // Predicate true exactly on extensions of some generator.
  static Bar from_generators(SpacePtr space, const std::vector<FinSeq>& generators,
                             bool monotone, bool inductive);
  // Least inductive (and monotone) predicate containing every extension of
  // the generators.
  static Bar inductive_closure_of(SpacePtr space, const std::vector<FinSeq>& generators);

  const SpacePtr& space() const { return space_; }
  bool operator()(const FinSeq& u) const;
  bool at(int i) const { return mask_[i]; }
  const Mask& mask() const { return mask_; }
  bool monotone() const { return monotone_; }
  bool inductive() const { return inductive_; }
  // Maximal satisfying sequences (under extension order: the shortest ones).
  std::vector<FinSeq> generators() const;

 private:
  SpacePtr space_;
  Mask mask_;
  bool monotone_;
  bool inductive_;
};

// Sieve on root whose members are the satisfying elements below root.
// Throws NotMonotone when the bar was not declared monotone.
Sieve bar_to_sieve(const Bar& bar, const FinSeq& root);

}  // namespace ftop

#endif  // FTOP_SPACES_HPP
