// Finite preorders of basic opens and sieves on them.

#ifndef FTOP_BASIS_HPP
#define FTOP_BASIS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ftop {

// A subset of a basis, indexed by element.
using Mask = std::vector<bool>;

/// A finite set of basic opens with a decidable preorder.
///
/// Elements are identified by their index 0..size()-1 and carry a display
/// name.  The order relation is stored as a dense matrix; the constructor
/// rejects relations that are not reflexive and transitive.
class Basis {
 public:
  Basis(std::vector<std::string> names, std::vector<std::vector<bool>> leq);

  // Reflexive-transitive closure of the given pairs (a <= b).
  static Basis from_pairs(std::vector<std::string> names,
                          const std::vector<std::pair<int, int>>& pairs);

  int size() const { return static_cast<int>(names_.size()); }
  bool leq(int a, int b) const { return leq_[a][b]; }
  bool strictly_below(int a, int b) const { return leq_[a][b] && !leq_[b][a]; }
  const std::string& name(int a) const { return names_.at(a); }
  std::optional<int> find(std::string_view name) const;
  int index(std::string_view name) const;  // throws UnknownElement

  // Down-set of a, as a mask and as a sorted index list.
  const Mask& down(int a) const { return down_[a]; }
  std::vector<int> below(int a) const;

  // True when no element lies below both a and b.
  bool disjoint(int a, int b) const;

  void check(int a) const;  // throws UnknownElement

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
  std::vector<Mask> down_;
  std::unordered_map<std::string, int> by_name_;
};

using BasisPtr = std::shared_ptr<const Basis>;

/// A downward-closed subset of the down-set of its root, presented by a
/// finite antichain of generators.
class Sieve {
 public:
  // Throws InvalidSieve if a generator does not lie below root.
  Sieve(BasisPtr basis, int root, const std::vector<int>& generators);

  static Sieve maximal(BasisPtr basis, int a);
  static Sieve empty(BasisPtr basis, int a);
  // Down-closure of set ∩ ↓root.
  static Sieve generated(BasisPtr basis, int root, const Mask& set);
  // Largest sieve on root contained in set: {v <= root : ↓v ⊆ set}.
  static Sieve interior(BasisPtr basis, int root, const Mask& set);

  const BasisPtr& basis() const { return basis_; }
  int root() const { return root_; }
  const std::vector<int>& generators() const { return generators_; }
  const Mask& members() const { return members_; }
  std::vector<int> member_list() const;

  bool contains(int v) const { return members_[v]; }
  bool is_empty() const { return generators_.empty(); }
  bool is_maximal() const { return members_[root_]; }
  bool subset_of(const Sieve& other) const;

  // b*S = S ∩ ↓b, a sieve on b.
  Sieve restrict(int b) const;

  std::string to_string() const;

  friend bool operator==(const Sieve& a, const Sieve& b) {
    return a.root_ == b.root_ && a.members_ == b.members_;
  }

 private:
  Sieve(BasisPtr basis, int root, Mask members, int /*tag*/);
  void compute_generators();

  BasisPtr basis_;
  int root_;
  Mask members_;
  std::vector<int> generators_;
};

// Maximal elements (w.r.t. the preorder) of a set, one index per
// equivalence class (the smallest index).
std::vector<int> maximal_elements(const Basis& basis, const Mask& set);

// Calls visit on every sieve on a whose member set contains `required`
// (pass an all-false mask for no constraint).  Stops early when visit
// returns false.  Returns the number of sieves visited.
std::size_t enumerate_sieves(const BasisPtr& basis, int a, const Mask& required,
                             const std::function<bool(const Sieve&)>& visit);

}  // namespace ftop

#endif  // FTOP_BASIS_HPP
