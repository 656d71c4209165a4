// Presheaves on finite formal spaces, the sheaf condition, and the
// locally constant sheaves (naturals, booleans, finite lists, sequences).

#ifndef FTOP_SHEAVES_HPP
#define FTOP_SHEAVES_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ftop/maps.hpp"
#include "ftop/spaces.hpp"
#include "ftop/topology.hpp"

namespace ftop {

// A section is an opaque tuple of integers; its meaning belongs to the
// presheaf that produced it.
using Section = std::vector<int>;

class Presheaf {
 public:
  virtual ~Presheaf() = default;

  virtual const TopologyPtr& topology() const = 0;
  // Number of sections over p (saturates at UINT64_MAX).
  virtual std::uint64_t count(int p) const = 0;
  virtual Section nth(int p, std::uint64_t i) const = 0;
  // x ∈ X(p) restricted to q <= p.
  virtual Section restrict(int p, const Section& x, int q) const = 0;
  virtual std::string show(int p, const Section& x) const = 0;

  // Direct amalgamation for presheaves too large to search; returns the
  // candidate (still verified by the caller) or nullopt when there is none.
  virtual bool has_solver() const { return false; }
  virtual std::optional<Section> solve(int p, const std::vector<int>& elements,
                                       const std::vector<Section>& family) const;
};

using PresheafPtr = std::shared_ptr<const Presheaf>;

/// X(p) = {0..k-1} with identity restrictions.
class ConstantPresheaf : public Presheaf {
 public:
  ConstantPresheaf(TopologyPtr t, int k) : t_(std::move(t)), k_(k) {}
  const TopologyPtr& topology() const override { return t_; }
  std::uint64_t count(int) const override { return k_; }
  Section nth(int, std::uint64_t i) const override { return {static_cast<int>(i)}; }
  Section restrict(int, const Section& x, int) const override { return x; }
  std::string show(int, const Section& x) const override { return std::to_string(x[0]); }

 private:
  TopologyPtr t_;
  int k_;
};

/// Finite sets with explicit restriction tables: res[p][q][i] is the index
/// of the restriction of section i at p to q.
class TablePresheaf : public Presheaf {
 public:
  TablePresheaf(TopologyPtr t, std::vector<int> counts,
                std::vector<std::vector<std::vector<int>>> res);
  const TopologyPtr& topology() const override { return t_; }
  std::uint64_t count(int p) const override { return counts_[p]; }
  Section nth(int, std::uint64_t i) const override { return {static_cast<int>(i)}; }
  Section restrict(int p, const Section& x, int q) const override;
  std::string show(int, const Section& x) const override { return "#" + std::to_string(x[0]); }

 private:
  TopologyPtr t_;
  std::vector<int> counts_;
  std::vector<std::vector<std::vector<int>>> res_;
};

// Random presheaf on a truncated space: random section counts and random
// parent-to-child restrictions, composed along paths.  With sheafy = true
// each internal X(u) is the product of its children's sets instead, which
// gives a sheaf.
std::shared_ptr<TablePresheaf> random_tree_presheaf(std::mt19937_64& rng,
                                                    const TruncatedSpace& space, int max_count,
                                                    bool sheafy);

/// Value sets for the locally constant sheaves.
struct ValueDomain {
  enum class Kind { Nat, Two, FinSeq, Seq };
  Kind kind = Kind::Nat;
  int bound = 1;   // values < bound for Nat/Two, alphabet size for sequences
  int length = 0;  // maximal (FinSeq) or exact (Seq) length

  static ValueDomain nat(int n_max) { return {Kind::Nat, n_max, 0}; }
  static ValueDomain two() { return {Kind::Two, 2, 0}; }
  static ValueDomain finseq(int alphabet, int max_length) {
    return {Kind::FinSeq, alphabet, max_length};
  }
  static ValueDomain seq(int alphabet, int length) { return {Kind::Seq, alphabet, length}; }

  int size() const;
  // Sequences are numbered by length, then lexicographically.
  std::vector<int> decode(int v) const;
  int encode(const std::vector<int>& s) const;  // -1 when outside the domain
  std::string show(int v) const;
  std::string name() const;
};

/// The sheafification of the constant presheaf on a value set.  A section
/// over p is a value for each connected piece of the smallest cover of p,
/// i.e. the ∼-class of a locally constant family on a covering sieve.
/// With Nat values this is the sheaf of naturals, with Two the booleans,
/// with FinSeq the sheaves of finite lists (2^{<N}, N^{<N}), and with Seq
/// the sheaves of continuous sequences (2^N, N^N) at a fixed output length.
class LocallyConstantSheaf : public Presheaf {
 public:
  // Throws EmptyCoverPresent when some element has the empty sieve as a cover.
  LocallyConstantSheaf(TopologyPtr t, ValueDomain domain);

  const TopologyPtr& topology() const override { return t_; }
  const ValueDomain& domain() const { return domain_; }
  std::uint64_t count(int p) const override;
  Section nth(int p, std::uint64_t i) const override;
  Section restrict(int p, const Section& x, int q) const override;
  std::string show(int p, const Section& x) const override;
  bool has_solver() const override { return true; }
  std::optional<Section> solve(int p, const std::vector<int>& elements,
                               const std::vector<Section>& family) const override;

  int pieces(int p) const { return static_cast<int>(pieces_[p].size()); }
  // Pieces of the smallest cover of p, each listed by its members.
  const std::vector<std::vector<int>>& piece_members(int p) const { return pieces_[p]; }
  int piece_of(int p, int element) const { return piece_of_[p][element]; }

  Section pure(int p, int value) const { return Section(pieces(p), value); }
  bool is_pure(const Section& x) const;
  // The value of x at q when x restricted to q is pure, else -1.
  int value_at(int p, const Section& x, int q) const;
  // {q <= p : x restricted to q is pure}; always a cover.
  Sieve purity_sieve(int p, const Section& x) const;

  // A representative (S, φ): a sieve on p with a value for each member.
  struct Representative {
    Sieve sieve;
    std::vector<int> value;  // indexed by element; ignored outside the sieve
  };
  // Throws NotCovering / InputError (incompatible values).
  Section from_representative(int p, const Representative& r) const;
  // The coarsest representative: the purity sieve with its values.
  Representative canonical_representative(int p, const Section& x) const;
  // (S,φ) ∼ (T,ψ): some covering R ⊆ S ∩ T has φ = ψ on R.
  bool equivalent(int p, const Representative& a, const Representative& b) const;

 private:
  TopologyPtr t_;
  ValueDomain domain_;
  std::vector<std::vector<std::vector<int>>> pieces_;
  std::vector<std::vector<int>> piece_of_;
};

struct SheafCheckOptions {
  std::uint64_t family_cap = 4096;   // enumerate all families below this, else sample
  std::uint64_t sample_families = 256;
  std::uint64_t section_cap = 20000;  // brute-force amalgamation below this
  std::uint64_t seed = 1;
};

struct SheafReport {
  std::size_t covers = 0;
  std::size_t families = 0;
  std::size_t solver_instances = 0;  // amalgamations found by the solver
  std::size_t missing = 0;
  std::size_t nonunique = 0;
  std::size_t law_instances = 0;  // sections checked against the laws
  std::size_t law_failures = 0;
  std::vector<std::string> witnesses;
  bool ok() const { return missing == 0 && nonunique == 0 && law_failures == 0; }
};

// Identity and composition laws of restriction on every element pair
// (sections enumerated up to the section cap, sampled beyond it).
SheafReport check_presheaf_laws(const Presheaf& x, const SheafCheckOptions& opt = {});

// Existence and uniqueness of amalgamations of compatible families on the
// generators of each covering sieve in the sample (non-covers are skipped).
SheafReport sheaf_check(const Presheaf& x, const std::vector<Sieve>& sample,
                        const SheafCheckOptions& opt = {});

// The same, but only for families indexed by α ∈ C(a).
SheafReport sheaf_check_covering_system(const Presheaf& x, const CoveringSystem& system,
                                        const SheafCheckOptions& opt = {});

// Every section's purity sieve covers.  Throws UnsupportedSort for the
// sequence sheaves, where purity is not dense.
Verdict pure_density_check(const LocallyConstantSheaf& x, int p,
                           const SheafCheckOptions& opt = {});

// A section of the naturals over p as a map from ↓p (the whole space when p
// is the top) to the discrete space on 0..n_max-1.
ContinuousMap section_to_discrete_map(const LocallyConstantSheaf& nat, int p, const Section& x,
                                      const TopologyPtr& discrete);
// A sequence section over the top element as a map to a truncated space of
// depth = output length.
ContinuousMap section_to_sequence_map(const LocallyConstantSheaf& seq, int top,
                                      const Section& x, const TruncatedSpace& target);

}  // namespace ftop

#endif  // FTOP_SHEAVES_HPP
