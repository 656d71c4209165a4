// Grothendieck topologies on finite preorders, covering systems and the
// topologies they generate.

#ifndef FTOP_TOPOLOGY_HPP
#define FTOP_TOPOLOGY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ftop/basis.hpp"

namespace ftop {

/// One node of a cover derivation.  rule == -1 means "element is in the
/// sieve"; otherwise premises are the derivations for the members of the
/// rule-th covering family of element.
struct Derivation {
  int element = -1;
  int rule = -1;
  std::vector<Derivation> premises;

  int depth() const;
};

enum class CoverStatus { Covered, NotCoveredWithinFuel };

struct CoverResult {
  CoverStatus status = CoverStatus::NotCoveredWithinFuel;
  int depth = 0;
  // Set when a negative answer may be an artefact of the fuel bound.
  bool exhausted = false;
  std::optional<Derivation> derivation;

  bool covered() const { return status == CoverStatus::Covered; }
};

class Topology;
using TopologyPtr = std::shared_ptr<const Topology>;

/// A covering relation on a finite basis.
///
/// cover(a, S, fuel) decides whether the restriction a*S covers a.  A
/// topology may also know a presentation (basic covers per element) and its
/// smallest covers; when it does not, both are computed by enumerating the
/// sieves on an element, which is only feasible for small bases.
class Topology {
 public:
  using CoverFn = std::function<CoverResult(int, const Sieve&, int)>;
  using SievesFn = std::function<std::vector<Sieve>(int)>;
  using SieveFn = std::function<Sieve(int)>;

  Topology(BasisPtr basis, CoverFn cover, int default_fuel, SievesFn basic_covers = {},
           SieveFn smallest_cover = {});

  const BasisPtr& basis() const { return basis_; }
  int size() const { return basis_->size(); }
  int default_fuel() const { return default_fuel_; }

  CoverResult cover(int a, const Sieve& s, int fuel) const;
  CoverResult cover(int a, const Sieve& s) const { return cover(a, s, default_fuel_); }
  bool covers(int a, const Sieve& s) const { return cover(a, s).covered(); }
  // Does the largest sieve on a inside `set` cover a?
  bool covers_set(int a, const Mask& set) const;

  bool has_presentation() const { return static_cast<bool>(basic_covers_); }
  bool has_smallest_cover() const { return static_cast<bool>(smallest_cover_); }
  std::vector<Sieve> basic_covers(int a) const;
  // Intersection of all covers of a (itself a cover in a finite space).
  Sieve smallest_cover(int a) const;
  // Every covering sieve on a.
  std::vector<Sieve> all_covers(int a) const;

 private:
  BasisPtr basis_;
  CoverFn cover_;
  int default_fuel_;
  SievesFn basic_covers_;
  SieveFn smallest_cover_;
};

/// Generator data C(a): finite families of elements below a.
struct CoveringSystem {
  BasisPtr basis;
  std::vector<std::vector<std::vector<int>>> families;  // families[a] = C(a)

  struct Violation {
    int p;
    int family;  // index into C(p)
    int q;
  };
  // First (p, alpha, q) for which no beta in C(q) lies inside q*(↓alpha).
  std::optional<Violation> find_violation() const;
};

// Throws CoveringAxiomViolation when the system fails the covering axiom.
TopologyPtr generate_topology(const CoveringSystem& system, int fuel);

// Saturation levels for the generated cover: level[x] is the least
// derivation depth putting x in I(Φ, S), or -1.
struct CoverLevels {
  std::vector<int> level;
  std::vector<int> rule;
  bool exhausted = false;
};
CoverLevels cover_levels(const CoveringSystem& system, const Sieve& s, int fuel);

bool check_derivation(const CoveringSystem& system, const Sieve& s, const Derivation& d);

/// Induction on covers.
struct InductionStep {
  int element;
  int rule;  // -1: element lies in the sieve
  std::vector<int> premises;
};
struct InductionTranscript {
  int target;
  std::vector<InductionStep> steps;
};

// Throws NotACover, PremiseFails (P false on a sieve member) or
// HypothesisFails (with the offending element and family).
InductionTranscript cover_induction(const CoveringSystem& system,
                                    const std::function<bool(int)>& predicate, int a,
                                    const Sieve& s, int fuel);
bool check_induction_transcript(const CoveringSystem& system,
                                const std::function<bool(int)>& predicate, const Sieve& s,
                                const InductionTranscript& transcript);

struct ClosedSieve {
  Sieve sieve;
  bool approximate = false;
};
// Least closed sieve containing s, relative to the fuel bound.
ClosedSieve closed_closure(const Topology& t, const Sieve& s, int fuel);

struct AxiomReport {
  std::size_t instances = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
// Maximality, stability and local character over every sieve of every
// element.  Feasible for small bases only.
AxiomReport check_topology_axioms(const Topology& t, int fuel);

// Random partial order on n elements with a random covering system, repaired
// until it satisfies the covering axiom.
CoveringSystem random_covering_system(std::mt19937_64& rng, int n);

}  // namespace ftop

#endif  // FTOP_TOPOLOGY_HPP
