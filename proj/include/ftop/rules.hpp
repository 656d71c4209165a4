// Extraction pipelines for the fan rule, the bar induction rule and the
// continuity rule.  Each forces its premise over the double of a truncated
// space, extracts the computational content, and records every stage so it
// can be checked again from the recorded data alone.

#ifndef FTOP_RULES_HPP
#define FTOP_RULES_HPP

#include <functional>
#include <string>
#include <vector>

#include "ftop/forcing.hpp"
#include "ftop/points.hpp"
#include "ftop/spaces.hpp"

namespace ftop {

struct TranscriptStage {
  std::string name;
  bool ok = true;
  std::vector<std::string> lines;
};
using Transcript = std::vector<TranscriptStage>;

bool transcript_ok(const Transcript& t);

// Least d with every sequence of length d in the bar, or -1.
int uniform_depth(const Bar& bar);

// ---------------------------------------------------------------------------
// Fan rule: from ∀α∃u(α ∈ u ∧ φ(u)) forced at D<> conclude ∀v ∈ <>[n]. φ(v).

struct CoverWitness {
  int element;  // in the double
  FinSeq u;     // pure witness for ∃u
};

struct FanConclusion {
  FinSeq v;
  int cover_element;  // the cover element above D(v)
  FinSeq u;
  int point;          // index of a point through v in the double
  FinSeq point_witness;  // classical witness at that point
};

struct FanResult {
  int n = 0;
  int cover_depth = 0;    // least q with <>[q] inside the extracted cover
  int uniform_depth = 0;  // brute force
  ForcingDerivation instance;  // ∃u(π ∈ u ∧ φ(u)) at D<>
  std::vector<CoverWitness> witnesses;
  std::vector<FanConclusion> conclusions;
  Transcript transcript;
};

// The bar must be declared monotone (NotMonotone) and live on a Cantor
// space (InputError).  Throws PremiseNotForced naming the failing stage.
FanResult fan_rule(const Bar& bar);
Transcript recheck_fan(const Bar& bar, const FanResult& r);

// ---------------------------------------------------------------------------
// Bar induction rule: from the premise forced at D<> and φ monotone and
// inductive conclude φ(<>).

struct BarResult {
  bool holds_at_root = false;
  ForcingDerivation instance;
  std::vector<CoverWitness> witnesses;
  std::vector<FinSeq> cover;  // generators of a cover of <> in the inner space
  std::vector<std::pair<FinSeq, int>> point_checks;  // cover generator, point index
  InductionTranscript induction;
  Transcript transcript;
};

// Throws NotMonotone / NotInductive when the bar is not declared so,
// PremiseNotForced, or HypothesisFails from the induction.
BarResult bar_rule(const Bar& bar);
Transcript recheck_bar(const Bar& bar, const BarResult& r);

// Direct oracle: the least inductive set containing the bar, then <> in it.
bool inductive_closure_contains_root(const Bar& bar);

// ---------------------------------------------------------------------------
// Continuity rule: from ∃!β φ(π, β) forced at D<> extract f = pt(ρ∘μ) with
// a modulus of continuity.

/// φ(α, β) on eventually constant points α and outputs β of fixed length.
struct RelationTable {
  int branch = 2;
  int out_length = 2;
  std::function<bool(const Point&, const FinSeq&)> phi;
  std::string name;
};

struct ContinuityOptions {
  SpaceKind kind = SpaceKind::Baire;
  // Depth of the inner space; 0 means out_length + 1.
  int inner_depth = 0;
};

struct ContinuityResult {
  int inner_depth = 0;
  std::vector<Point> points;
  std::vector<FinSeq> f;                 // f(points[i]), length out_length
  std::vector<std::vector<int>> modulus;  // modulus[i][k], k = 0..out_length
  ForcingDerivation instance;            // ∃!β φ(π, β) at D<>
  Section rho;                           // the amalgamated section over D<>
  Transcript transcript;
};

// Throws NotUnique / NotForced when the table is not total-functional on
// the enumerated points or the premise is not forced, and NoModulus (with
// two points that agree on the truncation but not on the output) when the
// table is not continuous.
ContinuityResult continuity_rule(const RelationTable& rel, const ContinuityOptions& opt = {});
Transcript recheck_continuity(const RelationTable& rel, const ContinuityOptions& opt,
                              const ContinuityResult& r);

}  // namespace ftop

#endif  // FTOP_RULES_HPP
