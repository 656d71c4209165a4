// The forcing relation p ⊩ φ over sheaves on a truncated space or its
// double, with derivations that can be re-checked independently.

#ifndef FTOP_FORCING_HPP
#define FTOP_FORCING_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ftop/double.hpp"
#include "ftop/formula.hpp"
#include "ftop/sheaves.hpp"
#include "ftop/spaces.hpp"

namespace ftop {

// Pure data handed to atomic predicates: n for Nat, s for the other sorts.
struct Datum {
  Sort sort = Sort::Nat;
  int n = 0;
  FinSeq s;

  friend bool operator==(const Datum& a, const Datum& b) {
    return a.sort == b.sort && a.n == b.n && a.s == b.s;
  }
};

using Relation = std::function<bool(const std::vector<Datum>&)>;

// An element of the sheaf for its sort.  Nat and FinSeq values are pure;
// sequence values are sections over `stage`.
struct Value {
  Sort sort = Sort::Nat;
  Datum pure;
  Section section;
  int stage = -1;
};

using Env = std::map<std::string, Value>;

struct ModelOptions {
  int nat_max = 8;         // Nat quantifiers range over 0..nat_max-1
  int finseq_length = -1;  // FinSeq quantifiers: lists up to this length (default: depth)
};

/// Sheaves and atoms for evaluating formulas over a truncated space or over
/// the double of one.  Over a double the constant pi (the projection, as a
/// section of Seq2 or SeqN by branching) is predeclared.
class ForcingModel {
 public:
  static std::shared_ptr<ForcingModel> on_space(SpacePtr space, ModelOptions opt = {});
  static std::shared_ptr<ForcingModel> on_double(std::shared_ptr<const DoubleSpace> db,
                                                 ModelOptions opt = {});

  const TopologyPtr& topology() const { return topology_; }
  const TruncatedSpace& inner() const { return *inner_; }
  const SpacePtr& inner_ptr() const { return inner_; }
  const DoubleSpace* double_space() const { return double_.get(); }
  int top() const { return top_; }
  const ModelOptions& options() const { return opt_; }

  // The sequence sheaf for Seq2 / SeqN.
  const LocallyConstantSheaf& sequences(Sort s) const;

  // Sequence constants are sections over the top element.
  void add_constant(const std::string& name, Value v);
  void add_relation(const std::string& name, std::vector<Sort> args, Relation r);
  // InBar-style predicate on FinSeq.
  void add_bar(const std::string& name, const Bar& bar);

  Signature signature() const;
  const std::map<std::string, Value>& constants() const { return constants_; }
  bool has_relation(const std::string& name) const { return relations_.count(name) > 0; }
  bool relation_holds(const std::string& name, const std::vector<Datum>& args) const;

  // Quantifier domain at stage p, deterministic order: for Nat and FinSeq
  // the pure values; for sequence sorts the constants of that sort
  // restricted to p, then every pure sequence, duplicates removed.
  std::vector<Value> domain(Sort s, int p) const;

  Value restrict(const Value& v, int q) const;
  std::string show(const Value& v) const;
  Value pi() const;  // throws InputError when the model is not on a double

  // Members of each element's smallest cover, when the topology supplies
  // it; covering by a sieve is then containment of this set.
  const std::vector<std::vector<int>>& smallest_cover_members() const { return min_members_; }

 private:
  ForcingModel(SpacePtr inner, std::shared_ptr<const DoubleSpace> db, ModelOptions opt);

  SpacePtr inner_;
  std::shared_ptr<const DoubleSpace> double_;
  TopologyPtr topology_;
  int top_ = 0;
  ModelOptions opt_;
  std::unique_ptr<LocallyConstantSheaf> seq2_, seqn_;
  std::vector<FinSeq> lists_;
  std::vector<std::vector<int>> min_members_;
  std::map<std::string, Value> constants_;
  std::map<std::string, std::pair<std::vector<Sort>, Relation>> relations_;
};

using ModelPtr = std::shared_ptr<const ForcingModel>;

// Builtin and model predicates on pure data.
bool atom_holds(const ForcingModel& m, const std::string& name, const std::vector<Datum>& args);

enum class ForceStatus { Holds, FailsWithinFuel };

struct ForceResult {
  ForceStatus status = ForceStatus::FailsWithinFuel;
  // Some negative cover answer along the way was cut off by the fuel bound,
  // so a larger fuel might change the verdict.
  bool exhausted = false;
  bool holds() const { return status == ForceStatus::Holds; }
};

// fuel < 0 means the topology's default.  Env values must live at stages
// >= p; they are restricted to p.  Throws SortError for free names that are
// neither bound by env nor model constants.
ForceResult force(const ForcingModel& m, int p, const Formula& f, const Env& env = {},
                  int fuel = -1);

// {q <= p : q ⊩ f}, computed in one pass with env restricted to p.
Mask forced_set(const ForcingModel& m, int p, const Formula& f, const Env& env = {}, int fuel = -1);

/// A derivation of p ⊩ φ following the clauses.
///   bot, atom, or, exists: `cover` generates a covering sieve of stage; for
///     atoms each generator makes the atom true on pure data, for or/exists
///     premises[i] derives the chosen disjunct / instance at cover[i].
///   and: two premises at stage.
///   imp: one premise for each q <= stage forcing the antecedent.
///   forall: one premise for each q <= stage and each domain value at q.
struct ForcingDerivation {
  std::string clause;
  int stage = -1;
  std::string formula;
  std::vector<int> cover;
  int choice = -1;   // set on premises: disjunct (0/1) or domain index of the witness
  std::string note;  // human-readable witness
  std::vector<ForcingDerivation> premises;

  std::size_t size() const;
};

// nullopt when p does not force f.  Throws DepthExceeded beyond max_nodes.
std::optional<ForcingDerivation> explain(const ForcingModel& m, int p, const Formula& f,
                                         const Env& env = {}, int fuel = -1,
                                         std::size_t max_nodes = 200000);

// Re-checks every clause: covers with the topology, atoms on pure data,
// premises recursively.  Implication premises are matched against the
// evaluated antecedent set.
bool check_forcing_derivation(const ForcingModel& m, const Formula& f, const Env& env,
                              const ForcingDerivation& d, std::string* why = nullptr, int fuel = -1);

// Classical truth of f at the point of a double's singleton {q}: sequence
// values are read through the point, quantifiers range over the same finite
// domains, connectives are Boolean.
bool classical_eval(const ForcingModel& m, int point, const Formula& f, const Env& env = {});

struct LemmaReport {
  std::size_t formulas = 0;
  std::size_t monotonicity = 0;  // q <= p, p forces, q does not
  std::size_t locality = 0;      // every member of a cover forces, p does not
  std::size_t naturality = 0;    // one-pass forced_set disagrees with force
  std::size_t truth = 0;         // singleton forcing disagrees with classical truth
  std::size_t cover_instances = 0;
  std::size_t truth_instances = 0;
  std::vector<std::string> witnesses;  // the first few violations
  bool ok() const { return monotonicity + locality + naturality + truth == 0; }
};

// Checks every formula at every element.  Local character is tested on the
// smallest cover, the basic covers, and all covers of elements with at most
// 10 elements below them.  Truth is tested at each point of a double.
LemmaReport forcing_lemma_check(const ForcingModel& m, const std::vector<Formula>& formulas);

}  // namespace ftop

#endif  // FTOP_FORCING_HPP
