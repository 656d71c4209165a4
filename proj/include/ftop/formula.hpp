// First-order formulas over naturals, finite sequences and sequence
// sections: AST, parser, printer and a random generator.

#ifndef FTOP_FORMULA_HPP
#define FTOP_FORMULA_HPP

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace ftop {

enum class Sort { Nat, FinSeq, Seq2, SeqN };

std::string sort_name(Sort s);
bool is_sequence_sort(Sort s);  // Seq2 or SeqN

struct Term {
  enum class Kind { Var, Const, Num, SeqLit, Add, Len };
  Kind kind = Kind::Num;
  Sort sort = Sort::Nat;
  std::string name;        // Var and Const
  int slot = -1;           // Var: binder depth, 0 for the outermost
  int num = 0;             // Num
  std::vector<int> seq;    // SeqLit
  std::vector<Term> args;  // Add (two), Len (one)
  std::size_t pos = 0;

  friend bool operator==(const Term& a, const Term& b);
};

struct Formula {
  enum class Kind { Bot, Atom, And, Or, Imp, Exists, Forall };
  Kind kind = Kind::Bot;
  std::string name;            // atom name or bound variable
  Sort sort = Sort::Nat;       // quantifier sort
  std::vector<Term> args;      // Atom
  std::vector<Formula> sub;    // two for connectives, one for quantifiers
  std::size_t pos = 0;

  static Formula bot();
  static Formula top();  // false -> false
  static Formula atom(std::string name, std::vector<Term> args);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula exists(std::string var, Sort s, Formula body);
  static Formula forall(std::string var, Sort s, Formula body);

  int depth() const;

  friend bool operator==(const Formula& a, const Formula& b);
};

/// Names a formula may use besides its bound variables.  The builtin atoms
/// Eq, Leq, Prefix and App are always available:
///   Eq(s, t)        s and t of the same sort
///   Leq(m, n)       naturals, or finite sequences (n is an initial segment of m)
///   Prefix(a, u)    u is an initial segment of a (a a sequence or list)
///   App(a, n, m)    a(n) = m
struct Signature {
  std::map<std::string, Sort> constants;
  std::map<std::string, std::vector<Sort>> relations;
};

// pi : Seq2 and InBar(FinSeq).
Signature default_signature();

// Throws SyntaxError or SortError, both with the offending offset.
Formula parse_formula(const std::string& text, const Signature& sig = default_signature());

// Fully parenthesised; parse_formula(to_string(f)) == f.
std::string to_string(const Formula& f);
std::string to_string(const Term& t);

struct RandomFormulaOptions {
  int max_depth = 4;
  int nat_literals = 4;  // numerals drawn from 0..nat_literals-1
  int seq_alphabet = 2;
  int seq_max_length = 2;
  std::vector<Sort> sorts{Sort::Nat, Sort::FinSeq, Sort::Seq2};
};

// A closed, well-sorted formula of depth <= max_depth.
Formula random_formula(std::mt19937_64& rng, const Signature& sig,
                       const RandomFormulaOptions& opt = {});

}  // namespace ftop

#endif  // FTOP_FORMULA_HPP
