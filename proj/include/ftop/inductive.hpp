// Finite inductive definitions: rules (X, a) over a finite carrier and their
// least closed sets.

#ifndef FTOP_INDUCTIVE_HPP
#define FTOP_INDUCTIVE_HPP

#include <vector>

#include "ftop/basis.hpp"

namespace ftop {

struct Rule {
  std::vector<int> premises;
  int conclusion;
};

/// Carrier elements are 0..carrier-1.  The constructor throws InputError
/// when a rule mentions something outside the carrier.
class InductiveDefinition {
 public:
  InductiveDefinition(int carrier, std::vector<Rule> rules);

  int carrier() const { return carrier_; }
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  int carrier_;
  std::vector<Rule> rules_;
};

// I(Φ, U): least Φ-closed set containing U.
Mask inductive_close(const InductiveDefinition& phi, const Mask& u);

// Smallest V ⊆ U (by size, then lexicographically) with a ∈ I(Φ, V).
// Throws NotDerivable when a ∉ I(Φ, U).
std::vector<int> set_compactness_witness(const InductiveDefinition& phi, const Mask& u, int a);

}  // namespace ftop

#endif  // FTOP_INDUCTIVE_HPP
