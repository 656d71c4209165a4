// Countable disjoint refinements of covers (CC-spaces) and amalgamation of
// choices made along such a refinement.

#ifndef FTOP_CHOICE_HPP
#define FTOP_CHOICE_HPP

#include <vector>

#include "ftop/double.hpp"
#include "ftop/sheaves.hpp"
#include "ftop/spaces.hpp"

namespace ftop {

bool pairwise_disjoint(const Basis& b, const std::vector<int>& family);

// A pairwise disjoint family inside s whose down-closure covers the root.
// Tries the generators of s, then the generators of the smallest cover, then
// a bounded search.  Throws NotACover or NoRefinementFound.
std::vector<int> cc_refine(const Topology& t, const Sieve& s);
// The generators when already disjoint, otherwise u[q] for the least q
// with u[q] ⊆ s.
std::vector<int> cc_refine(const TruncatedSpace& space, const Sieve& s);
// The inner refinement of the D-part lifted to D(v)'s, plus any singleton
// of s not below one of them.
std::vector<int> cc_refine(const DoubleSpace& db, const Sieve& s);

// The unique x over p with x restricted to family[i] equal to witnesses[i].
// Throws NotBelowRoot, NotDisjoint, NotCovering, or NotUnique when x is not
// a sheaf on this cover.
Section choice_amalgamation(const Presheaf& x, int p, const std::vector<int>& family,
                            const std::vector<Section>& witnesses);

}  // namespace ftop

#endif  // FTOP_CHOICE_HPP
