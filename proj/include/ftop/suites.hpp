// Randomized and exhaustive invariant suites shared by the command line
// front end and the acceptance runner.  Every suite is a deterministic
// function of its options.

#ifndef FTOP_SUITES_HPP
#define FTOP_SUITES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ftop/points.hpp"
#include "ftop/topology.hpp"

namespace ftop {

struct SuiteCheck {
  std::string name;
  bool pass = true;
  std::size_t instances = 0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;
  std::vector<std::string> witnesses;  // counterexamples, at most a few per check
  bool ok() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int samples = 200;
  int depth = 3;   // truncation depth L
  int branch = 2;
  int nat_max = 8;
  int formula_depth = 4;
  int max_elements = 8;  // topology suite
};

// Random covering systems with at most max_elements elements: maximality,
// stability and local character of the generated topology.
SuiteReport topology_suite(const SuiteOptions& opt);

// Random closed formulas on the double of Cantor space at depth L with four
// points: monotonicity, local character, one-pass agreement and truth at
// the points.
SuiteReport forcing_suite(const SuiteOptions& opt);

// Naturals, booleans, finite lists and sequences on Cantor, Baire and their
// doubles at depth L: presheaf laws, sheaf condition on sieves and on the
// presentation, purity density, and global sections of the naturals
// against brute-force continuous maps to a discrete space.
SuiteReport sheaf_suite(const SuiteOptions& opt);

// Labelled Brouwer trees on the one-point space and on Cantor space of
// depth 1, at height 2.
SuiteReport brouwer_suite(const SuiteOptions& opt);

// Covers of truncated Baire space against k-images of Brouwer trees for
// every branching 1..branch and depth 0..depth.
SuiteReport alt_baire_suite(const SuiteOptions& opt);

// {a : C(a)} read off the basic covers of a presented topology.
CoveringSystem presentation_system(const Topology& t);

// Four points of Cantor space used by the forcing suites; needs depth >= 2.
std::vector<Point> standard_points();

}  // namespace ftop

#endif  // FTOP_SUITES_HPP
