// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.  Oracles here are brute force and independent of the
// library's own decision procedures.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ftop/choice.hpp"
#include "ftop/double.hpp"
#include "ftop/errors.hpp"
#include "ftop/inductive.hpp"
#include "ftop/rules.hpp"
#include "ftop/sheaves.hpp"
#include "ftop/suites.hpp"

using namespace ftop;

namespace {

// Pinned limits.
constexpr double kTopologySeconds = 60.0;
constexpr double kCompactnessSeconds = 30.0;
constexpr double kFanSeconds = 120.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

std::string first_failures(const SuiteReport& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.pass) s += "; " + c.name + ": " + c.detail;
  for (std::size_t i = 0; i < r.witnesses.size() && i < 3; ++i) s += "; " + r.witnesses[i];
  return s;
}

// All sequences over {0..b-1} of length exactly n.
std::vector<FinSeq> words(int b, int n) {
  std::vector<FinSeq> out{{}};
  for (int i = 0; i < n; ++i) {
    std::vector<FinSeq> next;
    for (const FinSeq& u : out)
      for (int c = 0; c < b; ++c) {
        FinSeq v = u;
        v.push_back(c);
        next.push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

bool is_prefix(const FinSeq& u, const FinSeq& v) {  // u an initial segment of v
  return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

bool extends_some(const FinSeq& v, const std::vector<FinSeq>& gens) {
  for (const FinSeq& g : gens)
    if (is_prefix(g, v)) return true;
  return false;
}

// Least n <= L with every length-n extension of u extending a generator.
std::optional<int> brute_uniform_depth(int b, int l, const FinSeq& u,
                                       const std::vector<FinSeq>& gens) {
  for (int n = static_cast<int>(u.size()); n <= l; ++n) {
    bool all = true;
    for (const FinSeq& w : words(b, n - static_cast<int>(u.size())))
      all = all && extends_some(concat(u, w), gens);
    if (all) return n;
  }
  return std::nullopt;
}

// Least inductive set containing the extensions of gens, by fixpoint.
bool brute_inductive_root(int b, int l, const std::vector<FinSeq>& gens) {
  std::set<FinSeq> in;
  for (int n = 0; n <= l; ++n)
    for (const FinSeq& v : words(b, n))
      if (extends_some(v, gens)) in.insert(v);
  for (bool changed = true; changed;) {
    changed = false;
    for (int n = 0; n < l; ++n)
      for (const FinSeq& v : words(b, n)) {
        if (in.count(v)) continue;
        bool all = true;
        for (int c = 0; c < b; ++c) {
          FinSeq w = v;
          w.push_back(c);
          all = all && in.count(w);
        }
        if (all) changed = in.insert(v).second;
      }
  }
  return in.count({}) > 0;
}

// A random front: stop at each node with probability stop, always at depth l.
void random_front(std::mt19937_64& rng, int b, int l, double stop, const FinSeq& u,
                  std::vector<FinSeq>& out) {
  std::bernoulli_distribution halt(stop);
  if (static_cast<int>(u.size()) == l || halt(rng)) {
    out.push_back(u);
    return;
  }
  for (int c = 0; c < b; ++c) {
    FinSeq v = u;
    v.push_back(c);
    random_front(rng, b, l, stop, v, out);
  }
}

// --- criteria ---------------------------------------------------------------

Outcome topology_axioms() {
  const auto t0 = Clock::now();
  SuiteOptions o;
  o.seed = 1;
  o.samples = 200;
  o.max_elements = 8;
  const SuiteReport r = topology_suite(o);
  const double s = seconds_since(t0);
  return {r.ok() && s < kTopologySeconds,
          std::to_string(r.checks[0].instances) + " instances over 200 systems, " + fmt_seconds(s) +
              first_failures(r)};
}

Outcome cantor_compactness() {
  const auto t0 = Clock::now();
  const int l = 4;
  auto sp = TruncatedSpace::cantor(l);
  const std::vector<FinSeq> level3 = words(2, 3);
  std::size_t checked = 0, subcovers = 0;
  std::string bad;
  for (unsigned subset = 0; subset < (1u << level3.size()); ++subset) {
    std::vector<FinSeq> gens;
    for (std::size_t i = 0; i < level3.size(); ++i)
      if (subset >> i & 1) gens.push_back(level3[i]);
    const Bar bar = Bar::from_generators(sp, gens, true, false);
    for (const FinSeq& u : sp->sequences()) {
      const Sieve s = bar_to_sieve(bar, u);
      const CantorCover c = cantor_cover_test(*sp, u, s);
      const std::optional<int> want = brute_uniform_depth(2, l, u, gens);
      ++checked;
      if (c.q != want && bad.empty())
        bad = "subset " + std::to_string(subset) + " at " + seq_name(u);
      if (!want) {
        bool threw = false;
        try {
          kfinite_subcover(*sp, u, s);
        } catch (const NotACover&) {
          threw = true;
        }
        if (!threw && bad.empty()) bad = "kfinite_subcover accepted a non-cover";
        continue;
      }
      const std::vector<FinSeq> k = kfinite_subcover(*sp, u, s);
      ++subcovers;
      // Revalidate: exactly u[q], all in the bar, generating a cover of u.
      bool ok = k.size() == (1u << (*want - u.size()));
      std::vector<int> idx;
      for (const FinSeq& v : k) {
        ok = ok && static_cast<int>(v.size()) == *want && is_prefix(u, v) && bar(v);
        idx.push_back(sp->index(v));
      }
      const int ui = sp->index(u);
      ok = ok && sp->topology()->covers(ui, Sieve(sp->basis(), ui, idx));
      if (!ok && bad.empty()) bad = "subcover fails to revalidate at " + seq_name(u);
    }
  }
  const double s = seconds_since(t0);
  return {bad.empty() && s < kCompactnessSeconds,
          "256 bars, " + std::to_string(checked) + " (bar, root) pairs, " +
              std::to_string(subcovers) + " subcovers revalidated, " + fmt_seconds(s) +
              (bad.empty() ? "" : "; first mismatch: " + bad)};
}

struct ForcingRun {
  SuiteReport report;
  bool done = false;
};

const SuiteReport& forcing_run() {
  static ForcingRun run;
  if (!run.done) {
    SuiteOptions o;
    o.seed = 1;
    o.samples = 200;
    o.depth = 3;
    o.nat_max = 8;
    o.formula_depth = 4;
    run.report = forcing_suite(o);
    run.done = true;
  }
  return run.report;
}

const SuiteCheck& check_named(const SuiteReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw InputError("no check named " + name);
}

Outcome forcing_lemma() {
  const SuiteReport& r = forcing_run();
  const SuiteCheck& mono = check_named(r, "monotonicity");
  const SuiteCheck& loc = check_named(r, "local character");
  return {mono.pass && loc.pass,
          "200 formulas: monotonicity " + mono.detail + " (" + std::to_string(mono.instances) +
              " pairs), local character " + loc.detail + " (" + std::to_string(loc.instances) +
              " cover instances)"};
}

Outcome point_truth() {
  const SuiteReport& r = forcing_run();
  const SuiteCheck& t = check_named(r, "truth at points");
  return {t.pass && t.instances == 200u * standard_points().size(),
          std::to_string(t.instances) + " (formula, point) pairs, " + t.detail};
}

Outcome fan_extraction() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  int exact_uniform = 0;
  std::string bad;
  for (int iter = 0; iter < 50; ++iter) {
    const int l = 2 + static_cast<int>(rng() % 4);
    auto sp = TruncatedSpace::cantor(l);
    std::vector<FinSeq> gens;
    bool uniform_closure = iter % 5 == 0;
    if (uniform_closure) {
      gens = words(2, static_cast<int>(rng() % (l + 1)));
    } else {
      random_front(rng, 2, l, 0.3, {}, gens);
      // Extra generators keep the bar monotone and barring.
      for (int e = static_cast<int>(rng() % 3); e > 0; --e) {
        const FinSeq& v = sp->seq(static_cast<int>(rng() % sp->size()));
        gens.push_back(v);
      }
    }
    const Bar bar = Bar::from_generators(sp, gens, true, false);
    const FanResult r = fan_rule(bar);
    bool ok = true;
    for (const FinSeq& v : words(2, r.n)) ok = ok && extends_some(v, gens);
    const std::optional<int> want = brute_uniform_depth(2, l, {}, gens);
    ok = ok && want && r.n == *want;
    if (uniform_closure && ok) ++exact_uniform;
    ok = ok && transcript_ok(r.transcript) && transcript_ok(recheck_fan(bar, r));
    if (!ok && bad.empty()) bad = "bar " + std::to_string(iter) + " at depth " + std::to_string(l);
  }
  const double s = seconds_since(t0);
  return {bad.empty() && s < kFanSeconds,
          "50 bars at depth 2..5 (" + std::to_string(exact_uniform) +
              " uniform closures), n = brute-force uniform depth, transcripts recheck, " +
              fmt_seconds(s) + (bad.empty() ? "" : "; failed: " + bad)};
}

Outcome bar_induction() {
  std::mt19937_64 rng(9);
  const int b = 2, l = 4;
  auto sp = TruncatedSpace::baire(b, l);
  std::string bad;
  int steps = 0;
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<FinSeq> gens;
    random_front(rng, b, l, 0.25, {}, gens);
    const Bar bar = Bar::inductive_closure_of(sp, gens);
    const bool oracle = brute_inductive_root(b, l, gens);
    const BarResult r = bar_rule(bar);
    steps += static_cast<int>(r.induction.steps.size());
    const bool ok = oracle && r.holds_at_root && inductive_closure_contains_root(bar) &&
                    transcript_ok(r.transcript) && transcript_ok(recheck_bar(bar, r));
    if (!ok && bad.empty()) bad = "bar " + std::to_string(iter);
  }
  return {bad.empty(), "20 inductive closures of random fronts on Baire B=2 L=4, " +
                           std::to_string(steps) + " induction steps rechecked" +
                           (bad.empty() ? "" : "; failed: " + bad)};
}

// f agrees with the unique β of the table and the modulus is valid at every
// enumerated point.
std::string validate_continuity(const RelationTable& rel, const ContinuityResult& r) {
  const std::vector<FinSeq> outs = words(rel.branch, rel.out_length);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    int unique = 0;
    for (const FinSeq& b : outs) unique += rel.phi(r.points[i], b);
    if (unique != 1 || !rel.phi(r.points[i], r.f[i])) return "value at " + r.points[i].name();
    for (int k = 0; k <= rel.out_length; ++k) {
      const int m = r.modulus[i][k];
      for (std::size_t j = 0; j < r.points.size(); ++j) {
        bool agree = true;
        for (int n = 0; n < m; ++n) agree = agree && r.points[i].at(n) == r.points[j].at(n);
        if (agree && !std::equal(r.f[i].begin(), r.f[i].begin() + k, r.f[j].begin()))
          return "modulus at " + r.points[i].name() + ", k = " + std::to_string(k);
      }
    }
  }
  if (!transcript_ok(r.transcript)) return "transcript";
  if (!transcript_ok(recheck_continuity(rel, {}, r))) return "recheck";
  return {};
}

RelationTable shifted_table(int branch, int len, int off, std::string name) {
  return {branch, len,
          [len, off](const Point& a, const FinSeq& b) {
            for (int n = 0; n < len; ++n)
              if (b[n] != a.at(n + off)) return false;
            return true;
          },
          std::move(name)};
}

Outcome continuity() {
  std::string bad;
  int points = 0;
  std::vector<RelationTable> tables{shifted_table(2, 2, 0, "identity"),
                                    shifted_table(2, 2, 1, "shift")};
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10; ++i) {
    const int branch = 2 + static_cast<int>(rng() % 2);
    const int len = 1 + static_cast<int>(rng() % 2);
    const int m = static_cast<int>(rng() % (len + 2));  // modulus data, within L+1
    const ValueDomain in = ValueDomain::seq(branch, m), out = ValueDomain::seq(branch, len);
    std::vector<int> g(in.size());
    for (int& x : g) x = static_cast<int>(rng() % out.size());
    tables.push_back({branch, len,
                      [=](const Point& a, const FinSeq& b) {
                        FinSeq head(m);
                        for (int n = 0; n < m; ++n) head[n] = a.at(n);
                        return out.decode(g[in.encode(head)]) == b;
                      },
                      "random " + std::to_string(i)});
  }
  for (const RelationTable& t : tables) {
    const ContinuityResult r = continuity_rule(t);
    points += static_cast<int>(r.points.size());
    const std::string why = validate_continuity(t, r);
    if (!why.empty() && bad.empty()) bad = t.name + ": " + why;
  }

  // Outputs depending on the tail or beyond the inner depth L+1.
  std::vector<RelationTable> disc{
      {2, 1, [](const Point& a, const FinSeq& b) { return b[0] == a.tail; }, "tail"},
      {2, 1, [](const Point& a, const FinSeq& b) { return b[0] == a.at(2); }, "digit at L+1"},
      {2, 1, [](const Point& a, const FinSeq& b) { return b[0] == a.at(4); }, "digit at L+3"},
      {2, 1, [](const Point& a, const FinSeq& b) { return b[0] == (a.at(0) + a.tail) % 2; },
       "first digit plus tail"},
      {2, 2, [](const Point& a, const FinSeq& b) { return b[0] == a.at(0) && b[1] == a.at(5); },
       "pair with a far digit"}};
  int raised = 0;
  for (const RelationTable& t : disc) {
    try {
      continuity_rule(t);
      if (bad.empty()) bad = t.name + " passed";
    } catch (const NoModulus&) {
      ++raised;
    }
  }
  return {bad.empty() && raised == 5,
          "identity, shift and 10 random tables over " + std::to_string(points) +
              " points; NoModulus on " + std::to_string(raised) + "/5 discontinuous tables" +
              (bad.empty() ? "" : "; failed: " + bad)};
}

Outcome sheaf_laws() {
  SuiteOptions o;
  o.depth = 3;
  const SuiteReport r = sheaf_suite(o);
  std::size_t n = 0;
  for (const auto& c : r.checks) n += c.instances;
  return {r.ok(), std::to_string(r.checks.size()) + " checks, " + std::to_string(n) + " instances" +
                      first_failures(r)};
}

bool refinement_valid(const Topology& t, const Sieve& s, const std::vector<int>& alpha) {
  const Basis& b = *t.basis();
  Mask m(b.size(), false);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!s.contains(alpha[i])) return false;
    for (std::size_t j = 0; j < i; ++j)
      for (int r = 0; r < b.size(); ++r)
        if (b.leq(r, alpha[i]) && b.leq(r, alpha[j])) return false;
    m[alpha[i]] = true;
  }
  return t.covers(s.root(), Sieve::generated(t.basis(), s.root(), m));
}

Outcome cc_choice() {
  std::string bad;
  std::size_t covers = 0;
  std::vector<SpacePtr> spaces{TruncatedSpace::cantor(3), TruncatedSpace::baire(2, 3),
                               TruncatedSpace::baire(3, 2)};
  for (const SpacePtr& sp : spaces) {
    const Topology& t = *sp->topology();
    for (int p = 0; p < sp->size(); ++p)
      for (const Sieve& s : t.all_covers(p)) {
        ++covers;
        if (!refinement_valid(t, s, cc_refine(*sp, s)) || !refinement_valid(t, s, cc_refine(t, s)))
          if (bad.empty()) bad = sp->kind_name() + " " + s.to_string();
      }
  }
  for (const SpacePtr& sp : {TruncatedSpace::cantor(3), TruncatedSpace::baire(2, 2),
                             TruncatedSpace::baire(3, 1)}) {
    auto db = DoubleSpace::make(sp, leaf_points(*sp));
    const Topology& t = *db->topology();
    for (int p = 0; p < db->size(); ++p)
      for (const Sieve& s : t.all_covers(p)) {
        ++covers;
        if (!refinement_valid(t, s, cc_refine(*db, s)) || !refinement_valid(t, s, cc_refine(t, s)))
          if (bad.empty()) bad = "double " + s.to_string();
      }
  }

  std::mt19937_64 rng(12);
  auto sp = TruncatedSpace::cantor(3);
  auto db = DoubleSpace::make(sp, leaf_points(*sp));
  int unique = 0;
  for (int iter = 0; iter < 100; ++iter) {
    const bool on_double = iter % 2 == 1;
    const TopologyPtr& t = on_double ? db->topology() : sp->topology();
    const LocallyConstantSheaf nat(t, ValueDomain::nat(3));
    const int p = static_cast<int>(rng() % t->size());
    const auto cs = t->all_covers(p);
    const Sieve& s = cs[rng() % cs.size()];
    const std::vector<int> alpha = on_double ? cc_refine(*db, s) : cc_refine(*sp, s);
    std::vector<Section> w;
    for (int a : alpha) w.push_back(nat.nth(a, rng() % nat.count(a)));
    const Section x = choice_amalgamation(nat, p, alpha, w);
    int matches = 0;
    bool is_x = false;
    for (std::uint64_t i = 0; i < nat.count(p); ++i) {
      const Section y = nat.nth(p, i);
      bool ok = true;
      for (std::size_t j = 0; j < alpha.size(); ++j) ok = ok && nat.restrict(p, y, alpha[j]) == w[j];
      if (ok) {
        ++matches;
        is_x = y == x;
      }
    }
    if (matches == 1 && is_x)
      ++unique;
    else if (bad.empty())
      bad = "amalgamation instance " + std::to_string(iter);
  }
  return {bad.empty() && unique == 100,
          std::to_string(covers) + " covers refined; " + std::to_string(unique) +
              "/100 amalgamations unique" + (bad.empty() ? "" : "; failed: " + bad)};
}

Outcome brouwer() {
  SuiteOptions o;
  o.branch = 3;
  o.depth = 3;
  const SuiteReport alt = alt_baire_suite(o);
  const SuiteReport bo = brouwer_suite(o);
  std::size_t sieves = 0, trees = 0;
  for (const auto& c : alt.checks) sieves += c.instances;
  for (const auto& c : bo.checks) trees += c.instances;
  return {alt.ok() && bo.ok() && !alt.checks.empty() && !bo.checks.empty(),
          "alt-baire on B,L <= 3 over " + std::to_string(sieves) +
              " sieves; labelled trees on the one-point space and Cantor L=1 (" +
              std::to_string(trees) + " instances)" + first_failures(alt) + first_failures(bo)};
}

Mask brute_closure(int n, const std::vector<Rule>& rules, Mask u) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const Rule& r : rules) {
      bool fire = !u[r.conclusion];
      for (int x : r.premises) fire = fire && u[x];
      if (fire) u[r.conclusion] = changed = true;
    }
  }
  (void)n;
  return u;
}

Outcome set_compactness() {
  std::mt19937_64 rng(23);
  std::string bad;
  int witnesses = 0;
  for (int iter = 0; iter < 100; ++iter) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<Rule> rules;
    for (int r = static_cast<int>(rng() % 8); r > 0; --r) {
      Rule rule{{}, static_cast<int>(rng() % n)};
      for (int x = 0; x < n; ++x)
        if (rng() % 3 == 0) rule.premises.push_back(x);
      rules.push_back(rule);
    }
    const InductiveDefinition phi(n, rules);
    Mask u(n);
    for (int x = 0; x < n; ++x) u[x] = rng() % 2;
    const Mask closed = brute_closure(n, rules, u);
    if (inductive_close(phi, u) != closed && bad.empty()) bad = "closure " + std::to_string(iter);
    for (int a = 0; a < n; ++a) {
      if (!closed[a]) continue;
      const std::vector<int> v = set_compactness_witness(phi, u, a);
      ++witnesses;
      Mask vm(n, false);
      bool ok = true;
      for (int x : v) {
        ok = ok && u[x];
        vm[x] = true;
      }
      ok = ok && brute_closure(n, rules, vm)[a];
      for (unsigned bits = 0; bits < (1u << n) && ok; ++bits) {
        if (static_cast<std::size_t>(__builtin_popcount(bits)) >= v.size()) continue;
        Mask w(n, false);
        bool sub = true;
        for (int x = 0; x < n; ++x) {
          w[x] = bits >> x & 1;
          sub = sub && (!w[x] || u[x]);
        }
        if (sub && brute_closure(n, rules, w)[a]) ok = false;
      }
      if (!ok && bad.empty()) bad = "definition " + std::to_string(iter) + ", a = " + std::to_string(a);
    }
  }
  return {bad.empty(), "100 definitions, " + std::to_string(witnesses) +
                           " witnesses revalidated and minimal by size" +
                           (bad.empty() ? "" : "; failed: " + bad)};
}

struct RunOutput {
  std::string out;
  int status = -1;
};

RunOutput run(const std::string& cmd) {
  RunOutput r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  r.status = pclose(p);
  return r;
}

Outcome cli_determinism() {
  const std::string cli = FTOP_CLI_PATH;
  const std::string ex = FTOP_EXAMPLES_DIR;
  const std::vector<std::string> commands{
      "check topology --seed 4 --samples 50",
      "check forcing --seed 1 --samples 40",
      "check brouwer --seed 1",
      "check alt-baire --seed 2 --branch 3 --depth 3",
      "fan --bar " + ex + "/bar.json --depth 4",
      "bar --bar " + ex + "/inductive-bar.json",
      "continuity --relation shift --depth 2",
      "continuity --relation tail",
      "force --space " + ex + "/double-cantor.json --at \"D()\" --formula " + ex + "/false.txt",
      "force --space double-cantor --bar " + ex +
          "/bar.json --formula \"exists u:FinSeq. Prefix(pi,u) & InBar(u)\""};
  std::string bad;
  for (const std::string& c : commands) {
    const std::string full = "\"" + cli + "\" " + c + " --out -";
    const RunOutput a = run(full), b = run(full);
    if (a.out.empty() || a.out != b.out || a.status != b.status)
      if (bad.empty()) bad = c;
  }
  return {bad.empty(), std::to_string(commands.size()) + " commands run twice, reports byte-identical" +
                           (bad.empty() ? "" : "; differs: " + bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"topology axioms on random covering systems", topology_axioms},
      {"Cantor compactness against brute-force uniform depth", cantor_compactness},
      {"forcing lemma: monotonicity and local character", forcing_lemma},
      {"forcing at a point coincides with truth", point_truth},
      {"fan rule extraction", fan_extraction},
      {"bar induction rule", bar_induction},
      {"continuity rule", continuity},
      {"sheaf laws", sheaf_laws},
      {"CC refinement and choice amalgamation", cc_choice},
      {"Brouwer trees and the alternative Baire topology", brouwer},
      {"set compactness witnesses", set_compactness},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const Error& e) {
      o = {false, std::string("unexpected ") + e.kind() + ": " + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
