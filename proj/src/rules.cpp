#include "ftop/rules.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>

#include "ftop/choice.hpp"
#include "ftop/double.hpp"
#include "ftop/errors.hpp"
#include "ftop/maps.hpp"

namespace ftop {

bool transcript_ok(const Transcript& t) {
  return std::all_of(t.begin(), t.end(), [](const TranscriptStage& s) { return s.ok; });
}

int uniform_depth(const Bar& bar) {
  const TruncatedSpace& sp = *bar.space();
  for (int d = 0; d <= sp.depth(); ++d) {
    const auto level = sp.u_bracket({}, d);
    if (std::all_of(level.begin(), level.end(), [&](const FinSeq& v) { return bar(v); }))
      return d;
  }
  return -1;
}

namespace {

Sort seq_sort(int branch) { return branch == 2 ? Sort::Seq2 : Sort::SeqN; }

TranscriptStage& stage(Transcript& t, const std::string& name) {
  t.push_back(TranscriptStage{name, true, {}});
  return t.back();
}

void note(TranscriptStage& s, bool ok, const std::string& line) {
  if (!ok) s.ok = false;
  s.lines.push_back((ok ? "" : "fails: ") + line);
}

FinSeq take(const FinSeq& s, int n) { return FinSeq(s.begin(), s.begin() + n); }

FinSeq prefix_of(const Point& a, int n) {
  FinSeq s(n);
  for (int i = 0; i < n; ++i) s[i] = a.at(i);
  return s;
}

Value pure_list(const FinSeq& u) {
  Value v;
  v.sort = Sort::FinSeq;
  v.pure = Datum{Sort::FinSeq, 0, u};
  return v;
}

// ---------------------------------------------------------------------------
// Shared by the fan and bar rules: the double over the leaf points with the
// bar as InBar.

struct BarModel {
  DoublePtr db;
  std::shared_ptr<ForcingModel> m;
  Formula premise, instance, witness;
  int top = 0;
};

BarModel bar_model(const Bar& bar) {
  BarModel b;
  const SpacePtr& sp = bar.space();
  b.db = DoubleSpace::make(sp, leaf_points(*sp));
  b.m = ForcingModel::on_double(b.db);
  b.m->add_bar("InBar", bar);
  Signature sig = b.m->signature();
  b.premise = parse_formula(
      "forall a:" + sort_name(seq_sort(sp->branch())) + ". exists u:FinSeq. Prefix(a,u) & InBar(u)",
      sig);
  b.instance = parse_formula("exists u:FinSeq. Prefix(pi,u) & InBar(u)", sig);
  sig.constants["w"] = Sort::FinSeq;
  b.witness = parse_formula("Prefix(pi,w) & InBar(w)", sig);
  b.top = b.db->d({});
  return b;
}

FinSeq missed_leaf(const Bar& bar) {
  for (const FinSeq& v : bar.space()->u_bracket({}, bar.space()->depth()))
    if (!bar(v)) return v;
  return {};
}

void require_premise(const BarModel& b, const Bar& bar) {
  if (!force(*b.m, b.top, b.premise).holds())
    throw PremiseNotForced("premise: not forced at D<>; no initial segment of " +
                           seq_name(missed_leaf(bar)) + " is in the bar");
}

ForcingDerivation explain_instance(const BarModel& b) {
  auto d = explain(*b.m, b.top, b.instance);
  if (!d) throw PremiseNotForced("instance: " + to_string(b.instance) + " not forced at D<>");
  return std::move(*d);
}

std::vector<CoverWitness> cover_witnesses(const ForcingModel& m, const ForcingDerivation& d) {
  std::vector<CoverWitness> out;
  for (std::size_t i = 0; i < d.cover.size(); ++i) {
    const int g = d.cover[i];
    const auto dom = m.domain(Sort::FinSeq, g);
    const int c = d.premises.at(i).choice;
    if (c < 0 || c >= static_cast<int>(dom.size())) throw InputError("witness out of range");
    out.push_back({g, dom[c].pure.s});
  }
  return out;
}

// The D-part of a cover of D<> as a sieve on <> in the inner space.
Sieve d_part(const DoubleSpace& db, const std::vector<int>& cover) {
  Mask set(db.d_count(), false);
  for (int g : cover)
    if (db.is_d(g)) set[db.inner_index(g)] = true;
  return Sieve::generated(db.inner()->basis(), db.inner()->index({}), set);
}

const CoverWitness* witness_for(const DoubleSpace& db, const std::vector<CoverWitness>& ws,
                                const FinSeq& v) {
  for (const auto& w : ws)
    if (db.is_d(w.element) && seq_leq(v, db.inner()->seq(db.inner_index(w.element)))) return &w;
  return nullptr;
}

int purified_depth(const DoubleSpace& db, const std::vector<CoverWitness>& ws, int q) {
  const TruncatedSpace& sp = *db.inner();
  auto fits = [&](int n) {
    for (const FinSeq& v : sp.u_bracket({}, n)) {
      const CoverWitness* w = witness_for(db, ws, v);
      if (!w || static_cast<int>(w->u.size()) > n) return false;
    }
    return true;
  };
  int n = q;
  while (n < sp.depth() && !fits(n)) ++n;
  return n;
}

int point_through(const DoubleSpace& db, const FinSeq& v) {
  for (std::size_t k = 0; k < db.points().size(); ++k)
    if (db.points()[k].contains(v)) return static_cast<int>(k);
  return -1;
}

std::optional<FinSeq> classical_witness(const Bar& bar, const Point& a) {
  for (int n = 0; n <= bar.space()->depth(); ++n) {
    FinSeq u = prefix_of(a, n);
    if (bar(u)) return u;
  }
  return std::nullopt;
}

std::string elem(const DoubleSpace& db, int x) { return db.basis()->name(x); }

// Premise, instance and witness stages.
void check_extraction(Transcript& t, const BarModel& b, const ForcingDerivation& inst,
                      const std::vector<CoverWitness>& ws) {
  {
    auto& s = stage(t, "premise");
    note(s, force(*b.m, b.top, b.premise).holds(), "D<> forces " + to_string(b.premise));
  }
  {
    auto& s = stage(t, "instance");
    std::string why;
    const bool ok =
        inst.stage == b.top && check_forcing_derivation(*b.m, b.instance, {}, inst, &why);
    note(s, ok,
         "derivation of " + to_string(b.instance) + " at D<>, " + std::to_string(inst.size()) +
             " nodes" + (why.empty() ? "" : ": " + why));
  }
  auto& s = stage(t, "witnesses");
  note(s, ws.size() == inst.cover.size(), std::to_string(ws.size()) + " cover elements");
  for (std::size_t i = 0; i < ws.size() && i < inst.cover.size(); ++i) {
    const auto& w = ws[i];
    const Env env{{"w", pure_list(w.u)}};
    const bool ok = w.element == inst.cover[i] &&
                    force(*b.m, w.element, b.witness, env).holds();
    note(s, ok, elem(*b.db, w.element) + ": u = " + seq_name(w.u));
  }
}

void check_minimal_point(TranscriptStage& s, const BarModel& b, const Bar& bar, const FinSeq& v,
                         int k, const FinSeq* recorded) {
  const auto& pts = b.db->points();
  if (k < 0 || k >= static_cast<int>(pts.size()) || !pts[k].contains(v)) {
    note(s, false, seq_name(v) + ": no recorded point through it");
    return;
  }
  const bool forced = force(*b.m, b.db->singleton(k), b.instance).holds();
  const bool truth = classical_eval(*b.m, k, b.instance);
  const auto cw = classical_witness(bar, pts[k]);
  bool ok = forced && truth && cw.has_value();
  if (recorded) ok = ok && cw && *cw == *recorded;
  note(s, ok,
       "{" + pts[k].name() + "} through " + seq_name(v) + ": forced " + (forced ? "yes" : "no") +
           ", true " + (truth ? "yes" : "no") + ", witness " + (cw ? seq_name(*cw) : "none"));
}

}  // namespace

// ---------------------------------------------------------------------------

FanResult fan_rule(const Bar& bar) {
  const TruncatedSpace& sp = *bar.space();
  if (sp.kind() != SpaceKind::Cantor) throw InputError("the fan rule needs a Cantor space");
  if (!bar.monotone()) throw NotMonotone("the fan rule needs a bar declared monotone");
  const BarModel b = bar_model(bar);
  require_premise(b, bar);

  FanResult r;
  r.instance = explain_instance(b);
  r.witnesses = cover_witnesses(*b.m, r.instance);
  const CantorCover cc = cantor_cover_test(sp, {}, d_part(*b.db, r.instance.cover));
  if (!cc.covered())
    throw PremiseNotForced("cover: the D-part misses " + seq_name(cc.frontier.front()));
  r.cover_depth = *cc.q;
  r.n = purified_depth(*b.db, r.witnesses, r.cover_depth);

  for (const FinSeq& v : sp.u_bracket({}, r.n)) {
    const CoverWitness* w = witness_for(*b.db, r.witnesses, v);
    FanConclusion c;
    c.v = v;
    c.cover_element = w ? w->element : -1;
    if (w) c.u = w->u;
    c.point = point_through(*b.db, v);
    if (c.point >= 0) {
      if (auto cw = classical_witness(bar, b.db->points()[c.point])) c.point_witness = *cw;
    }
    r.conclusions.push_back(std::move(c));
  }
  r.uniform_depth = uniform_depth(bar);
  r.transcript = recheck_fan(bar, r);
  return r;
}

Transcript recheck_fan(const Bar& bar, const FanResult& r) {
  const TruncatedSpace& sp = *bar.space();
  const BarModel b = bar_model(bar);
  Transcript t;
  check_extraction(t, b, r.instance, r.witnesses);
  {
    auto& s = stage(t, "cover depth");
    const CantorCover cc = cantor_cover_test(sp, {}, d_part(*b.db, r.instance.cover));
    note(s, cc.covered() && *cc.q == r.cover_depth,
         "<>[" + std::to_string(r.cover_depth) + "] lies in the D-part of the cover");
  }
  {
    auto& s = stage(t, "purification");
    const int n = purified_depth(*b.db, r.witnesses, r.cover_depth);
    note(s, n == r.n,
         "n = " + std::to_string(r.n) + ": every witness for <>[n] has length at most n");
  }
  const auto level = sp.u_bracket({}, std::min(std::max(r.n, 0), sp.depth()));
  {
    auto& s = stage(t, "monotone step");
    note(s, r.conclusions.size() == level.size(),
         std::to_string(level.size()) + " sequences of length " + std::to_string(r.n));
    for (std::size_t j = 0; j < r.conclusions.size() && j < level.size(); ++j) {
      const auto& c = r.conclusions[j];
      const CoverWitness* w = witness_for(*b.db, r.witnesses, c.v);
      const bool ok = c.v == level[j] && w && w->element == c.cover_element && w->u == c.u &&
                      seq_leq(c.v, c.u) && bar(c.u) && bar(c.v);
      note(s, ok,
           seq_name(c.v) + " below " +
               (c.cover_element >= 0 ? elem(*b.db, c.cover_element) : std::string("nothing")) +
               ", u = " + seq_name(c.u) + " is an initial segment in the bar");
    }
  }
  {
    auto& s = stage(t, "minimal point");
    for (const auto& c : r.conclusions)
      check_minimal_point(s, b, bar, c.v, c.point, &c.point_witness);
  }
  {
    auto& s = stage(t, "output");
    const int ud = uniform_depth(bar);
    note(s, ud == r.uniform_depth && ud >= 0 && r.n >= ud,
         "n = " + std::to_string(r.n) + ", least uniform depth " + std::to_string(ud));
    const bool all = std::all_of(level.begin(), level.end(), [&](const FinSeq& v) { return bar(v); });
    note(s, all, "every v in <>[" + std::to_string(r.n) + "] is in the bar");
  }
  return t;
}

// ---------------------------------------------------------------------------

BarResult bar_rule(const Bar& bar) {
  if (!bar.monotone()) throw NotMonotone("bar induction needs a bar declared monotone");
  if (!bar.inductive()) throw NotInductive("bar induction needs a bar declared inductive");
  const TruncatedSpace& sp = *bar.space();
  const BarModel b = bar_model(bar);
  require_premise(b, bar);

  BarResult r;
  r.instance = explain_instance(b);
  r.witnesses = cover_witnesses(*b.m, r.instance);
  const Sieve s = d_part(*b.db, r.instance.cover);
  for (int g : s.generators()) {
    r.cover.push_back(sp.seq(g));
    r.point_checks.emplace_back(sp.seq(g), point_through(*b.db, sp.seq(g)));
  }
  const int root = sp.index({});
  r.induction = cover_induction(sp.covering_system(), [&](int x) { return bar.at(x); }, root, s,
                                sp.topology()->default_fuel());
  r.holds_at_root = bar.at(root);
  r.transcript = recheck_bar(bar, r);
  return r;
}

Transcript recheck_bar(const Bar& bar, const BarResult& r) {
  const TruncatedSpace& sp = *bar.space();
  const BarModel b = bar_model(bar);
  const int root = sp.index({});
  Transcript t;
  check_extraction(t, b, r.instance, r.witnesses);
  const Sieve s = sp.sieve({}, r.cover);
  {
    auto& st = stage(t, "cover");
    note(st, s == d_part(*b.db, r.instance.cover), "S is the D-part of the extracted cover");
    note(st, sp.topology()->covers(root, s), "S covers <>");
    for (int y : s.member_list())
      if (!bar.at(y)) note(st, false, "InBar fails on " + seq_name(sp.seq(y)));
    note(st, true, std::to_string(s.member_list().size()) + " members, all in the bar");
  }
  {
    auto& st = stage(t, "minimal point");
    for (const auto& [g, k] : r.point_checks) check_minimal_point(st, b, bar, g, k, nullptr);
  }
  {
    auto& st = stage(t, "induction");
    const bool ok = r.induction.target == root &&
                    check_induction_transcript(sp.covering_system(),
                                               [&](int x) { return bar.at(x); }, s, r.induction);
    note(st, ok, std::to_string(r.induction.steps.size()) + " steps up to <>");
  }
  {
    auto& st = stage(t, "conclusion");
    note(st, r.holds_at_root && bar(FinSeq{}), "InBar(<>)");
    note(st, inductive_closure_contains_root(bar), "the inductive closure contains <>");
  }
  return t;
}

bool inductive_closure_contains_root(const Bar& bar) {
  const TruncatedSpace& sp = *bar.space();
  Mask in(sp.size(), false);
  // Children are numbered after their parents.
  for (int i = sp.size() - 1; i >= 0; --i) {
    bool all = static_cast<int>(sp.seq(i).size()) < sp.depth();
    for (int n = 0; all && n < sp.branch(); ++n) all = in[sp.child(i, n)];
    in[i] = bar.at(i) || all;
  }
  return in[sp.index({})];
}

// ---------------------------------------------------------------------------

namespace {

struct ContinuityModel {
  int branch = 2, out_length = 0, depth = 0;
  Sort sort = Sort::Seq2;
  SpacePtr sp;
  DoublePtr db;
  std::shared_ptr<ForcingModel> m;
  Formula unique, exists, holds;
  int top = 0;
  std::vector<Point> points;
  std::vector<FinSeq> table;  // the unique β for each point
};

ContinuityModel continuity_model(const RelationTable& rel, const ContinuityOptions& opt) {
  ContinuityModel c;
  c.branch = rel.branch;
  c.out_length = rel.out_length;
  c.depth = opt.inner_depth > 0 ? opt.inner_depth : rel.out_length + 1;
  if (opt.kind == SpaceKind::Cantor && rel.branch != 2)
    throw InputError("a Cantor space has branching 2");
  if (c.out_length < 0 || c.out_length > c.depth)
    throw InputError("output length must lie between 0 and the inner depth");
  c.sort = seq_sort(rel.branch);
  c.points = all_points(rel.branch, c.depth);

  const ValueDomain outs = ValueDomain::seq(rel.branch, rel.out_length);
  for (const Point& a : c.points) {
    std::vector<FinSeq> hits;
    for (int v = 0; v < outs.size(); ++v) {
      FinSeq beta = outs.decode(v);
      if (rel.phi(a, beta)) hits.push_back(std::move(beta));
    }
    if (hits.empty()) throw NotForced("no output satisfies the relation at " + a.name());
    if (hits.size() > 1)
      throw NotUnique("both " + seq_name(hits[0]) + " and " + seq_name(hits[1]) +
                      " satisfy the relation at " + a.name());
    c.table.push_back(std::move(hits[0]));
  }

  std::map<FinSeq, std::size_t> first;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const FinSeq key = prefix_of(c.points[i], c.depth);
    auto [it, fresh] = first.emplace(key, i);
    if (!fresh && c.table[it->second] != c.table[i])
      throw NoModulus(c.points[it->second].name() + " and " + c.points[i].name() + " agree on " +
                      seq_name(key) + " but give " + seq_name(c.table[it->second]) + " and " +
                      seq_name(c.table[i]));
  }
  std::map<FinSeq, FinSeq> padded;
  for (const auto& [key, i] : first) {
    FinSeq b = c.table[i];
    b.resize(c.depth, 0);
    padded.emplace(key, std::move(b));
  }

  c.sp = TruncatedSpace::make(opt.kind, rel.branch, c.depth);
  c.db = DoubleSpace::make(c.sp, c.points);
  c.m = ForcingModel::on_double(c.db);
  c.m->add_relation("Phi", {c.sort, c.sort}, [padded](const std::vector<Datum>& a) {
    auto it = padded.find(a[0].s);
    return it != padded.end() && it->second == a[1].s;
  });
  Signature sig = c.m->signature();
  const std::string s = sort_name(c.sort);
  c.unique = parse_formula(
      "exists b:" + s + ". Phi(pi,b) & (forall c:" + s + ". Phi(pi,c) -> Eq(c,b))", sig);
  c.exists = parse_formula("exists b:" + s + ". Phi(pi,b)", sig);
  sig.constants["r"] = c.sort;
  c.holds = parse_formula("Phi(pi,r)", sig);
  c.top = c.db->d({});
  return c;
}

// The witness section at each element of the instance's cover.
std::vector<Value> instance_witnesses(const ContinuityModel& c, const ForcingDerivation& d) {
  std::vector<Value> out;
  for (std::size_t i = 0; i < d.cover.size(); ++i) {
    const auto dom = c.m->domain(c.sort, d.cover[i]);
    const int k = d.premises.at(i).choice;
    if (k < 0 || k >= static_cast<int>(dom.size())) throw InputError("witness out of range");
    out.push_back(dom[k]);
  }
  return out;
}

Section amalgamate(const ContinuityModel& c, const ForcingDerivation& d) {
  const std::vector<Value> ws = instance_witnesses(c, d);
  const Basis& basis = *c.db->basis();
  const std::vector<int> family = cc_refine(*c.db, Sieve(c.db->basis(), c.top, d.cover));
  std::vector<Section> local;
  for (int a : family) {
    std::size_t i = 0;
    while (!basis.leq(a, d.cover[i])) ++i;
    local.push_back(c.m->restrict(ws[i], a).section);
  }
  return choice_amalgamation(c.m->sequences(c.sort), c.top, family, local);
}

ContinuousMap extracted_map(const ContinuityModel& c, const Section& rho) {
  const ContinuousMap to_seq =
      section_to_sequence_map(c.m->sequences(c.sort), c.top, rho, *c.sp);
  return compose(to_seq, canonical_maps(*c.db).mu);
}

std::optional<FinSeq> read_output(const ContinuityModel& c, const ContinuousMap& f,
                                  const Point& a) {
  const Mask img = pt_functor(f, point_mask(*c.sp, a));
  std::optional<FinSeq> out;
  for (int w = 0; w < c.sp->size(); ++w) {
    if (!img[w] || static_cast<int>(c.sp->seq(w).size()) != c.depth) continue;
    if (out) return std::nullopt;
    out = take(c.sp->seq(w), c.out_length);
  }
  return out;
}

bool modulus_valid(const ContinuityModel& c, const std::vector<FinSeq>& f, std::size_t i, int k,
                   int m) {
  const FinSeq head = prefix_of(c.points[i], m);
  for (std::size_t j = 0; j < c.points.size(); ++j)
    if (prefix_of(c.points[j], m) == head && take(f[j], k) != take(f[i], k)) return false;
  return true;
}

}  // namespace

ContinuityResult continuity_rule(const RelationTable& rel, const ContinuityOptions& opt) {
  const ContinuityModel c = continuity_model(rel, opt);
  if (!force(*c.m, c.top, c.unique).holds()) {
    if (force(*c.m, c.top, c.exists).holds())
      throw NotUnique("D<> forces existence but not uniqueness of the output");
    throw NotForced("D<> does not force " + to_string(c.unique));
  }
  ContinuityResult r;
  r.inner_depth = c.depth;
  r.points = c.points;
  auto d = explain(*c.m, c.top, c.unique);
  if (!d) throw NotForced("no derivation of " + to_string(c.unique));
  r.instance = std::move(*d);
  r.rho = amalgamate(c, r.instance);

  const ContinuousMap f = extracted_map(c, r.rho);
  for (const Point& a : c.points) {
    auto out = read_output(c, f, a);
    if (!out) throw NoModulus("the extracted map has no single value at " + a.name());
    r.f.push_back(std::move(*out));
  }
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    std::vector<int> mods;
    for (int k = 0; k <= c.out_length; ++k) {
      const int target = c.sp->index(take(r.f[i], k));
      int m = 0;
      while (m <= c.depth && !f(c.sp->index(prefix_of(c.points[i], m)), target)) ++m;
      if (m > c.depth)
        throw NoModulus("no initial segment of " + c.points[i].name() + " determines " +
                        seq_name(take(r.f[i], k)));
      mods.push_back(m);
    }
    r.modulus.push_back(std::move(mods));
  }
  r.transcript = recheck_continuity(rel, opt, r);
  return r;
}

Transcript recheck_continuity(const RelationTable& rel, const ContinuityOptions& opt,
                              const ContinuityResult& r) {
  const ContinuityModel c = continuity_model(rel, opt);
  Transcript t;
  {
    auto& s = stage(t, "table");
    note(s, r.inner_depth == c.depth && r.points == c.points,
         std::to_string(c.points.size()) + " points, inner depth " + std::to_string(c.depth) +
             ", one output each");
  }
  {
    auto& s = stage(t, "premise");
    note(s, force(*c.m, c.top, c.unique).holds(), "D<> forces " + to_string(c.unique));
  }
  {
    auto& s = stage(t, "instance");
    std::string why;
    const bool ok =
        r.instance.stage == c.top && check_forcing_derivation(*c.m, c.unique, {}, r.instance, &why);
    note(s, ok,
         "derivation at D<>, " + std::to_string(r.instance.size()) + " nodes" +
             (why.empty() ? "" : ": " + why));
  }
  {
    auto& s = stage(t, "section");
    const auto& seq = c.m->sequences(c.sort);
    const std::vector<Value> ws = instance_witnesses(c, r.instance);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const int g = r.instance.cover[i];
      note(s, seq.restrict(c.top, r.rho, g) == ws[i].section,
           "rho at " + elem(*c.db, g) + " is " + seq.show(g, ws[i].section));
    }
    note(s, amalgamate(c, r.instance) == r.rho, "rho = " + seq.show(c.top, r.rho));
    Value v;
    v.sort = c.sort;
    v.section = r.rho;
    v.stage = c.top;
    note(s, force(*c.m, c.top, c.holds, Env{{"r", v}}).holds(), "D<> forces Phi(pi, rho)");
  }
  {
    auto& s = stage(t, "extraction");
    const ContinuousMap f = extracted_map(c, r.rho);
    const bool sized = r.f.size() == c.points.size();
    note(s, sized, std::to_string(r.f.size()) + " values of pt(rho . mu)");
    for (std::size_t i = 0; sized && i < c.points.size(); ++i) {
      const auto out = read_output(c, f, c.points[i]);
      const bool ok = out && *out == r.f[i] && r.f[i] == c.table[i] && rel.phi(c.points[i], r.f[i]);
      note(s, ok, "f(" + c.points[i].name() + ") = " + seq_name(r.f[i]));
    }
  }
  {
    auto& s = stage(t, "modulus");
    const ContinuousMap f = extracted_map(c, r.rho);
    const bool sized = r.modulus.size() == c.points.size() && r.f.size() == c.points.size();
    note(s, sized, "moduli for k = 0.." + std::to_string(c.out_length));
    for (std::size_t i = 0; sized && i < c.points.size(); ++i) {
      bool ok = static_cast<int>(r.modulus[i].size()) == c.out_length + 1;
      std::string ms;
      for (int k = 0; ok && k <= c.out_length; ++k) {
        const int m = r.modulus[i][k];
        ok = m >= 0 && m <= c.depth &&
             f(c.sp->index(prefix_of(c.points[i], m)), c.sp->index(take(r.f[i], k))) &&
             modulus_valid(c, r.f, i, k, m);
        ms += (k ? "," : "") + std::to_string(m);
      }
      note(s, ok, c.points[i].name() + ": " + ms);
    }
  }
  return t;
}

}  // namespace ftop
