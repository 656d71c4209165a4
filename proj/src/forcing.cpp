#include "ftop/forcing.hpp"

#include <algorithm>
#include <sstream>

#include "ftop/errors.hpp"

namespace ftop {

// ---------------------------------------------------------------------------
// Model

ForcingModel::ForcingModel(SpacePtr inner, std::shared_ptr<const DoubleSpace> db, ModelOptions opt)
    : inner_(std::move(inner)), double_(std::move(db)), opt_(opt) {
  if (opt_.nat_max < 1) throw InputError("nat_max must be positive");
  if (opt_.finseq_length < 0) opt_.finseq_length = inner_->depth();
  topology_ = double_ ? double_->topology() : inner_->topology();
  top_ = double_ ? double_->d({}) : inner_->index({});
  const int depth = inner_->depth();
  seq2_ = std::make_unique<LocallyConstantSheaf>(topology_, ValueDomain::seq(2, depth));
  seqn_ = std::make_unique<LocallyConstantSheaf>(topology_,
                                                 ValueDomain::seq(inner_->branch(), depth));
  ValueDomain lists = ValueDomain::finseq(inner_->branch(), opt_.finseq_length);
  for (int v = 0; v < lists.size(); ++v) lists_.push_back(lists.decode(v));
  if (topology_->has_smallest_cover())
    for (int p = 0; p < topology_->size(); ++p)
      min_members_.push_back(topology_->smallest_cover(p).member_list());
}

std::shared_ptr<ForcingModel> ForcingModel::on_space(SpacePtr space, ModelOptions opt) {
  return std::shared_ptr<ForcingModel>(new ForcingModel(std::move(space), nullptr, opt));
}

std::shared_ptr<ForcingModel> ForcingModel::on_double(std::shared_ptr<const DoubleSpace> db,
                                                      ModelOptions opt) {
  auto m = std::shared_ptr<ForcingModel>(new ForcingModel(db->inner(), db, opt));
  m->add_constant("pi", m->pi());
  return m;
}

const LocallyConstantSheaf& ForcingModel::sequences(Sort s) const {
  if (s == Sort::Seq2) return *seq2_;
  if (s == Sort::SeqN) return *seqn_;
  throw UnsupportedSort(sort_name(s) + " has no sequence sheaf");
}

Value ForcingModel::pi() const {
  if (!double_) throw InputError("pi needs a double");
  const Sort s = inner_->branch() == 2 ? Sort::Seq2 : Sort::SeqN;
  const LocallyConstantSheaf& x = sequences(s);
  Value v;
  v.sort = s;
  v.stage = top_;
  v.section.resize(x.pieces(top_));
  for (int k = 0; k < x.pieces(top_); ++k) {
    const auto& members = x.piece_members(top_)[k];
    FinSeq w;
    auto d = std::find_if(members.begin(), members.end(), [&](int e) { return double_->is_d(e); });
    if (d != members.end()) {
      w = inner_->seq(double_->inner_index(*d));
    } else {
      const Point& pt = double_->points()[double_->point_index(members.front())];
      for (int i = 0; i < inner_->depth(); ++i) w.push_back(pt.at(i));
    }
    if (static_cast<int>(w.size()) != inner_->depth())
      throw InputError("smallest cover of the top is not at leaf depth");
    v.section[k] = x.domain().encode(w);
  }
  return v;
}

void ForcingModel::add_constant(const std::string& name, Value v) {
  if (is_sequence_sort(v.sort)) {
    if (v.stage != top_) throw InputError("sequence constant " + name + " must live at the top");
    if (v.section.size() != static_cast<std::size_t>(sequences(v.sort).pieces(top_)))
      throw InputError("sequence constant " + name + " has the wrong shape");
  }
  constants_[name] = std::move(v);
}

void ForcingModel::add_relation(const std::string& name, std::vector<Sort> args, Relation r) {
  if (name == "Eq" || name == "Leq" || name == "Prefix" || name == "App")
    throw InputError(name + " is builtin");
  relations_[name] = {std::move(args), std::move(r)};
}

void ForcingModel::add_bar(const std::string& name, const Bar& bar) {
  add_relation(name, {Sort::FinSeq},
               [bar](const std::vector<Datum>& a) { return bar(a[0].s); });
}

Signature ForcingModel::signature() const {
  Signature sig;
  for (const auto& [name, v] : constants_) sig.constants[name] = v.sort;
  for (const auto& [name, r] : relations_) sig.relations[name] = r.first;
  return sig;
}

bool ForcingModel::relation_holds(const std::string& name, const std::vector<Datum>& args) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw InputError("unknown predicate " + name);
  return it->second.second(args);
}

std::vector<Value> ForcingModel::domain(Sort s, int p) const {
  std::vector<Value> out;
  if (s == Sort::Nat) {
    for (int i = 0; i < opt_.nat_max; ++i) out.push_back(Value{s, Datum{s, i, {}}, {}, p});
    return out;
  }
  if (s == Sort::FinSeq) {
    for (const FinSeq& u : lists_) out.push_back(Value{s, Datum{s, 0, u}, {}, p});
    return out;
  }
  const LocallyConstantSheaf& x = sequences(s);
  for (const auto& [name, c] : constants_)
    if (c.sort == s) out.push_back(restrict(c, p));
  for (int v = 0; v < x.domain().size(); ++v) out.push_back(Value{s, {}, x.pure(p, v), p});
  std::vector<Value> unique;
  for (Value& v : out)
    if (std::none_of(unique.begin(), unique.end(),
                     [&](const Value& u) { return u.section == v.section; }))
      unique.push_back(std::move(v));
  return unique;
}

Value ForcingModel::restrict(const Value& v, int q) const {
  Value r = v;
  if (is_sequence_sort(v.sort)) {
    if (!topology_->basis()->leq(q, v.stage))
      throw NotBelowRoot(topology_->basis()->name(q) + " is not below the stage " +
                         topology_->basis()->name(v.stage));
    r.section = sequences(v.sort).restrict(v.stage, v.section, q);
  }
  r.stage = q;
  return r;
}

std::string ForcingModel::show(const Value& v) const {
  switch (v.sort) {
    case Sort::Nat: return std::to_string(v.pure.n);
    case Sort::FinSeq: return seq_name(v.pure.s);
    default: return sequences(v.sort).show(v.stage, v.section);
  }
}

bool atom_holds(const ForcingModel& m, const std::string& name, const std::vector<Datum>& a) {
  if (name == "Eq") return a[0] == a[1];
  if (name == "Leq") return a[0].sort == Sort::Nat ? a[0].n <= a[1].n : seq_leq(a[0].s, a[1].s);
  if (name == "Prefix") return seq_leq(a[0].s, a[1].s);
  if (name == "App") {
    const int n = a[1].n;
    return n >= 0 && n < static_cast<int>(a[0].s.size()) && a[0].s[n] == a[2].n;
  }
  return m.relation_holds(name, a);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// Bound variables and constants, all at the same stage.
struct Context {
  int stage;
  std::vector<Value> slots;
  std::map<std::string, Value> consts;

  Context restricted(const ForcingModel& m, int q) const {
    Context c{q, {}, {}};
    for (const Value& v : slots) c.slots.push_back(m.restrict(v, q));
    for (const auto& [k, v] : consts) c.consts.emplace(k, m.restrict(v, q));
    return c;
  }
};

void check_constants(const Formula& f, const Context& ctx) {
  std::function<void(const Term&)> term = [&](const Term& t) {
    if (t.kind == Term::Kind::Const) {
      auto it = ctx.consts.find(t.name);
      if (it == ctx.consts.end()) throw SortError(t.pos, "no value for '" + t.name + "'");
      if (it->second.sort != t.sort)
        throw SortError(t.pos, "'" + t.name + "' has sort " + sort_name(it->second.sort));
    }
    for (const Term& a : t.args) term(a);
  };
  for (const Term& t : f.args) term(t);
  for (const Formula& s : f.sub) check_constants(s, ctx);
}

Context root_context(const ForcingModel& m, int p, const Formula& f, const Env& env) {
  m.topology()->basis()->check(p);
  Context ctx{p, {}, {}};
  for (const auto& [k, v] : m.constants()) ctx.consts[k] = m.restrict(v, p);
  for (const auto& [k, v] : env) {
    if (is_sequence_sort(v.sort) && (v.stage < 0 || !m.topology()->basis()->leq(p, v.stage)))
      throw NotBelowRoot("value of " + k + " does not live above " + m.topology()->basis()->name(p));
    ctx.consts[k] = m.restrict(v, p);
  }
  check_constants(f, ctx);
  return ctx;
}

class Evaluator {
 public:
  Evaluator(const ForcingModel& m, int fuel)
      : m_(m), basis_(*m.topology()->basis()), fuel_(fuel < 0 ? m.topology()->default_fuel() : fuel) {
    fast_ = !m.smallest_cover_members().empty() && fuel_ >= m.topology()->default_fuel();
  }

  bool exhausted = false;

  // Largest down-closed subset.
  Mask interior(const Mask& set) const {
    Mask out(set.size(), false);
    for (int v = 0; v < basis_.size(); ++v) {
      if (!set[v]) continue;
      const Mask& d = basis_.down(v);
      bool inside = true;
      for (int w = 0; w < basis_.size() && inside; ++w)
        if (d[w] && !set[w]) inside = false;
      out[v] = inside;
    }
    return out;
  }

  bool covers(int p, const Mask& set) {
    CoverResult r = m_.topology()->cover(p, Sieve::interior(m_.topology()->basis(), p, set), fuel_);
    if (!r.covered() && r.exhausted) exhausted = true;
    return r.covered();
  }

  // Pure data of a term at r <= stage, or nullopt where a sequence value is
  // not pure.
  std::optional<Datum> term(const Term& t, const Context& ctx, int r) const {
    switch (t.kind) {
      case Term::Kind::Num: return Datum{Sort::Nat, t.num, {}};
      case Term::Kind::SeqLit: return Datum{Sort::FinSeq, 0, t.seq};
      case Term::Kind::Add: {
        auto a = term(t.args[0], ctx, r), b = term(t.args[1], ctx, r);
        if (!a || !b) return std::nullopt;
        return Datum{Sort::Nat, a->n + b->n, {}};
      }
      case Term::Kind::Len: {
        auto a = term(t.args[0], ctx, r);
        if (!a) return std::nullopt;
        return Datum{Sort::Nat, static_cast<int>(a->s.size()), {}};
      }
      case Term::Kind::Var:
      case Term::Kind::Const: {
        const Value& v = t.kind == Term::Kind::Var ? ctx.slots.at(t.slot) : ctx.consts.at(t.name);
        if (!is_sequence_sort(v.sort)) return v.pure;
        const LocallyConstantSheaf& x = m_.sequences(v.sort);
        const int w = x.value_at(ctx.stage, v.section, r);
        if (w < 0) return std::nullopt;
        return Datum{v.sort, 0, x.domain().decode(w)};
      }
    }
    return std::nullopt;
  }

  bool atom_at(const Formula& f, const Context& ctx, int r) const {
    std::vector<Datum> data;
    for (const Term& t : f.args) {
      auto d = term(t, ctx, r);
      if (!d) return false;
      data.push_back(std::move(*d));
    }
    return atom_holds(m_, f.name, data);
  }

  // Elements where the atom holds on pure data.
  Mask atom_set(const Formula& f, const Context& ctx) const {
    Mask r(basis_.size(), false);
    for (int q : basis_.below(ctx.stage)) r[q] = atom_at(f, ctx, q);
    return r;
  }

  Mask covered_part(const Context& ctx, const Mask& set) {
    Mask out(basis_.size(), false);
    if (fast_) {
      const Mask inner = interior(set);
      const auto& min = m_.smallest_cover_members();
      for (int p : basis_.below(ctx.stage))
        out[p] = std::all_of(min[p].begin(), min[p].end(), [&](int v) { return inner[v]; });
      return out;
    }
    for (int p : basis_.below(ctx.stage)) out[p] = covers(p, set);
    return out;
  }

  Mask eval(const Formula& f, Context& ctx) {
    const int n = basis_.size();
    const std::vector<int> below = basis_.below(ctx.stage);
    switch (f.kind) {
      case Formula::Kind::Bot: return covered_part(ctx, Mask(n, false));
      case Formula::Kind::Atom: return covered_part(ctx, atom_set(f, ctx));
      case Formula::Kind::And: {
        Mask a = eval(f.sub[0], ctx), b = eval(f.sub[1], ctx);
        for (int v = 0; v < n; ++v) a[v] = a[v] && b[v];
        return a;
      }
      case Formula::Kind::Or: {
        Mask a = eval(f.sub[0], ctx), b = eval(f.sub[1], ctx);
        for (int v = 0; v < n; ++v) a[v] = a[v] || b[v];
        return covered_part(ctx, a);
      }
      case Formula::Kind::Imp: {
        Mask a = eval(f.sub[0], ctx), b = eval(f.sub[1], ctx);
        Mask out(n, false);
        for (int p : below) {
          bool ok = true;
          for (int q : below)
            if (basis_.leq(q, p) && a[q] && !b[q]) ok = false;
          out[p] = ok;
        }
        return out;
      }
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        const bool ex = f.kind == Formula::Kind::Exists;
        Mask acc(n, !ex);
        for (Value& x : m_.domain(f.sort, ctx.stage)) {
          ctx.slots.push_back(std::move(x));
          Mask body = eval(f.sub[0], ctx);
          ctx.slots.pop_back();
          for (int v = 0; v < n; ++v) acc[v] = ex ? acc[v] || body[v] : acc[v] && body[v];
        }
        if (ex) return covered_part(ctx, acc);
        Mask out(n, false);
        for (int p : below) {
          bool ok = true;
          for (int q : below)
            if (basis_.leq(q, p) && !acc[q]) ok = false;
          out[p] = ok;
        }
        return out;
      }
    }
    return Mask(n, false);
  }

  const ForcingModel& m_;
  const Basis& basis_;
  int fuel_;
  bool fast_ = false;
};

std::string describe(const ForcingModel& m, const Formula& f, const Context& ctx) {
  std::string s = to_string(f);
  if (ctx.slots.empty()) return s;
  s += "  [";
  for (std::size_t i = 0; i < ctx.slots.size(); ++i)
    s += (i ? ", " : "") + std::string("#") + std::to_string(i) + " = " + m.show(ctx.slots[i]);
  return s + "]";
}

int index_in(const std::vector<Value>& dom, const Value& v) {
  for (std::size_t i = 0; i < dom.size(); ++i)
    if (dom[i].pure == v.pure && dom[i].section == v.section) return static_cast<int>(i);
  return -1;
}

class Explainer {
 public:
  Explainer(const ForcingModel& m, int fuel, std::size_t max_nodes)
      : m_(m), ev_(m, fuel), basis_(*m.topology()->basis()), max_nodes_(max_nodes) {}

  ForcingDerivation run(const Formula& f, Context& ctx) {
    if (++nodes_ > max_nodes_)
      throw DepthExceeded("derivation exceeds " + std::to_string(max_nodes_) + " nodes");
    const int p = ctx.stage;
    ForcingDerivation d;
    d.stage = p;
    d.formula = describe(m_, f, ctx);
    auto gens = [&](const Mask& set) {
      return Sieve::interior(m_.topology()->basis(), p, set).generators();
    };
    switch (f.kind) {
      case Formula::Kind::Bot:
        d.clause = "bot";
        break;
      case Formula::Kind::Atom:
        d.clause = "atom";
        d.cover = gens(ev_.atom_set(f, ctx));
        break;
      case Formula::Kind::And:
        d.clause = "and";
        d.premises.push_back(run(f.sub[0], ctx));
        d.premises.push_back(run(f.sub[1], ctx));
        break;
      case Formula::Kind::Or: {
        d.clause = "or";
        Mask a = ev_.eval(f.sub[0], ctx), b = ev_.eval(f.sub[1], ctx);
        Mask u(a.size());
        for (std::size_t v = 0; v < u.size(); ++v) u[v] = a[v] || b[v];
        d.cover = gens(u);
        for (int g : d.cover) {
          Context c = ctx.restricted(m_, g);
          const int side = a[g] ? 0 : 1;
          ForcingDerivation pr = run(f.sub[side], c);
          pr.choice = side;
          pr.note = side == 0 ? "left" : "right";
          d.premises.push_back(std::move(pr));
        }
        break;
      }
      case Formula::Kind::Imp: {
        d.clause = "imp";
        Mask a = ev_.eval(f.sub[0], ctx);
        for (int q : basis_.below(p)) {
          if (!a[q]) continue;
          Context c = ctx.restricted(m_, q);
          d.premises.push_back(run(f.sub[1], c));
        }
        break;
      }
      case Formula::Kind::Exists: {
        d.clause = "exists";
        const std::vector<Value> dom = m_.domain(f.sort, p);
        std::vector<Mask> inst;
        Mask e(basis_.size(), false);
        for (const Value& x : dom) {
          ctx.slots.push_back(x);
          inst.push_back(ev_.eval(f.sub[0], ctx));
          ctx.slots.pop_back();
          for (int v = 0; v < basis_.size(); ++v) e[v] = e[v] || inst.back()[v];
        }
        d.cover = gens(e);
        for (int g : d.cover) {
          std::size_t i = 0;
          while (!inst[i][g]) ++i;
          Context c = ctx.restricted(m_, g);
          Value w = m_.restrict(dom[i], g);
          const int at_g = index_in(m_.domain(f.sort, g), w);
          c.slots.push_back(w);
          ForcingDerivation pr = run(f.sub[0], c);
          pr.choice = at_g;
          pr.note = f.name + " = " + m_.show(w);
          d.premises.push_back(std::move(pr));
        }
        break;
      }
      case Formula::Kind::Forall: {
        d.clause = "forall";
        for (int q : basis_.below(p)) {
          Context c = ctx.restricted(m_, q);
          const std::vector<Value> dom = m_.domain(f.sort, q);
          for (std::size_t i = 0; i < dom.size(); ++i) {
            c.slots.push_back(dom[i]);
            ForcingDerivation pr = run(f.sub[0], c);
            c.slots.pop_back();
            pr.choice = static_cast<int>(i);
            pr.note = f.name + " = " + m_.show(dom[i]);
            d.premises.push_back(std::move(pr));
          }
        }
        break;
      }
    }
    return d;
  }

 private:
  const ForcingModel& m_;
  Evaluator ev_;
  const Basis& basis_;
  std::size_t max_nodes_;
  std::size_t nodes_ = 0;
};

class Checker {
 public:
  Checker(const ForcingModel& m, int fuel) : m_(m), ev_(m, fuel), basis_(*m.topology()->basis()) {}

  std::string why;

  bool fail(const ForcingDerivation& d, const std::string& msg) {
    if (why.empty()) why = msg + " at " + basis_.name(d.stage) + " for " + d.formula;
    return false;
  }

  bool covering(const ForcingDerivation& d) {
    Mask gen(basis_.size(), false);
    for (int g : d.cover) {
      if (g < 0 || g >= basis_.size() || !basis_.leq(g, d.stage)) return fail(d, "cover element not below stage");
      gen[g] = true;
    }
    Sieve s = Sieve::generated(m_.topology()->basis(), d.stage, gen);
    if (!m_.topology()->covers(d.stage, s)) return fail(d, "not a cover: " + s.to_string());
    return true;
  }

  bool check(const Formula& f, Context& ctx, const ForcingDerivation& d) {
    static const char* names[] = {"bot", "atom", "and", "or", "imp", "exists", "forall"};
    if (d.stage != ctx.stage) return fail(d, "stage mismatch");
    if (d.clause != names[static_cast<int>(f.kind)]) return fail(d, "clause mismatch");
    switch (f.kind) {
      case Formula::Kind::Bot:
        return d.cover.empty() && covering(d);
      case Formula::Kind::Atom:
        if (!covering(d)) return false;
        for (int g : d.cover)
          if (!ev_.atom_at(f, ctx, g)) return fail(d, "atom false at " + basis_.name(g));
        return true;
      case Formula::Kind::And:
        if (d.premises.size() != 2) return fail(d, "conjunction needs two premises");
        return check(f.sub[0], ctx, d.premises[0]) && check(f.sub[1], ctx, d.premises[1]);
      case Formula::Kind::Or:
      case Formula::Kind::Exists: {
        if (!covering(d)) return false;
        if (d.premises.size() != d.cover.size()) return fail(d, "one premise per cover element");
        for (std::size_t i = 0; i < d.cover.size(); ++i) {
          const ForcingDerivation& pr = d.premises[i];
          if (pr.stage != d.cover[i]) return fail(d, "premise at the wrong stage");
          Context c = ctx.restricted(m_, d.cover[i]);
          if (f.kind == Formula::Kind::Or) {
            if (pr.choice != 0 && pr.choice != 1) return fail(d, "no disjunct chosen");
            if (!check(f.sub[pr.choice], c, pr)) return false;
          } else {
            const std::vector<Value> dom = m_.domain(f.sort, d.cover[i]);
            if (pr.choice < 0 || pr.choice >= static_cast<int>(dom.size()))
              return fail(d, "witness outside the domain");
            c.slots.push_back(dom[pr.choice]);
            if (!check(f.sub[0], c, pr)) return false;
          }
        }
        return true;
      }
      case Formula::Kind::Imp: {
        Mask a = ev_.eval(f.sub[0], ctx);
        std::size_t k = 0;
        for (int q : basis_.below(ctx.stage)) {
          if (!a[q]) continue;
          if (k >= d.premises.size()) return fail(d, "missing premise for " + basis_.name(q));
          Context c = ctx.restricted(m_, q);
          if (!check(f.sub[1], c, d.premises[k++])) return false;
        }
        if (k != d.premises.size()) return fail(d, "extra premises");
        return true;
      }
      case Formula::Kind::Forall: {
        std::size_t k = 0;
        for (int q : basis_.below(ctx.stage)) {
          Context c = ctx.restricted(m_, q);
          const std::vector<Value> dom = m_.domain(f.sort, q);
          for (std::size_t i = 0; i < dom.size(); ++i) {
            if (k >= d.premises.size()) return fail(d, "missing premise");
            const ForcingDerivation& pr = d.premises[k++];
            if (pr.choice != static_cast<int>(i)) return fail(d, "premise out of order");
            c.slots.push_back(dom[i]);
            const bool ok = check(f.sub[0], c, pr);
            c.slots.pop_back();
            if (!ok) return false;
          }
        }
        if (k != d.premises.size()) return fail(d, "extra premises");
        return true;
      }
    }
    return false;
  }

 private:
  const ForcingModel& m_;
  Evaluator ev_;
  const Basis& basis_;
};

}  // namespace

std::size_t ForcingDerivation::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

Mask forced_set(const ForcingModel& m, int p, const Formula& f, const Env& env, int fuel) {
  Context ctx = root_context(m, p, f, env);
  Evaluator ev(m, fuel);
  return ev.eval(f, ctx);
}

ForceResult force(const ForcingModel& m, int p, const Formula& f, const Env& env, int fuel) {
  Context ctx = root_context(m, p, f, env);
  Evaluator ev(m, fuel);
  Mask s = ev.eval(f, ctx);
  ForceResult r;
  r.status = s[p] ? ForceStatus::Holds : ForceStatus::FailsWithinFuel;
  r.exhausted = ev.exhausted;
  return r;
}

std::optional<ForcingDerivation> explain(const ForcingModel& m, int p, const Formula& f,
                                         const Env& env, int fuel, std::size_t max_nodes) {
  Context ctx = root_context(m, p, f, env);
  Evaluator ev(m, fuel);
  if (!ev.eval(f, ctx)[p]) return std::nullopt;
  Explainer ex(m, fuel, max_nodes);
  return ex.run(f, ctx);
}

bool check_forcing_derivation(const ForcingModel& m, const Formula& f, const Env& env,
                              const ForcingDerivation& d, std::string* why, int fuel) {
  Context ctx = root_context(m, d.stage, f, env);
  Checker c(m, fuel);
  const bool ok = c.check(f, ctx, d);
  if (why) *why = c.why;
  return ok;
}

namespace {

class Classical {
 public:
  Classical(const ForcingModel& m, int element) : m_(m), e_(element) {}

  Datum read(const Value& v) const {
    if (!is_sequence_sort(v.sort)) return v.pure;
    const LocallyConstantSheaf& x = m_.sequences(v.sort);
    const int w = x.value_at(v.stage, v.section, e_);
    if (w < 0) throw InputError("sequence value is not pure at a singleton");
    return Datum{v.sort, 0, x.domain().decode(w)};
  }

  Datum term(const Term& t) const {
    switch (t.kind) {
      case Term::Kind::Num: return Datum{Sort::Nat, t.num, {}};
      case Term::Kind::SeqLit: return Datum{Sort::FinSeq, 0, t.seq};
      case Term::Kind::Add: return Datum{Sort::Nat, term(t.args[0]).n + term(t.args[1]).n, {}};
      case Term::Kind::Len: return Datum{Sort::Nat, static_cast<int>(term(t.args[0]).s.size()), {}};
      case Term::Kind::Var: return slots_.at(t.slot);
      case Term::Kind::Const: return consts_.at(t.name);
    }
    return {};
  }

  std::vector<Datum> domain(Sort s) const {
    std::vector<Datum> out;
    if (!is_sequence_sort(s)) {
      for (const Value& v : m_.domain(s, e_)) out.push_back(v.pure);
      return out;
    }
    const ValueDomain& d = m_.sequences(s).domain();
    for (int v = 0; v < d.size(); ++v) out.push_back(Datum{s, 0, d.decode(v)});
    return out;
  }

  bool eval(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::Bot: return false;
      case Formula::Kind::Atom: {
        std::vector<Datum> data;
        for (const Term& t : f.args) data.push_back(term(t));
        return atom_holds(m_, f.name, data);
      }
      case Formula::Kind::And: return eval(f.sub[0]) && eval(f.sub[1]);
      case Formula::Kind::Or: return eval(f.sub[0]) || eval(f.sub[1]);
      case Formula::Kind::Imp: return !eval(f.sub[0]) || eval(f.sub[1]);
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        const bool ex = f.kind == Formula::Kind::Exists;
        for (Datum& d : domain(f.sort)) {
          slots_.push_back(std::move(d));
          const bool b = eval(f.sub[0]);
          slots_.pop_back();
          if (b == ex) return ex;
        }
        return !ex;
      }
    }
    return false;
  }

  std::map<std::string, Datum> consts_;

 private:
  const ForcingModel& m_;
  int e_;
  std::vector<Datum> slots_;
};

}  // namespace

bool classical_eval(const ForcingModel& m, int point, const Formula& f, const Env& env) {
  const DoubleSpace* db = m.double_space();
  if (!db) throw InputError("classical evaluation needs a double");
  if (point < 0 || point >= static_cast<int>(db->points().size()))
    throw UnknownElement("no point " + std::to_string(point));
  const int e = db->singleton(point);
  Context ctx = root_context(m, e, f, env);
  Classical c(m, e);
  for (const auto& [k, v] : ctx.consts) c.consts_[k] = c.read(v);
  return c.eval(f);
}

}  // namespace ftop

namespace ftop {

LemmaReport forcing_lemma_check(const ForcingModel& m, const std::vector<Formula>& formulas) {
  const Topology& t = *m.topology();
  const Basis& b = *t.basis();
  const int n = b.size();
  std::vector<std::vector<Sieve>> covers(n);
  for (int p = 0; p < n; ++p) {
    if (b.below(p).size() <= 10) {
      covers[p] = t.all_covers(p);
      continue;
    }
    covers[p].push_back(t.smallest_cover(p));
    if (t.has_presentation())
      for (Sieve& s : t.basic_covers(p)) covers[p].push_back(std::move(s));
  }
  LemmaReport r;
  auto witness = [&](std::string w) {
    if (r.witnesses.size() < 20) r.witnesses.push_back(std::move(w));
  };
  const DoubleSpace* db = m.double_space();
  for (const Formula& f : formulas) {
    ++r.formulas;
    const std::string fs = to_string(f);
    std::vector<bool> holds(n);
    for (int p = 0; p < n; ++p) holds[p] = force(m, p, f).holds();
    const Mask all = forced_set(m, m.top(), f);
    for (int p = 0; p < n; ++p) {
      if (b.leq(p, m.top()) && all[p] != holds[p]) {
        ++r.naturality;
        witness("naturality at " + b.name(p) + ": " + fs);
      }
      if (!holds[p]) continue;
      for (int q : b.below(p))
        if (!holds[q]) {
          ++r.monotonicity;
          witness("monotonicity " + b.name(p) + " to " + b.name(q) + ": " + fs);
        }
    }
    for (int p = 0; p < n; ++p)
      for (const Sieve& s : covers[p]) {
        ++r.cover_instances;
        if (holds[p]) continue;
        const auto mem = s.member_list();
        if (std::all_of(mem.begin(), mem.end(), [&](int q) { return holds[q]; })) {
          ++r.locality;
          witness("local character at " + b.name(p) + " on " + s.to_string() + ": " + fs);
        }
      }
    if (!db) continue;
    for (int k = 0; k < static_cast<int>(db->points().size()); ++k) {
      ++r.truth_instances;
      if (holds[db->singleton(k)] != classical_eval(m, k, f)) {
        ++r.truth;
        witness("truth at " + db->points()[k].name() + ": " + fs);
      }
    }
  }
  return r;
}

}  // namespace ftop
