#include "ftop/spaces.hpp"

#include <algorithm>
#include <sstream>

#include "ftop/errors.hpp"

namespace ftop {

std::string seq_name(const FinSeq& u) {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < u.size(); ++i) os << (i ? "," : "") << u[i];
  os << ">";
  return os.str();
}

FinSeq parse_seq(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
          t.end());
  if (!t.empty() && (t.front() == '<' || t.front() == '[' || t.front() == '(')) {
    if (t.size() < 2) throw InputError("malformed sequence '" + text + "'");
    t = t.substr(1, t.size() - 2);
  }
  FinSeq out;
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit))
      throw InputError("malformed sequence '" + text + "'");
    out.push_back(std::stoi(item));
  }
  return out;
}

bool seq_leq(const FinSeq& u, const FinSeq& v) {
  return v.size() <= u.size() && std::equal(v.begin(), v.end(), u.begin());
}

FinSeq concat(const FinSeq& u, const FinSeq& v) {
  FinSeq w = u;
  w.insert(w.end(), v.begin(), v.end());
  return w;
}

struct TruncatedSpace::Shape {
  int branch;
  int depth;
  std::vector<FinSeq> seqs;
  std::vector<int> offset;  // first index of each length

  int size() const { return static_cast<int>(seqs.size()); }
  int len(int i) const { return static_cast<int>(seqs[i].size()); }

  int child(int i, int n) const {
    if (len(i) >= depth) return -1;
    const int v = i - offset[len(i)];
    return offset[len(i) + 1] + v * branch + n;
  }

  Mask bracket(int u, int q) const {
    Mask m(size(), false);
    if (q < len(u) || q > depth) return m;
    std::vector<int> frontier{u};
    for (int l = len(u); l < q; ++l) {
      std::vector<int> next;
      for (int x : frontier)
        for (int c = 0; c < branch; ++c) next.push_back(child(x, c));
      frontier = std::move(next);
    }
    for (int x : frontier) m[x] = true;
    return m;
  }

  // Least q with u[q] inside the sieve, or -1.
  int least_q(int u, const Sieve& t) const {
    for (int q = len(u); q <= depth; ++q) {
      Mask m = bracket(u, q);
      bool inside = true;
      for (int v = 0; v < size() && inside; ++v)
        if (m[v] && !t.contains(v)) inside = false;
      if (inside) return q;
    }
    return -1;
  }

  // Sieves generated by finite trees below u, each branch ending in a node.
  std::vector<Mask> trees(const Basis& b, int u) const {
    std::vector<Mask> out{b.down(u)};
    if (len(u) == depth) return out;
    std::vector<Mask> acc{Mask(size(), false)};
    for (int c = 0; c < branch; ++c) {
      std::vector<Mask> sub = trees(b, child(u, c));
      std::vector<Mask> next;
      for (const Mask& a : acc)
        for (const Mask& m : sub) {
          Mask x = a;
          for (std::size_t v = 0; v < x.size(); ++v) x[v] = x[v] || m[v];
          next.push_back(std::move(x));
        }
      acc = std::move(next);
    }
    out.insert(out.end(), acc.begin(), acc.end());
    return out;
  }
};

SpacePtr TruncatedSpace::make(SpaceKind kind, int branch, int depth) {
  if (kind == SpaceKind::Cantor && branch != 2) throw InputError("Cantor space has branch 2");
  if (branch < 1) throw InputError("branch must be positive");
  if (depth < 0) throw InputError("depth must be non-negative");
  return SpacePtr(new TruncatedSpace(kind, branch, depth));
}

TruncatedSpace::TruncatedSpace(SpaceKind kind, int branch, int depth)
    : kind_(kind), branch_(branch), depth_(depth) {
  auto shape = std::make_shared<Shape>();
  shape->branch = branch;
  shape->depth = depth;
  std::vector<FinSeq> level{FinSeq{}};
  for (int len = 0; len <= depth_; ++len) {
    shape->offset.push_back(static_cast<int>(shape->seqs.size()));
    shape->seqs.insert(shape->seqs.end(), level.begin(), level.end());
    if (len == depth_) break;
    std::vector<FinSeq> next;
    for (const FinSeq& u : level)
      for (int n = 0; n < branch_; ++n) {
        FinSeq v = u;
        v.push_back(n);
        next.push_back(std::move(v));
      }
    level = std::move(next);
    if (shape->seqs.size() + level.size() > 4096) throw InputError("truncated space too large");
  }
  shape_ = shape;
  const int n = shape->size();
  std::vector<std::string> names;
  names.reserve(n);
  for (const FinSeq& u : shape->seqs) names.push_back(seq_name(u));
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) leq[i][j] = seq_leq(shape->seqs[i], shape->seqs[j]);
  basis_ = std::make_shared<const Basis>(std::move(names), std::move(leq));

  system_.basis = basis_;
  system_.families.assign(n, {});
  for (int i = 0; i < n; ++i) {
    if (shape->len(i) == depth_) {
      system_.families[i].push_back({i});
    } else {
      std::vector<int> kids;
      for (int c = 0; c < branch_; ++c) kids.push_back(shape->child(i, c));
      system_.families[i].push_back(kids);
    }
  }

  const BasisPtr b = basis_;
  std::shared_ptr<const Shape> sh = shape;
  auto smallest = [sh, b](int u) { return Sieve::generated(b, u, sh->bracket(u, sh->depth)); };

  if (kind_ == SpaceKind::Cantor) {
    auto cover = [sh](int u, const Sieve& s, int) {
      CoverResult r;
      int q = sh->least_q(u, s);
      if (q >= 0) {
        r.status = CoverStatus::Covered;
        r.depth = q - sh->len(u);
      }
      return r;
    };
    auto bcov = [sh, b](int u) {
      std::vector<Sieve> out;
      for (int q = sh->len(u); q <= sh->depth; ++q)
        out.push_back(Sieve::generated(b, u, sh->bracket(u, q)));
      return out;
    };
    topology_ = std::make_shared<Topology>(basis_, cover, depth_ + 1, bcov, smallest);
  } else {
    TopologyPtr gen = generate_topology(system_, depth_ + 1);
    auto bcov = [sh, b](int u) {
      std::vector<Sieve> out;
      for (const Mask& m : sh->trees(*b, u)) out.push_back(Sieve::generated(b, u, m));
      return out;
    };
    auto cover = [gen](int u, const Sieve& s, int fuel) { return gen->cover(u, s, fuel); };
    topology_ = std::make_shared<Topology>(basis_, cover, depth_ + 1, bcov, smallest);
  }
}

const FinSeq& TruncatedSpace::seq(int i) const { return shape_->seqs.at(i); }

const std::vector<FinSeq>& TruncatedSpace::sequences() const { return shape_->seqs; }

int TruncatedSpace::index(const FinSeq& u) const {
  if (static_cast<int>(u.size()) > depth_)
    throw DepthExceeded(seq_name(u) + " is longer than the truncation depth " +
                        std::to_string(depth_));
  int v = 0;
  for (int x : u) {
    if (x < 0 || x >= branch_)
      throw UnknownElement(seq_name(u) + " has an entry outside 0.." + std::to_string(branch_ - 1));
    v = v * branch_ + x;
  }
  return shape_->offset[u.size()] + v;
}

int TruncatedSpace::child(int i, int n) const {
  if (i < 0 || i >= size()) throw UnknownElement("element index out of range");
  return shape_->child(i, n);
}

std::vector<FinSeq> TruncatedSpace::u_bracket(const FinSeq& u, int q) const {
  const int ui = index(u);
  if (q > depth_)
    throw DepthExceeded("u[q] with q = " + std::to_string(q) + " beyond depth " +
                        std::to_string(depth_));
  if (q < static_cast<int>(u.size())) throw InputError("u[q] needs q >= |u|");
  std::vector<FinSeq> out;
  Mask m = shape_->bracket(ui, q);
  for (int i = 0; i < size(); ++i)
    if (m[i]) out.push_back(seq(i));
  return out;
}

Sieve TruncatedSpace::sieve(const FinSeq& root, const std::vector<FinSeq>& generators) const {
  std::vector<int> g;
  for (const FinSeq& u : generators) g.push_back(index(u));
  return Sieve(basis_, index(root), g);
}

Mask TruncatedSpace::bracket_mask(int u, int q) const { return shape_->bracket(u, q); }

CantorCover cantor_cover_test(const TruncatedSpace& space, const FinSeq& u, const Sieve& s) {
  const int ui = space.index(u);
  const Sieve t = s.root() == ui ? s : s.restrict(ui);
  CantorCover out;
  for (int q = static_cast<int>(u.size()); q <= space.depth(); ++q) {
    Mask m = space.bracket_mask(ui, q);
    bool inside = true;
    for (int v = 0; v < space.size() && inside; ++v)
      if (m[v] && !t.contains(v)) inside = false;
    if (inside) {
      out.q = q;
      return out;
    }
  }
  Mask leaves = space.bracket_mask(ui, space.depth());
  for (int v = 0; v < space.size(); ++v)
    if (leaves[v] && !t.contains(v)) out.frontier.push_back(space.seq(v));
  return out;
}

std::vector<FinSeq> kfinite_subcover(const TruncatedSpace& space, const FinSeq& u,
                                     const Sieve& s) {
  CantorCover c = cantor_cover_test(space, u, s);
  if (!c.covered())
    throw NotACover(s.to_string() + " does not cover " + seq_name(u) + "; uncovered " +
                    seq_name(c.frontier.front()));
  return space.u_bracket(u, *c.q);
}

namespace {

std::optional<std::pair<int, int>> monotone_violation(const TruncatedSpace& sp, const Mask& m) {
  for (int v = 0; v < sp.size(); ++v) {
    if (!m[v]) continue;
    for (int c = 0; c < sp.branch(); ++c) {
      int w = sp.child(v, c);
      if (w >= 0 && !m[w]) return std::make_pair(w, v);
    }
  }
  return std::nullopt;
}

}  // namespace

Bar::Bar(SpacePtr space, const Predicate& predicate, bool monotone, bool inductive)
    : space_(std::move(space)), monotone_(monotone), inductive_(inductive) {
  const TruncatedSpace& sp = *space_;
  mask_.assign(sp.size(), false);
  for (int i = 0; i < sp.size(); ++i) mask_[i] = predicate(sp.seq(i));
  if (monotone_)
    if (auto bad = monotone_violation(sp, mask_))
      throw NotMonotone("bar is not monotone: holds at " + seq_name(sp.seq(bad->second)) +
                        " but not at " + seq_name(sp.seq(bad->first)));
  if (inductive_) {
    for (int i = 0; i < sp.size(); ++i) {
      if (mask_[i] || static_cast<int>(sp.seq(i).size()) == sp.depth()) continue;
      bool all = true;
      for (int c = 0; c < sp.branch(); ++c) all = all && mask_[sp.child(i, c)];
      if (all)
        throw NotInductive("bar is not inductive: holds at every child of " +
                           seq_name(sp.seq(i)) + " but not there");
    }
  }
}

Bar Bar::from_generators(SpacePtr space, const std::vector<FinSeq>& generators, bool monotone,
                         bool inductive) {
  for (const FinSeq& g : generators) space->index(g);
  auto pred = [generators](const FinSeq& u) {
    return std::any_of(generators.begin(), generators.end(),
                       [&](const FinSeq& g) { return seq_leq(u, g); });
  };
  return Bar(std::move(space), pred, monotone, inductive);
}

Bar Bar::inductive_closure_of(SpacePtr space, const std::vector<FinSeq>& generators) {
  const TruncatedSpace& sp = *space;
  Mask m(sp.size(), false);
  for (const FinSeq& g : generators) {
    int gi = sp.index(g);
    for (int v = 0; v < sp.size(); ++v)
      if (sp.basis()->leq(v, gi)) m[v] = true;
  }
  // Longer sequences come later in the numbering, so one reverse sweep
  // saturates the children-to-parent rule.
  for (int i = sp.size() - 1; i >= 0; --i) {
    if (m[i] || static_cast<int>(sp.seq(i).size()) == sp.depth()) continue;
    bool all = true;
    for (int c = 0; c < sp.branch(); ++c) all = all && m[sp.child(i, c)];
    m[i] = all;
  }
  auto pred = [m, space](const FinSeq& u) { return static_cast<bool>(m[space->index(u)]); };
  return Bar(space, pred, true, true);
}

bool Bar::operator()(const FinSeq& u) const { return mask_[space_->index(u)]; }

std::vector<FinSeq> Bar::generators() const {
  std::vector<FinSeq> out;
  for (int v : maximal_elements(*space_->basis(), mask_)) out.push_back(space_->seq(v));
  return out;
}

Sieve bar_to_sieve(const Bar& bar, const FinSeq& root) {
  const TruncatedSpace& sp = *bar.space();
  const int r = sp.index(root);
  if (!bar.monotone())
    if (auto bad = monotone_violation(sp, bar.mask()))
      throw NotMonotone("bar is not monotone: holds at " + seq_name(sp.seq(bad->second)) +
                        " but not at " + seq_name(sp.seq(bad->first)));
  return Sieve::generated(sp.basis(), r, bar.mask());
}

}  // namespace ftop
