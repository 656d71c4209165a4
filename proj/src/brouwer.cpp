#include "ftop/brouwer.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "ftop/choice.hpp"
#include "ftop/errors.hpp"

namespace ftop {

BrouwerTree BrouwerTree::sup(std::vector<BrouwerTree> children) {
  if (children.empty()) throw InputError("sup needs at least one argument");
  BrouwerTree t;
  t.children_ = std::move(children);
  return t;
}

int BrouwerTree::depth() const {
  int d = 0;
  for (const auto& c : children_) d = std::max(d, c.depth() + 1);
  return d;
}

std::string BrouwerTree::to_string() const {
  if (is_star()) return "*";
  std::string s = "sup(";
  for (std::size_t i = 0; i < children_.size(); ++i) s += (i ? "," : "") + children_[i].to_string();
  return s + ")";
}

std::vector<BrouwerTree> all_brouwer_trees(int branch, int max_depth) {
  if (branch < 1) throw InputError("branching must be positive");
  std::vector<BrouwerTree> level{BrouwerTree::star()};
  for (int d = 1; d <= max_depth; ++d) {
    std::vector<BrouwerTree> next{BrouwerTree::star()};
    std::vector<std::size_t> pick(branch, 0);
    while (true) {
      std::vector<BrouwerTree> ch;
      for (std::size_t i : pick) ch.push_back(level[i]);
      next.push_back(BrouwerTree::sup(std::move(ch)));
      int k = branch - 1;
      while (k >= 0 && ++pick[k] == level.size()) pick[k--] = 0;
      if (k < 0) break;
    }
    level = std::move(next);
  }
  return level;
}

std::vector<FinSeq> k_map(const BrouwerTree& t, int max_depth) {
  if (t.depth() > max_depth)
    throw DepthExceeded("tree of depth " + std::to_string(t.depth()) + " beyond " +
                        std::to_string(max_depth));
  if (t.is_star()) return {FinSeq{}};
  std::vector<FinSeq> out;
  for (std::size_t i = 0; i < t.children().size(); ++i)
    for (const FinSeq& s : k_map(t.children()[i], max_depth - 1))
      out.push_back(concat({static_cast<int>(i)}, s));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string seq_list(const std::vector<FinSeq>& ss) {
  std::string s = "{";
  for (std::size_t i = 0; i < ss.size(); ++i) s += (i ? "," : "") + seq_name(ss[i]);
  return s + "}";
}

std::string member_string(const TruncatedSpace& sp, const std::vector<int>& m) {
  std::vector<FinSeq> ss;
  for (int x : m) ss.push_back(sp.seq(x));
  return seq_list(ss);
}

// Sieves on x: all of ↓x, or a sieve on each child (none at the leaves).
void all_sieves(const TruncatedSpace& sp, int x, std::vector<std::vector<int>>& out) {
  std::vector<std::vector<int>> combos{{}};
  if (static_cast<int>(sp.seq(x).size()) < sp.depth()) {
    for (int n = 0; n < sp.branch(); ++n) {
      std::vector<std::vector<int>> child;
      all_sieves(sp, sp.child(x, n), child);
      std::vector<std::vector<int>> next;
      for (const auto& a : combos)
        for (const auto& b : child) {
          next.push_back(a);
          next.back().insert(next.back().end(), b.begin(), b.end());
        }
      combos = std::move(next);
    }
  }
  std::vector<int> whole;
  for (int y : sp.basis()->below(x)) whole.push_back(y);
  out.push_back(std::move(whole));
  for (auto& c : combos) out.push_back(std::move(c));
}

void random_sieve(const TruncatedSpace& sp, int x, std::mt19937_64& rng, std::vector<int>& out) {
  if (rng() % 10 < 3) {
    for (int y : sp.basis()->below(x)) out.push_back(y);
    return;
  }
  if (static_cast<int>(sp.seq(x).size()) == sp.depth()) return;
  for (int n = 0; n < sp.branch(); ++n) random_sieve(sp, sp.child(x, n), rng, out);
}

std::uint64_t sieve_count(int branch, int remaining, std::uint64_t cap) {
  std::uint64_t g = 2;
  for (int d = 1; d <= remaining; ++d) {
    std::uint64_t prod = 1;
    for (int i = 0; i < branch && prod <= cap; ++i) prod *= g;
    g = std::min(prod, cap + 1) + 1;
  }
  return g;
}

}  // namespace

AltBaireReport alt_baire_equiv_check(int branch, int depth, std::uint64_t seed,
                                     std::size_t sieve_cap) {
  AltBaireReport rep;
  const SpacePtr sp = TruncatedSpace::baire(branch, depth);
  const BasisPtr& basis = sp->basis();
  std::mt19937_64 rng(seed);

  const std::vector<BrouwerTree> trees = all_brouwer_trees(branch, depth);
  rep.trees = trees.size();
  std::vector<std::vector<FinSeq>> image;
  std::vector<int> tdepth;
  std::set<std::vector<FinSeq>> image_set;
  for (const auto& t : trees) {
    image.push_back(k_map(t, depth));
    tdepth.push_back(t.depth());
    const auto& k = image.back();
    std::size_t bound = 1;
    for (int i = 0; i < tdepth.back(); ++i) bound *= branch;
    const bool finite = !k.empty() && k.size() <= bound &&
                        std::all_of(k.begin(), k.end(), [&](const FinSeq& s) {
                          return static_cast<int>(s.size()) <= tdepth.back();
                        });
    if (!finite) {
      rep.verdict = Verdict::fail(2, "k(" + t.to_string() + ") = " + seq_list(k));
      return rep;
    }
    image_set.insert(k);
  }

  // Cover agreement on every root.
  for (int u = 0; u < sp->size(); ++u) {
    const FinSeq& us = sp->seq(u);
    const int remaining = depth - static_cast<int>(us.size());
    std::vector<std::vector<int>> placed;  // u*k(T) as indices, for T fitting below u
    for (std::size_t i = 0; i < trees.size(); ++i) {
      if (tdepth[i] > remaining) continue;
      std::vector<int> idx;
      for (const FinSeq& s : image[i]) idx.push_back(sp->index(concat(us, s)));
      placed.push_back(std::move(idx));
    }
    std::vector<std::vector<int>> sieves;
    if (sieve_count(branch, remaining, sieve_cap) <= sieve_cap) {
      all_sieves(*sp, u, sieves);
    } else {
      ++rep.sampled_roots;
      for (std::size_t k = 0; k < sieve_cap; ++k) {
        sieves.emplace_back();
        random_sieve(*sp, u, rng, sieves.back());
      }
    }
    for (const auto& members : sieves) {
      Mask m(sp->size(), false);
      for (int x : members) m[x] = true;
      const bool generated = sp->topology()->covers(u, Sieve::generated(basis, u, m));
      const bool by_trees = std::any_of(placed.begin(), placed.end(), [&](const auto& idx) {
        return std::all_of(idx.begin(), idx.end(), [&](int x) { return m[x]; });
      });
      ++rep.sieves;
      if (generated != by_trees) {
        rep.verdict = Verdict::fail(
            1, "at " + seq_name(us) + " the sieve " + member_string(*sp, members) +
                   (generated ? " covers but contains no u*k(T)" : " contains some u*k(T) but does not cover"));
        return rep;
      }
    }
  }

  // Grafting covers onto the members of an image gives an image.
  std::vector<std::vector<std::size_t>> fitting(depth + 1);
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (int r = tdepth[i]; r <= depth; ++r) fitting[r].push_back(i);
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto& k = image[i];
    double total = 1;
    for (const FinSeq& v : k) total *= static_cast<double>(fitting[depth - v.size()].size());
    const bool all = total <= 64;
    std::vector<std::size_t> pick(k.size(), 0);
    for (int round = 0; round < (all ? static_cast<int>(total) : 8); ++round) {
      if (!all)
        for (std::size_t j = 0; j < k.size(); ++j)
          pick[j] = rng() % fitting[depth - k[j].size()].size();
      std::vector<FinSeq> grafted;
      for (std::size_t j = 0; j < k.size(); ++j)
        for (const FinSeq& s : image[fitting[depth - k[j].size()][pick[j]]])
          grafted.push_back(concat(k[j], s));
      std::sort(grafted.begin(), grafted.end());
      ++rep.union_instances;
      if (!image_set.count(grafted)) {
        rep.verdict = Verdict::fail(3, "grafting onto k(" + trees[i].to_string() + ") gives " +
                                           seq_list(grafted));
        return rep;
      }
      if (all)
        for (std::size_t j = k.size(); j-- > 0;) {
          if (++pick[j] < fitting[depth - k[j].size()].size()) break;
          pick[j] = 0;
        }
    }
  }

  // Below any v some v*k(T') lies inside v*↓k(T).
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto& k = image[i];
    auto in_down = [&](const FinSeq& w) {
      return std::any_of(k.begin(), k.end(), [&](const FinSeq& t) { return seq_leq(w, t); });
    };
    for (const FinSeq& v : sp->sequences()) {
      ++rep.restriction_instances;
      bool found = false;
      for (std::size_t j : fitting[depth - v.size()]) {
        if (std::all_of(image[j].begin(), image[j].end(),
                        [&](const FinSeq& s) { return in_down(concat(v, s)); })) {
          found = true;
          break;
        }
      }
      if (!found) {
        rep.verdict = Verdict::fail(4, "no image below " + seq_name(v) + " inside ↓k(" +
                                           trees[i].to_string() + ")");
        return rep;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

int LabelledTree::height() const {
  int h = 0;
  for (const auto& ch : children_)
    for (const auto& c : ch) h = std::max(h, c.height() + 1);
  return h;
}

bool operator==(const LabelledTree& a, const LabelledTree& b) {
  return a.root_ == b.root_ && a.alpha_ == b.alpha_ && a.phi_ == b.phi_ &&
         a.children_ == b.children_;
}

BrouwerSite::BrouwerSite(TopologyPtr t, int branch) : t_(std::move(t)), branch_(branch) {
  if (branch_ < 1) throw InputError("branching must be positive");
  const Basis& b = *t_->basis();
  covers_.resize(b.size());
  for (int p = 0; p < b.size(); ++p) {
    const std::vector<int> down = b.below(p);
    if (down.size() > 20) throw InputError("too many elements below " + b.name(p));
    for (std::uint32_t code = 0; code < (1u << down.size()); ++code) {
      std::vector<int> fam;
      for (std::size_t i = 0; i < down.size(); ++i)
        if (code >> i & 1) fam.push_back(down[i]);
      if (!pairwise_disjoint(b, fam)) continue;
      if (!t_->covers(p, Sieve(t_->basis(), p, fam))) continue;
      covers_[p].push_back(std::move(fam));
    }
    std::sort(covers_[p].begin(), covers_[p].end());
  }
}

LabelledTree BrouwerSite::make(int p, std::vector<int> alpha, std::vector<int> phi,
                               std::vector<std::vector<LabelledTree>> children) const {
  const Basis& b = *t_->basis();
  b.check(p);
  if (phi.size() != alpha.size() || children.size() != alpha.size())
    throw InputError("a label needs one value and one child list per element of the family");
  std::vector<std::size_t> order(alpha.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return alpha[i] < alpha[j]; });
  LabelledTree w;
  w.root_ = p;
  for (std::size_t i : order) {
    w.alpha_.push_back(alpha[i]);
    w.phi_.push_back(phi[i]);
    w.children_.push_back(std::move(children[i]));
  }
  const Sieve s(t_->basis(), p, w.alpha_);
  if (!pairwise_disjoint(b, w.alpha_)) throw NotDisjoint("family below " + b.name(p) + " is not disjoint");
  if (!t_->covers(p, s)) throw NotCovering(s.to_string() + " does not cover " + b.name(p));
  for (std::size_t i = 0; i < w.alpha_.size(); ++i) {
    const std::string at = b.name(w.alpha_[i]);
    if (w.phi_[i] == 0) {
      if (!w.children_[i].empty()) throw InputError("children under " + at + " where phi is 0");
    } else if (w.phi_[i] == 1) {
      if (static_cast<int>(w.children_[i].size()) != branch_)
        throw InputError("expected " + std::to_string(branch_) + " children under " + at);
      for (const auto& c : w.children_[i])
        if (c.root_ != w.alpha_[i]) throw InputError("child under " + at + " is rooted at " + b.name(c.root_));
    } else {
      throw InputError("phi takes values 0 and 1");
    }
  }
  return w;
}

LabelledTree BrouwerSite::star(int p) const { return make(p, {p}, {0}, {{}}); }

LabelledTree BrouwerSite::sup(int p, std::vector<LabelledTree> t) const {
  return make(p, {p}, {1}, {std::move(t)});
}

LabelledTree BrouwerSite::restrict(const LabelledTree& w, int q) const {
  const Basis& b = *t_->basis();
  b.check(q);
  if (!b.leq(q, w.root())) throw NotBelowRoot(b.name(q) + " is not below " + b.name(w.root()));
  Mask down(b.size(), false);
  for (int a : w.alpha())
    for (int x : b.below(a)) down[x] = true;
  std::vector<int> beta = cc_refine(*t_, Sieve::generated(t_->basis(), q, down));
  std::sort(beta.begin(), beta.end());
  std::vector<int> psi;
  std::vector<std::vector<LabelledTree>> kids;
  for (int r : beta) {
    std::size_t i = 0;
    while (!b.leq(r, w.alpha()[i])) ++i;
    psi.push_back(w.phi()[i]);
    kids.emplace_back();
    for (const auto& c : w.children(i)) kids.back().push_back(restrict(c, r));
  }
  return make(q, std::move(beta), std::move(psi), std::move(kids));
}

bool BrouwerSite::equiv(const LabelledTree& v, const LabelledTree& w) const {
  if (v.root() != w.root()) return false;
  const Basis& b = *t_->basis();
  const int p = v.root();
  auto above = [&](const LabelledTree& t, int r) -> int {
    for (std::size_t i = 0; i < t.alpha().size(); ++i)
      if (b.leq(r, t.alpha()[i])) return static_cast<int>(i);
    return -1;
  };
  Mask agree(b.size(), false);
  for (int r : b.below(p)) {
    const int i = above(v, r), j = above(w, r);
    if (i < 0 || j < 0 || v.phi()[i] != w.phi()[j]) continue;
    bool ok = true;
    for (int n = 0; ok && n < static_cast<int>(v.children(i).size()); ++n)
      ok = equiv(restrict(v.children(i)[n], r), restrict(w.children(j)[n], r));
    agree[r] = ok;
  }
  return t_->covers(p, Sieve::generated(t_->basis(), p, agree));
}

LabelledTree BrouwerSite::amalgamate(int p, const std::vector<int>& family,
                                     const std::vector<LabelledTree>& w) const {
  const Basis& b = *t_->basis();
  if (w.size() != family.size()) throw InputError("one tree per element of the family");
  if (!pairwise_disjoint(b, family)) throw NotDisjoint("amalgamation family is not disjoint");
  if (!t_->covers(p, Sieve(t_->basis(), p, family)))
    throw NotCovering("amalgamation family does not cover " + b.name(p));
  std::vector<int> beta, phi;
  std::vector<std::vector<LabelledTree>> kids;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (w[i].root() != family[i]) throw InputError("tree " + std::to_string(i) + " is rooted elsewhere");
    for (std::size_t j = 0; j < w[i].alpha().size(); ++j) {
      beta.push_back(w[i].alpha()[j]);
      phi.push_back(w[i].phi()[j]);
      kids.push_back(w[i].children(j));
    }
  }
  return make(p, std::move(beta), std::move(phi), std::move(kids));
}

std::vector<LabelledTree> BrouwerSite::enumerate(int p, int h, std::size_t cap) const {
  std::map<std::pair<int, int>, std::vector<LabelledTree>> memo;
  std::function<const std::vector<LabelledTree>&(int, int)> go =
      [&](int x, int hh) -> const std::vector<LabelledTree>& {
    auto it = memo.find({x, hh});
    if (it != memo.end()) return it->second;
    std::vector<LabelledTree> out;
    for (const auto& alpha : covers_[x]) {
      const std::size_t k = alpha.size();
      for (std::uint32_t code = 0; code < (1u << k); ++code) {
        if (code && hh == 0) break;
        // Child options per piece: B-tuples of trees one level down.
        std::vector<const std::vector<LabelledTree>*> opts(k, nullptr);
        for (std::size_t i = 0; i < k; ++i)
          if (code >> i & 1) opts[i] = &go(alpha[i], hh - 1);
        std::vector<std::size_t> pick(k * branch_, 0);
        while (true) {
          std::vector<int> phi(k);
          std::vector<std::vector<LabelledTree>> kids(k);
          for (std::size_t i = 0; i < k; ++i) {
            phi[i] = code >> i & 1;
            if (phi[i])
              for (int n = 0; n < branch_; ++n) kids[i].push_back((*opts[i])[pick[i * branch_ + n]]);
          }
          out.push_back(make(x, alpha, std::move(phi), std::move(kids)));
          if (out.size() > cap) throw InputError("more than " + std::to_string(cap) + " trees");
          std::size_t j = pick.size();
          bool advanced = false;
          while (j-- > 0) {
            const std::size_t i = j / branch_;
            if (!opts[i]) continue;
            if (++pick[j] < opts[i]->size()) {
              advanced = true;
              break;
            }
            pick[j] = 0;
          }
          if (!advanced) break;
        }
      }
    }
    return memo.emplace(std::make_pair(x, hh), std::move(out)).first->second;
  };
  return go(p, h);
}

std::string BrouwerSite::show(const LabelledTree& w) const {
  const Basis& b = *t_->basis();
  std::string s = "(" + b.name(w.root()) + ":";
  for (std::size_t i = 0; i < w.alpha().size(); ++i) {
    s += (i ? ", " : " ") + b.name(w.alpha()[i]) + "=" + std::to_string(w.phi()[i]);
    if (w.phi()[i]) {
      s += "[";
      for (std::size_t n = 0; n < w.children(i).size(); ++n) s += (n ? "," : "") + show(w.children(i)[n]);
      s += "]";
    }
  }
  return s + ")";
}

LabelledTree restrict_tree(const BrouwerSite& site, const LabelledTree& w, int q) {
  return site.restrict(w, q);
}

bool tree_equiv(const BrouwerSite& site, const LabelledTree& v, const LabelledTree& w) {
  return site.equiv(v, w);
}

// ---------------------------------------------------------------------------

namespace {

struct Classes {
  std::vector<LabelledTree> trees;
  std::map<std::string, int> index;  // by show()
  std::vector<int> cls;              // class of each tree (its first member)
  std::vector<int> reps;             // first tree of each class
  std::vector<int> low;              // a member of height < h, or -1
  int class_of_rep(int tree) const {
    return static_cast<int>(std::find(reps.begin(), reps.end(), cls[tree]) - reps.begin());
  }
};

// Odometer over a product of sizes, at most cap tuples.
template <class F>
void for_each_tuple(const std::vector<std::size_t>& sizes, std::size_t cap, F f) {
  for (std::size_t s : sizes)
    if (s == 0) return;
  std::vector<std::size_t> pick(sizes.size(), 0);
  for (std::size_t done = 0; done < cap; ++done) {
    f(pick);
    std::size_t j = pick.size();
    bool advanced = false;
    while (j-- > 0) {
      if (++pick[j] < sizes[j]) {
        advanced = true;
        break;
      }
      pick[j] = 0;
    }
    if (!advanced) return;
  }
}

}  // namespace

BoReport bo_sheaf_checks(const BrouwerSite& site, const BoCheckOptions& opt) {
  BoReport rep;
  const Basis& b = *site.topology()->basis();
  const int n = b.size();
  const int h = opt.height;
  const int B = site.branch();
  auto fail = [&](std::string s) {
    if (rep.failures.size() < 50) rep.failures.push_back(std::move(s));
  };

  // Enumeration and the equivalence relation.
  std::vector<Classes> C(n);
  for (int p = 0; p < n; ++p) {
    Classes& c = C[p];
    c.trees = site.enumerate(p, h);
    const std::size_t m = c.trees.size();
    rep.trees += m;
    for (std::size_t i = 0; i < m; ++i) c.index.emplace(site.show(c.trees[i]), static_cast<int>(i));
    std::vector<std::vector<bool>> e(m, std::vector<bool>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) e[i][j] = site.equiv(c.trees[i], c.trees[j]);
    rep.equivalence_pairs += m * m;
    for (std::size_t i = 0; i < m; ++i) {
      if (!e[i][i]) fail("not reflexive at " + site.show(c.trees[i]));
      for (std::size_t j = 0; j < m; ++j) {
        if (e[i][j] != e[j][i])
          fail("not symmetric: " + site.show(c.trees[i]) + " and " + site.show(c.trees[j]));
        if (e[i][j] && e[i] != e[j])
          fail("not transitive through " + site.show(c.trees[i]) + " and " + site.show(c.trees[j]));
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = 0;
      while (!e[i][j]) ++j;
      c.cls.push_back(static_cast<int>(j));
      if (j == i) c.reps.push_back(static_cast<int>(i));
    }
    c.low.assign(c.reps.size(), -1);
    for (std::size_t i = 0; i < m; ++i) {
      const int k = c.class_of_rep(static_cast<int>(i));
      if (c.low[k] < 0 && c.trees[i].height() < h) c.low[k] = static_cast<int>(i);
    }
    rep.classes += c.reps.size();
  }

  // Class index of a tree rooted at p, -1 when it escapes the enumeration.
  auto lookup = [&](int p, const LabelledTree& t) -> int {
    auto it = C[p].index.find(site.show(t));
    if (it == C[p].index.end()) {
      fail("outside the enumeration: " + site.show(t));
      return -1;
    }
    return C[p].class_of_rep(it->second);
  };
  auto tree_index = [&](int p, const LabelledTree& t) -> int {
    auto it = C[p].index.find(site.show(t));
    return it == C[p].index.end() ? -1 : it->second;
  };

  // Restriction: res[p][i][q] is the tree index of w_i restricted to q.
  std::vector<std::vector<std::vector<int>>> res(n);
  for (int p = 0; p < n; ++p) {
    res[p].assign(C[p].trees.size(), std::vector<int>(n, -1));
    for (std::size_t i = 0; i < C[p].trees.size(); ++i)
      for (int q : b.below(p)) {
        const LabelledTree r = site.restrict(C[p].trees[i], q);
        res[p][i][q] = tree_index(q, r);
        ++rep.restrictions;
        if (res[p][i][q] < 0) fail("outside the enumeration: " + site.show(r));
      }
  }
  auto rcls = [&](int p, int i, int q) {
    const int t = res[p][i][q];
    return t < 0 ? -1 : C[q].class_of_rep(t);
  };
  for (int p = 0; p < n; ++p) {
    const auto& c = C[p];
    for (std::size_t i = 0; i < c.trees.size(); ++i) {
      const int ii = static_cast<int>(i);
      if (rcls(p, ii, p) != c.class_of_rep(ii)) fail("identity law fails at " + site.show(c.trees[i]));
      for (int q : b.below(p)) {
        const int t = res[p][i][q];
        if (t < 0) continue;
        for (int r : b.below(q))
          if (rcls(q, t, r) != rcls(p, ii, r))
            fail("composition law fails at " + site.show(c.trees[i]) + " via " + b.name(q) +
                 " to " + b.name(r));
        for (std::size_t j = 0; j < c.trees.size(); ++j)
          if (c.cls[j] == c.cls[i] && rcls(p, static_cast<int>(j), q) != rcls(p, ii, q))
            fail("restriction to " + b.name(q) + " separates equivalent " + site.show(c.trees[i]) +
                 " and " + site.show(c.trees[j]));
      }
    }
  }

  // Separation on every covering sieve.
  for (int p = 0; p < n; ++p) {
    const std::vector<int> down = b.below(p);
    std::set<Mask> seen;
    for (std::uint32_t code = 0; code < (1u << down.size()); ++code) {
      Mask m(n, false);
      for (std::size_t i = 0; i < down.size(); ++i)
        if (code >> i & 1) m[down[i]] = true;
      const Sieve s = Sieve::generated(site.topology()->basis(), p, m);
      if (!seen.insert(s.members()).second || !site.topology()->covers(p, s)) continue;
      const auto& reps = C[p].reps;
      for (std::size_t x = 0; x < reps.size(); ++x)
        for (std::size_t y = x + 1; y < reps.size(); ++y) {
          ++rep.separation_instances;
          bool same = true;
          for (int g : s.generators()) same = same && rcls(p, reps[x], g) == rcls(p, reps[y], g);
          if (same)
            fail("not separated on " + s.to_string() + ": " + site.show(C[p].trees[reps[x]]) +
                 " and " + site.show(C[p].trees[reps[y]]));
        }
    }
  }

  // Amalgamation on every disjoint cover.
  auto amalgamate_classes = [&](int p, const std::vector<int>& alpha,
                                const std::vector<int>& picked) -> int {
    std::vector<LabelledTree> ws;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      ws.push_back(C[alpha[i]].trees[C[alpha[i]].reps[picked[i]]]);
    return lookup(p, site.amalgamate(p, alpha, ws));
  };
  for (int p = 0; p < n; ++p)
    for (const auto& alpha : site.disjoint_covers(p)) {
      std::vector<std::size_t> sizes;
      for (int q : alpha) sizes.push_back(C[q].reps.size());
      for_each_tuple(sizes, opt.family_cap, [&](const std::vector<std::size_t>& pick) {
        std::vector<int> picked(pick.begin(), pick.end());
        ++rep.amalgamations;
        const int k = amalgamate_classes(p, alpha, picked);
        if (k < 0) return;
        int matches = 0;
        for (std::size_t x = 0; x < C[p].reps.size(); ++x) {
          bool all = true;
          for (std::size_t i = 0; i < alpha.size(); ++i)
            all = all && rcls(p, C[p].reps[x], alpha[i]) == picked[i];
          if (all) ++matches;
        }
        bool restricts = true;
        for (std::size_t i = 0; i < alpha.size(); ++i)
          restricts = restricts && rcls(p, C[p].reps[k], alpha[i]) == picked[i];
        if (!restricts || matches != 1)
          fail("amalgamation over " + std::to_string(alpha.size()) + " pieces below " + b.name(p) +
               (restricts ? " is not unique" : " does not restrict correctly"));
      });
    }

  // sup and star: naturality and injectivity.
  std::vector<int> star_cls(n);
  for (int p = 0; p < n; ++p) star_cls[p] = lookup(p, site.star(p));
  for (int p = 0; p < n; ++p) {
    const auto& c = C[p];
    const int si = tree_index(p, site.star(p));
    for (int q : b.below(p))
      if (si >= 0 && rcls(p, si, q) != star_cls[q]) fail("star is not natural at " + b.name(q));
    if (h == 0) continue;
    std::vector<std::size_t> low;
    for (std::size_t k = 0; k < c.reps.size(); ++k)
      if (c.low[k] >= 0) low.push_back(k);
    std::map<int, std::vector<std::size_t>> preimage;
    for_each_tuple(std::vector<std::size_t>(B, low.size()), opt.family_cap,
                   [&](const std::vector<std::size_t>& pick) {
                     std::vector<LabelledTree> t;
                     std::vector<std::size_t> key;
                     for (std::size_t x : pick) {
                       t.push_back(c.trees[c.low[low[x]]]);
                       key.push_back(low[x]);
                     }
                     ++rep.sup_instances;
                     const LabelledTree s = site.sup(p, t);
                     const int k = lookup(p, s);
                     if (k < 0) return;
                     if (k == star_cls[p]) fail("sup equals star at " + b.name(p));
                     auto [it, fresh] = preimage.emplace(k, key);
                     if (!fresh && it->second != key) fail("sup is not injective at " + b.name(p));
                     const int idx = tree_index(p, s);
                     for (int q : b.below(p)) {
                       std::vector<LabelledTree> tq;
                       for (const auto& x : t) tq.push_back(site.restrict(x, q));
                       const int kq = lookup(q, site.sup(q, tq));
                       if (kq >= 0 && rcls(p, idx, q) != kq)
                         fail("sup is not natural from " + b.name(p) + " to " + b.name(q));
                     }
                   });
  }

  // The least family closed under star, sup, restriction and amalgamation.
  std::vector<std::vector<bool>> in(n);
  for (int p = 0; p < n; ++p) in[p].assign(C[p].reps.size(), false);
  bool changed = true;
  auto add = [&](int p, int k) {
    if (k >= 0 && !in[p][k]) in[p][k] = changed = true;
  };
  while (changed) {
    changed = false;
    for (int p = 0; p < n; ++p) {
      add(p, star_cls[p]);
      const auto& c = C[p];
      std::vector<std::size_t> low;
      for (std::size_t k = 0; k < c.reps.size(); ++k)
        if (in[p][k] && c.low[k] >= 0) low.push_back(k);
      if (h > 0)
        for_each_tuple(std::vector<std::size_t>(B, low.size()), opt.family_cap,
                       [&](const std::vector<std::size_t>& pick) {
                         std::vector<LabelledTree> t;
                         for (std::size_t x : pick) t.push_back(c.trees[c.low[low[x]]]);
                         add(p, lookup(p, site.sup(p, t)));
                       });
      for (std::size_t k = 0; k < c.reps.size(); ++k)
        if (in[p][k])
          for (int q : b.below(p)) add(q, rcls(p, c.reps[k], q));
      for (const auto& alpha : site.disjoint_covers(p)) {
        std::vector<std::vector<int>> avail;
        std::vector<std::size_t> sizes;
        for (int q : alpha) {
          avail.emplace_back();
          for (std::size_t k = 0; k < C[q].reps.size(); ++k)
            if (in[q][k]) avail.back().push_back(static_cast<int>(k));
          sizes.push_back(avail.back().size());
        }
        for_each_tuple(sizes, opt.family_cap, [&](const std::vector<std::size_t>& pick) {
          std::vector<int> picked;
          for (std::size_t i = 0; i < pick.size(); ++i) picked.push_back(avail[i][pick[i]]);
          add(p, amalgamate_classes(p, alpha, picked));
        });
      }
    }
  }
  for (int p = 0; p < n; ++p)
    for (std::size_t k = 0; k < C[p].reps.size(); ++k) {
      if (in[p][k]) {
        ++rep.closure_classes;
      } else {
        fail("proper subalgebra misses " + site.show(C[p].trees[C[p].reps[k]]));
      }
    }
  return rep;
}

}  // namespace ftop
