#include "ftop/sheaves.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "ftop/errors.hpp"

namespace ftop {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

}  // namespace

std::optional<Section> Presheaf::solve(int, const std::vector<int>&,
                                       const std::vector<Section>&) const {
  return std::nullopt;
}

TablePresheaf::TablePresheaf(TopologyPtr t, std::vector<int> counts,
                             std::vector<std::vector<std::vector<int>>> res)
    : t_(std::move(t)), counts_(std::move(counts)), res_(std::move(res)) {
  const int n = t_->size();
  if (static_cast<int>(counts_.size()) != n || static_cast<int>(res_.size()) != n)
    throw InputError("presheaf table has the wrong size");
}

Section TablePresheaf::restrict(int p, const Section& x, int q) const {
  if (!t_->basis()->leq(q, p))
    throw NotBelowRoot(t_->basis()->name(q) + " is not below " + t_->basis()->name(p));
  return {res_[p][q][x[0]]};
}

std::shared_ptr<TablePresheaf> random_tree_presheaf(std::mt19937_64& rng,
                                                    const TruncatedSpace& space, int max_count,
                                                    bool sheafy) {
  const int n = space.size();
  std::uniform_int_distribution<int> cnt(1, max_count);
  std::vector<int> counts(n, 0);
  // child maps: down[u][c][i] = restriction of section i at u to child c.
  std::vector<std::vector<std::vector<int>>> down(n);
  for (int u = n - 1; u >= 0; --u) {
    if (space.child(u, 0) < 0) {
      counts[u] = cnt(rng);
      continue;
    }
    down[u].resize(space.branch());
    if (sheafy) {
      int total = 1;
      for (int c = 0; c < space.branch(); ++c) total *= counts[space.child(u, c)];
      counts[u] = total;
      for (int i = 0; i < total; ++i) {
        int rest = i;
        for (int c = 0; c < space.branch(); ++c) {
          const int k = counts[space.child(u, c)];
          down[u][c].push_back(rest % k);
          rest /= k;
        }
      }
    } else {
      counts[u] = cnt(rng);
      for (int c = 0; c < space.branch(); ++c) {
        std::uniform_int_distribution<int> pick(0, counts[space.child(u, c)] - 1);
        for (int i = 0; i < counts[u]; ++i) down[u][c].push_back(pick(rng));
      }
    }
  }
  std::vector<std::vector<std::vector<int>>> res(n, std::vector<std::vector<int>>(n));
  for (int p = 0; p < n; ++p) {
    res[p][p].resize(counts[p]);
    std::iota(res[p][p].begin(), res[p][p].end(), 0);
    // Elements are numbered parents first, so each q below p extends an
    // already-computed parent.
    for (int q = p + 1; q < n; ++q) {
      const FinSeq& s = space.seq(q);
      if (!seq_leq(s, space.seq(p))) continue;
      FinSeq ps(s.begin(), s.end() - 1);
      const int parent = space.index(ps);
      const int c = s.back();
      res[p][q].resize(counts[p]);
      for (int i = 0; i < counts[p]; ++i) res[p][q][i] = down[parent][c][res[p][parent][i]];
    }
  }
  return std::make_shared<TablePresheaf>(space.topology(), std::move(counts), std::move(res));
}

int ValueDomain::size() const {
  switch (kind) {
    case Kind::Nat:
    case Kind::Two:
      return bound;
    case Kind::FinSeq: {
      int total = 0;
      for (int k = 0; k <= length; ++k) total += static_cast<int>(sat_pow(bound, k));
      return total;
    }
    case Kind::Seq:
      return static_cast<int>(sat_pow(bound, length));
  }
  return 0;
}

std::vector<int> ValueDomain::decode(int v) const {
  if (kind == Kind::Nat || kind == Kind::Two) return {v};
  int len = kind == Kind::Seq ? length : 0;
  if (kind == Kind::FinSeq)
    while (v >= static_cast<int>(sat_pow(bound, len))) v -= static_cast<int>(sat_pow(bound, len++));
  std::vector<int> s(len, 0);
  for (int i = len - 1; i >= 0; --i) {
    s[i] = v % bound;
    v /= bound;
  }
  return s;
}

int ValueDomain::encode(const std::vector<int>& s) const {
  if (kind == Kind::Nat || kind == Kind::Two) {
    if (s.size() != 1 || s[0] < 0 || s[0] >= bound) return -1;
    return s[0];
  }
  const int len = static_cast<int>(s.size());
  if (kind == Kind::Seq ? len != length : len > length) return -1;
  int v = 0;
  for (int x : s) {
    if (x < 0 || x >= bound) return -1;
    v = v * bound + x;
  }
  if (kind == Kind::FinSeq)
    for (int k = 0; k < len; ++k) v += static_cast<int>(sat_pow(bound, k));
  return v;
}

std::string ValueDomain::show(int v) const {
  if (kind == Kind::Nat || kind == Kind::Two) return std::to_string(v);
  return seq_name(decode(v));
}

std::string ValueDomain::name() const {
  switch (kind) {
    case Kind::Nat:
      return "nat";
    case Kind::Two:
      return "two";
    case Kind::FinSeq:
      return "finseq" + std::to_string(bound);
    case Kind::Seq:
      return "seq" + std::to_string(bound);
  }
  return "";
}

LocallyConstantSheaf::LocallyConstantSheaf(TopologyPtr t, ValueDomain domain)
    : t_(std::move(t)), domain_(domain) {
  const Basis& b = *t_->basis();
  const int n = b.size();
  pieces_.resize(n);
  piece_of_.assign(n, std::vector<int>(n, -1));
  for (int p = 0; p < n; ++p) {
    Sieve min = t_->smallest_cover(p);
    std::vector<int> members = min.member_list();
    if (members.empty())
      throw EmptyCoverPresent("the empty sieve covers " + b.name(p));
    // Connected pieces under the order, numbered by their least member.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int x : members)
      for (int y : members)
        if (b.leq(x, y)) parent[find(x)] = find(y);
    std::vector<int> id(n, -1);
    for (int x : members) {
      int r = find(x);
      if (id[r] < 0) {
        id[r] = static_cast<int>(pieces_[p].size());
        pieces_[p].emplace_back();
      }
      piece_of_[p][x] = id[r];
      pieces_[p][id[r]].push_back(x);
    }
  }
}

std::uint64_t LocallyConstantSheaf::count(int p) const {
  return sat_pow(static_cast<std::uint64_t>(domain_.size()), pieces(p));
}

Section LocallyConstantSheaf::nth(int p, std::uint64_t i) const {
  const std::uint64_t v = domain_.size();
  Section x(pieces(p));
  for (int k = 0; k < pieces(p); ++k) {
    x[k] = static_cast<int>(i % v);
    i /= v;
  }
  return x;
}

Section LocallyConstantSheaf::restrict(int p, const Section& x, int q) const {
  const Basis& b = *t_->basis();
  if (!b.leq(q, p)) throw NotBelowRoot(b.name(q) + " is not below " + b.name(p));
  Section y(pieces(q));
  for (int k = 0; k < pieces(q); ++k) {
    const int g = pieces_[q][k].front();
    const int j = piece_of_[p][g];
    if (j < 0) throw InputError("smallest cover of " + b.name(q) + " leaves that of " + b.name(p));
    y[k] = x[j];
  }
  return y;
}

bool LocallyConstantSheaf::is_pure(const Section& x) const {
  return std::all_of(x.begin(), x.end(), [&](int v) { return v == x.front(); });
}

int LocallyConstantSheaf::value_at(int p, const Section& x, int q) const {
  Section y = restrict(p, x, q);
  return is_pure(y) ? y.front() : -1;
}

Sieve LocallyConstantSheaf::purity_sieve(int p, const Section& x) const {
  const Basis& b = *t_->basis();
  Mask m(b.size(), false);
  for (int q = 0; q < b.size(); ++q) m[q] = b.leq(q, p) && value_at(p, x, q) >= 0;
  return Sieve::generated(t_->basis(), p, m);
}

std::string LocallyConstantSheaf::show(int p, const Section& x) const {
  if (is_pure(x)) return domain_.show(x.front());
  Sieve s = purity_sieve(p, x);
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.generators().size(); ++i) {
    const int g = s.generators()[i];
    os << (i ? ", " : "") << t_->basis()->name(g) << ": " << domain_.show(value_at(p, x, g));
  }
  os << "}";
  return os.str();
}

std::optional<Section> LocallyConstantSheaf::solve(int p, const std::vector<int>& elements,
                                                   const std::vector<Section>& family) const {
  const Basis& b = *t_->basis();
  Section x(pieces(p));
  for (int k = 0; k < pieces(p); ++k) {
    const int m = pieces_[p][k].front();
    int found = -1;
    for (std::size_t i = 0; i < elements.size() && found < 0; ++i)
      if (b.leq(m, elements[i])) found = static_cast<int>(i);
    if (found < 0) return std::nullopt;
    const int j = piece_of_[elements[found]][m];
    if (j < 0) return std::nullopt;
    x[k] = family[found][j];
  }
  return x;
}

Section LocallyConstantSheaf::from_representative(int p, const Representative& r) const {
  const Basis& b = *t_->basis();
  if (!t_->covers(p, r.sieve)) throw NotCovering(r.sieve.to_string() + " does not cover " + b.name(p));
  for (int x : r.sieve.member_list())
    for (int y : r.sieve.member_list())
      if (b.leq(x, y) && r.value[x] != r.value[y])
        throw InputError("representative is not compatible at " + b.name(x) + " <= " + b.name(y));
  Section s(pieces(p));
  for (int k = 0; k < pieces(p); ++k) {
    const int m = pieces_[p][k].front();
    if (!r.sieve.contains(m)) throw NotCovering("cover misses " + b.name(m));
    s[k] = r.value[m];
  }
  return s;
}

LocallyConstantSheaf::Representative LocallyConstantSheaf::canonical_representative(
    int p, const Section& x) const {
  Representative r{purity_sieve(p, x), std::vector<int>(t_->size(), -1)};
  for (int q : r.sieve.member_list()) r.value[q] = value_at(p, x, q);
  return r;
}

bool LocallyConstantSheaf::equivalent(int p, const Representative& a,
                                      const Representative& b) const {
  Mask agree(t_->size(), false);
  for (int r = 0; r < t_->size(); ++r)
    agree[r] = a.sieve.contains(r) && b.sieve.contains(r) && a.value[r] == b.value[r];
  return t_->covers(p, Sieve::generated(t_->basis(), p, agree));
}

namespace {

struct FamilyChecker {
  const Presheaf& x;
  const SheafCheckOptions& opt;
  SheafReport& rep;
  std::mt19937_64& rng;

  std::string family_string(const std::vector<int>& els, const std::vector<Section>& fam) const {
    std::ostringstream os;
    const Basis& b = *x.topology()->basis();
    for (std::size_t i = 0; i < els.size(); ++i)
      os << (i ? ", " : "") << b.name(els[i]) << " -> " << x.show(els[i], fam[i]);
    return os.str();
  }

  void amalgamate(int p, const std::vector<int>& els, const std::vector<Section>& fam) {
    ++rep.families;
    auto matches = [&](const Section& s) {
      for (std::size_t i = 0; i < els.size(); ++i)
        if (x.restrict(p, s, els[i]) != fam[i]) return false;
      return true;
    };
    const Basis& b = *x.topology()->basis();
    if (x.count(p) <= opt.section_cap) {
      int found = 0;
      for (std::uint64_t i = 0; i < x.count(p) && found < 2; ++i)
        if (matches(x.nth(p, i))) ++found;
      if (found == 0) {
        ++rep.missing;
        if (rep.witnesses.size() < 10)
          rep.witnesses.push_back("no amalgamation at " + b.name(p) + " for " + family_string(els, fam));
      } else if (found > 1) {
        ++rep.nonunique;
        if (rep.witnesses.size() < 10)
          rep.witnesses.push_back("several amalgamations at " + b.name(p) + " for " +
                                  family_string(els, fam));
      }
      return;
    }
    ++rep.solver_instances;
    std::optional<Section> s = x.has_solver() ? x.solve(p, els, fam) : std::nullopt;
    if (!s || !matches(*s)) {
      ++rep.missing;
      if (rep.witnesses.size() < 10)
        rep.witnesses.push_back("no amalgamation found at " + b.name(p) + " for " +
                                family_string(els, fam));
    }
  }

  void run(int p, std::vector<int> els) {
    const Basis& b = *x.topology()->basis();
    std::sort(els.begin(), els.end());
    els.erase(std::unique(els.begin(), els.end()), els.end());
    const int k = static_cast<int>(els.size());
    std::vector<std::vector<std::vector<int>>> common(k, std::vector<std::vector<int>>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < i; ++j)
        for (int r = 0; r < b.size(); ++r)
          if (b.leq(r, els[i]) && b.leq(r, els[j])) common[i][j].push_back(r);
    std::vector<Section> fam(k);
    auto compatible = [&](int i) {
      for (int j = 0; j < i; ++j)
        for (int r : common[i][j])
          if (x.restrict(els[i], fam[i], r) != x.restrict(els[j], fam[j], r)) return false;
      return true;
    };
    std::uint64_t product = 1;
    for (int e : els) product = sat_mul(product, x.count(e));
    if (product <= opt.family_cap) {
      std::function<void(int)> all = [&](int i) {
        if (i == k) {
          amalgamate(p, els, fam);
          return;
        }
        for (std::uint64_t v = 0; v < x.count(els[i]); ++v) {
          fam[i] = x.nth(els[i], v);
          if (compatible(i)) all(i + 1);
        }
      };
      all(0);
      return;
    }
    for (std::uint64_t s = 0; s < opt.sample_families; ++s) {
      std::function<bool(int)> one = [&](int i) {
        if (i == k) return true;
        std::uniform_int_distribution<std::uint64_t> pick(0, x.count(els[i]) - 1);
        for (int attempt = 0; attempt < 64; ++attempt) {
          fam[i] = x.nth(els[i], pick(rng));
          if (compatible(i) && one(i + 1)) return true;
        }
        return false;
      };
      if (one(0)) amalgamate(p, els, fam);
    }
  }
};

std::vector<Section> sample_sections(const Presheaf& x, int p, const SheafCheckOptions& opt,
                                     std::mt19937_64& rng) {
  std::vector<Section> out;
  if (x.count(p) <= opt.sample_families) {
    for (std::uint64_t i = 0; i < x.count(p); ++i) out.push_back(x.nth(p, i));
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, x.count(p) - 1);
    for (std::uint64_t i = 0; i < opt.sample_families; ++i) out.push_back(x.nth(p, pick(rng)));
  }
  return out;
}

}  // namespace

SheafReport check_presheaf_laws(const Presheaf& x, const SheafCheckOptions& opt) {
  SheafReport rep;
  std::mt19937_64 rng(opt.seed);
  const Basis& b = *x.topology()->basis();
  const int n = b.size();
  for (int p = 0; p < n; ++p)
    for (const Section& s : sample_sections(x, p, opt, rng)) {
      ++rep.law_instances;
      if (x.restrict(p, s, p) != s) {
        ++rep.law_failures;
        rep.witnesses.push_back("identity law fails at " + b.name(p) + " for " + x.show(p, s));
      }
      for (int q = 0; q < n; ++q) {
        if (!b.leq(q, p)) continue;
        Section sq = x.restrict(p, s, q);
        for (int r = 0; r < n; ++r)
          if (b.leq(r, q) && x.restrict(q, sq, r) != x.restrict(p, s, r)) {
            ++rep.law_failures;
            if (rep.witnesses.size() < 10)
              rep.witnesses.push_back("composition fails for " + b.name(p) + " > " + b.name(q) +
                                      " > " + b.name(r));
          }
      }
    }
  return rep;
}

SheafReport sheaf_check(const Presheaf& x, const std::vector<Sieve>& sample,
                        const SheafCheckOptions& opt) {
  SheafReport rep;
  std::mt19937_64 rng(opt.seed);
  FamilyChecker fc{x, opt, rep, rng};
  for (const Sieve& s : sample) {
    if (!x.topology()->covers(s.root(), s)) continue;
    ++rep.covers;
    fc.run(s.root(), s.generators());
  }
  return rep;
}

SheafReport sheaf_check_covering_system(const Presheaf& x, const CoveringSystem& system,
                                        const SheafCheckOptions& opt) {
  SheafReport rep;
  std::mt19937_64 rng(opt.seed);
  FamilyChecker fc{x, opt, rep, rng};
  for (int a = 0; a < system.basis->size(); ++a)
    for (const auto& alpha : system.families[a]) {
      ++rep.covers;
      fc.run(a, alpha);
    }
  return rep;
}

Verdict pure_density_check(const LocallyConstantSheaf& x, int p, const SheafCheckOptions& opt) {
  if (x.domain().kind == ValueDomain::Kind::Seq)
    throw UnsupportedSort("pure elements are not dense in " + x.domain().name());
  std::mt19937_64 rng(opt.seed);
  for (const Section& s : sample_sections(x, p, opt, rng)) {
    Sieve ps = x.purity_sieve(p, s);
    if (!x.topology()->covers(p, ps))
      return Verdict::fail(0, "purity sieve " + ps.to_string() + " of " + x.show(p, s) +
                                  " does not cover");
  }
  return Verdict::ok();
}

ContinuousMap section_to_discrete_map(const LocallyConstantSheaf& nat, int p, const Section& x,
                                      const TopologyPtr& discrete) {
  const Basis& b = *nat.topology()->basis();
  std::vector<Mask> rel(b.size(), Mask(discrete->size(), false));
  for (int r = 0; r < b.size(); ++r) {
    if (!b.leq(r, p)) continue;
    const int v = nat.value_at(p, x, r);
    if (v >= 0 && v < discrete->size()) rel[r][v] = true;
  }
  rel = close_relation(*nat.topology(), *discrete, std::move(rel));
  return ContinuousMap::from_relation(nat.topology(), discrete, std::move(rel));
}

ContinuousMap section_to_sequence_map(const LocallyConstantSheaf& seq, int top,
                                      const Section& x, const TruncatedSpace& target) {
  const Basis& b = *seq.topology()->basis();
  const ValueDomain& d = seq.domain();
  if (d.kind != ValueDomain::Kind::Seq || d.bound != target.branch() || d.length != target.depth())
    throw InputError("target space does not match the sequence sheaf");
  std::vector<Mask> rel(b.size(), Mask(target.size(), false));
  for (int r = 0; r < b.size(); ++r) {
    if (!b.leq(r, top)) continue;
    const int v = seq.value_at(top, x, r);
    if (v < 0) continue;
    const FinSeq s = d.decode(v);
    for (int w = 0; w < target.size(); ++w) rel[r][w] = seq_leq(s, target.seq(w));
  }
  rel = close_relation(*seq.topology(), *target.topology(), std::move(rel));
  return ContinuousMap::from_relation(seq.topology(), target.topology(), std::move(rel));
}

}  // namespace ftop
