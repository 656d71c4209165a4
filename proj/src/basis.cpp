#include "ftop/basis.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ftop/errors.hpp"

namespace ftop {

Basis::Basis(std::vector<std::string> names, std::vector<std::vector<bool>> leq)
    : names_(std::move(names)), leq_(std::move(leq)) {
  const int n = size();
  if (static_cast<int>(leq_.size()) != n)
    throw InvalidBasis("order matrix has wrong size");
  for (const auto& row : leq_)
    if (static_cast<int>(row.size()) != n)
      throw InvalidBasis("order matrix has wrong size");
  for (int a = 0; a < n; ++a)
    if (!leq_[a][a]) throw InvalidBasis("order is not reflexive at " + names_[a]);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!leq_[a][b]) continue;
      for (int c = 0; c < n; ++c)
        if (leq_[b][c] && !leq_[a][c])
          throw InvalidBasis("order is not transitive: " + names_[a] + " <= " +
                             names_[b] + " <= " + names_[c]);
    }
  down_.assign(n, Mask(n, false));
  for (int a = 0; a < n; ++a)
    for (int v = 0; v < n; ++v) down_[a][v] = leq_[v][a];
  for (int a = 0; a < n; ++a) {
    if (!by_name_.emplace(names_[a], a).second)
      throw InvalidBasis("duplicate element name " + names_[a]);
  }
}

Basis Basis::from_pairs(std::vector<std::string> names,
                        const std::vector<std::pair<int, int>>& pairs) {
  const int n = static_cast<int>(names.size());
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a) leq[a][a] = true;
  for (auto [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw UnknownElement("order pair refers to an unknown element");
    leq[a][b] = true;
  }
  // Warshall.
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      if (leq[a][k])
        for (int b = 0; b < n; ++b)
          if (leq[k][b]) leq[a][b] = true;
  return Basis(std::move(names), std::move(leq));
}

std::optional<int> Basis::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

int Basis::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw UnknownElement("unknown element " + std::string(name));
  return *i;
}

std::vector<int> Basis::below(int a) const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v)
    if (leq_[v][a]) out.push_back(v);
  return out;
}

bool Basis::disjoint(int a, int b) const {
  for (int v = 0; v < size(); ++v)
    if (leq_[v][a] && leq_[v][b]) return false;
  return true;
}

void Basis::check(int a) const {
  if (a < 0 || a >= size())
    throw UnknownElement("element index " + std::to_string(a) + " out of range");
}

std::vector<int> maximal_elements(const Basis& basis, const Mask& set) {
  std::vector<int> out;
  const int n = basis.size();
  for (int v = 0; v < n; ++v) {
    if (!set[v]) continue;
    bool dominated = false;
    for (int w = 0; w < n && !dominated; ++w) {
      if (w == v || !set[w]) continue;
      if (basis.strictly_below(v, w)) dominated = true;
      // Equivalent elements: keep the smallest index.
      else if (w < v && basis.leq(v, w) && basis.leq(w, v)) dominated = true;
    }
    if (!dominated) out.push_back(v);
  }
  return out;
}

Sieve::Sieve(BasisPtr basis, int root, const std::vector<int>& generators)
    : basis_(std::move(basis)), root_(root) {
  basis_->check(root_);
  members_.assign(basis_->size(), false);
  for (int g : generators) {
    basis_->check(g);
    if (!basis_->leq(g, root_))
      throw InvalidSieve("generator " + basis_->name(g) + " is not below root " +
                         basis_->name(root_));
    const Mask& d = basis_->down(g);
    for (int v = 0; v < basis_->size(); ++v)
      if (d[v]) members_[v] = true;
  }
  compute_generators();
}

Sieve::Sieve(BasisPtr basis, int root, Mask members, int)
    : basis_(std::move(basis)), root_(root), members_(std::move(members)) {
  compute_generators();
}

void Sieve::compute_generators() { generators_ = maximal_elements(*basis_, members_); }

Sieve Sieve::maximal(BasisPtr basis, int a) { return Sieve(std::move(basis), a, {a}); }

Sieve Sieve::empty(BasisPtr basis, int a) { return Sieve(std::move(basis), a, {}); }

Sieve Sieve::generated(BasisPtr basis, int root, const Mask& set) {
  basis->check(root);
  const int n = basis->size();
  Mask m(n, false);
  for (int g = 0; g < n; ++g) {
    if (!set[g] || !basis->leq(g, root)) continue;
    const Mask& d = basis->down(g);
    for (int v = 0; v < n; ++v)
      if (d[v]) m[v] = true;
  }
  return Sieve(std::move(basis), root, std::move(m), 0);
}

Sieve Sieve::interior(BasisPtr basis, int root, const Mask& set) {
  basis->check(root);
  const int n = basis->size();
  Mask m(n, false);
  for (int v = 0; v < n; ++v) {
    if (!basis->leq(v, root) || !set[v]) continue;
    const Mask& d = basis->down(v);
    bool inside = true;
    for (int w = 0; w < n && inside; ++w)
      if (d[w] && !set[w]) inside = false;
    m[v] = inside;
  }
  return Sieve(std::move(basis), root, std::move(m), 0);
}

std::vector<int> Sieve::member_list() const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(members_.size()); ++v)
    if (members_[v]) out.push_back(v);
  return out;
}

bool Sieve::subset_of(const Sieve& other) const {
  for (std::size_t v = 0; v < members_.size(); ++v)
    if (members_[v] && !other.members_[v]) return false;
  return true;
}

Sieve Sieve::restrict(int b) const {
  basis_->check(b);
  Mask m(members_.size(), false);
  const Mask& d = basis_->down(b);
  for (std::size_t v = 0; v < m.size(); ++v) m[v] = members_[v] && d[v];
  return Sieve(basis_, b, std::move(m), 0);
}

std::string Sieve::to_string() const {
  std::ostringstream os;
  os << "down{";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (i) os << ", ";
    os << basis_->name(generators_[i]);
  }
  os << "} on " << basis_->name(root_);
  return os.str();
}

namespace {

// Backtracking over ↓a, processed from the top down so that every element
// is decided after all elements above it.
struct SieveEnumerator {
  const BasisPtr& basis;
  std::vector<int> order;
  const std::function<bool(const Sieve&)>& visit;
  int root;
  Mask required;
  std::vector<int> state;  // -1 undecided, 0 out, 1 in
  std::size_t count = 0;
  bool stop = false;

  void run(std::size_t i) {
    if (stop) return;
    if (i == order.size()) {
      Mask m(basis->size(), false);
      for (std::size_t k = 0; k < order.size(); ++k) m[order[k]] = state[order[k]] == 1;
      ++count;
      if (!visit(Sieve::generated(basis, root, m))) stop = true;
      return;
    }
    const int x = order[i];
    bool must_in = required[x], must_out = false;
    for (std::size_t k = 0; k < i; ++k) {
      const int y = order[k];
      if (state[y] == 1 && basis->leq(x, y)) must_in = true;
      if (state[y] == 0 && basis->leq(y, x)) must_out = true;
    }
    if (must_in && must_out) return;
    if (!must_in) {
      state[x] = 0;
      run(i + 1);
    }
    if (!must_out) {
      state[x] = 1;
      run(i + 1);
    }
    state[x] = -1;
  }
};

}  // namespace

std::size_t enumerate_sieves(const BasisPtr& basis, int a, const Mask& required,
                             const std::function<bool(const Sieve&)>& visit) {
  basis->check(a);
  SieveEnumerator e{basis, basis->below(a), visit, a, required,
                    std::vector<int>(basis->size(), -1)};
  if (static_cast<int>(e.required.size()) != basis->size()) e.required.assign(basis->size(), false);
  auto downsize = [&](int v) {
    return std::count(basis->down(v).begin(), basis->down(v).end(), true);
  };
  std::stable_sort(e.order.begin(), e.order.end(),
                   [&](int x, int y) { return downsize(x) > downsize(y); });
  e.run(0);
  return e.count;
}

}  // namespace ftop
