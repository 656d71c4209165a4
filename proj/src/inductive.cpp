#include "ftop/inductive.hpp"

#include <algorithm>
#include <functional>

#include "ftop/errors.hpp"

namespace ftop {

InductiveDefinition::InductiveDefinition(int carrier, std::vector<Rule> rules)
    : carrier_(carrier), rules_(std::move(rules)) {
  if (carrier_ < 0) throw InputError("negative carrier size");
  auto in = [&](int x) { return x >= 0 && x < carrier_; };
  for (const Rule& r : rules_) {
    if (!in(r.conclusion)) throw InputError("rule conclusion outside the carrier");
    for (int x : r.premises)
      if (!in(x)) throw InputError("rule premise outside the carrier");
  }
}

Mask inductive_close(const InductiveDefinition& phi, const Mask& u) {
  Mask a(phi.carrier(), false);
  for (int x = 0; x < phi.carrier() && x < static_cast<int>(u.size()); ++x) a[x] = u[x];
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : phi.rules()) {
      if (a[r.conclusion]) continue;
      if (std::all_of(r.premises.begin(), r.premises.end(), [&](int x) { return a[x]; })) {
        a[r.conclusion] = true;
        changed = true;
      }
    }
  }
  return a;
}

std::vector<int> set_compactness_witness(const InductiveDefinition& phi, const Mask& u, int a) {
  if (a < 0 || a >= phi.carrier()) throw InputError("element outside the carrier");
  if (!inductive_close(phi, u)[a]) throw NotDerivable("element is not in the inductive closure");
  std::vector<int> pool;
  for (int x = 0; x < phi.carrier() && x < static_cast<int>(u.size()); ++x)
    if (u[x]) pool.push_back(x);

  std::vector<int> chosen;
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t start,
                                                              std::size_t left) {
    if (left == 0) {
      Mask v(phi.carrier(), false);
      for (int x : chosen) v[x] = true;
      return static_cast<bool>(inductive_close(phi, v)[a]);
    }
    for (std::size_t i = start; i + left <= pool.size(); ++i) {
      chosen.push_back(pool[i]);
      if (search(i + 1, left - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t k = 0; k <= pool.size(); ++k)
    if (search(0, k)) return chosen;
  throw NotDerivable("no witness found");
}

}  // namespace ftop
