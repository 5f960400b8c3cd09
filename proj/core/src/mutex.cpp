#include "mutex.hpp"

namespace optbt::planner::detail {

using world::AtomId;

Mutexes::Mutexes(const world::Domain& domain, const world::WorldState& s0) {
  const std::size_t n = domain.literal_count();
  words_ = (n + 63) / 64;
  rows_.assign(n * words_, 0);
  auto row = [&](AtomId p) { return rows_.data() + p * words_; };
  auto set = [&](AtomId p, AtomId q) {
    std::uint64_t& w = row(p)[q / 64];
    const std::uint64_t bit = std::uint64_t{1} << (q % 64);
    if (w & bit) return false;
    w |= bit;
    row(q)[p / 64] |= std::uint64_t{1} << (p % 64);
    return true;
  };

  for (AtomId p : s0.atoms()) {
    for (AtomId q : s0.atoms()) set(p, q);
  }

  std::vector<AtomId> pre;
  std::vector<std::uint64_t> compat(words_);
  std::vector<std::uint64_t> reach(words_);
  bool changed = true;
  while (changed) {
    changed = false;
    std::fill(reach.begin(), reach.end(), 0);
    for (AtomId p = 0; p < n; ++p) {
      if (pair(p, p)) reach[p / 64] |= std::uint64_t{1} << (p % 64);
    }
    for (const auto& a : domain.actions()) {
      pre.clear();
      for (auto l : a.pre) {
        if (!l.negated()) pre.push_back(l.atom());
      }
      bool applicable = true;
      for (std::size_t i = 0; i < pre.size() && applicable; ++i) {
        for (std::size_t j = i; j < pre.size() && applicable; ++j) applicable = pair(pre[i], pre[j]);
      }
      if (!applicable) continue;

      // Atoms that can hold alongside the whole precondition and survive a.
      compat = reach;
      for (AtomId r : pre) {
        const std::uint64_t* rr = row(r);
        for (std::size_t w = 0; w < words_; ++w) compat[w] &= rr[w];
      }
      for (AtomId d : a.del) compat[d / 64] &= ~(std::uint64_t{1} << (d % 64));

      for (AtomId p : a.add) {
        for (AtomId q : a.add) changed |= set(p, q);
        for (std::size_t w = 0; w < words_; ++w) {
          std::uint64_t fresh = compat[w] & ~row(p)[w];
          while (fresh) {
            const auto q = static_cast<AtomId>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(fresh)));
            fresh &= fresh - 1;
            changed |= set(p, q);
          }
        }
      }
    }
  }
}

bool Mutexes::unreachable(const world::ConditionSet& c) const {
  for (auto i = c.begin(); i != c.end(); ++i) {
    if (i->negated()) continue;
    for (auto j = i; j != c.end(); ++j) {
      if (!j->negated() && !pair(i->atom(), j->atom())) return true;
    }
  }
  return false;
}

}  // namespace optbt::planner::detail
