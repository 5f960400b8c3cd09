#pragma once

#include <cstddef>
#include <vector>

namespace optbt::detail {

// Calls fn(tuple) for every element of the cartesian product of `domains`,
// last position varying fastest. One call with an empty tuple when
// `domains` is empty; none if any domain is empty.
template <class T, class Fn>
void for_each_tuple(const std::vector<std::vector<T>>& domains, Fn&& fn) {
  for (const auto& d : domains) {
    if (d.empty()) return;
  }
  std::vector<std::size_t> idx(domains.size(), 0);
  std::vector<T> tuple;
  while (true) {
    tuple.clear();
    for (std::size_t i = 0; i < idx.size(); ++i) tuple.push_back(domains[i][idx[i]]);
    fn(tuple);
    std::size_t k = idx.size();
    while (k > 0 && ++idx[k - 1] == domains[k - 1].size()) {
      idx[k - 1] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

}  // namespace optbt::detail
