#pragma once

#include <set>
#include <vector>

#include "mddc/build.hpp"
#include "mddc/domain_store.hpp"
#include "oracle.hpp"

namespace testing_support {

inline const std::vector<std::vector<int>>& pairs_rows() {
  static const std::vector<std::vector<int>> rows = {{1, 3}, {2, 1}, {3, 3}, {4, 1}, {4, 2}, {4, 3}};
  return rows;
}

inline mddc::DomainStore pairs_domains() { return mddc::DomainStore({{1, 2, 3, 4}, {1, 2, 3}}); }

inline mddc::Mdd pairs_reduced() {
  return mddc::build_from_tuples({{0, 1}, pairs_rows()}, pairs_domains());
}

inline oracle::Domains to_sets(const mddc::DomainStore& d) {
  oracle::Domains out(d.num_vars());
  for (int i = 0; i < d.num_vars(); ++i)
    for (int v : d.current_values(i)) out[i].insert(v);
  return out;
}

inline mddc::DomainStore store_from(const oracle::Domains& doms) {
  std::vector<std::vector<int>> v;
  for (const auto& s : doms) v.emplace_back(s.begin(), s.end());
  return mddc::DomainStore(v);
}

}  // namespace testing_support
