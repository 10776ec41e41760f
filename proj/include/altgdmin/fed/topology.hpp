#pragma once

#include <cstdint>
#include <vector>

namespace altgdmin {

enum class PartitionPolicy { kContiguous, kStrided };

/// Column shards for a vertical federation: gamma disjoint index sets
/// covering [0, q).
struct FederationTopology {
  std::size_t gamma = 1;
  std::vector<std::vector<std::uint32_t>> shards;  // node -> column ids

  std::size_t num_columns() const {
    std::size_t total = 0;
    for (const auto& s : shards) total += s.size();
    return total;
  }
};

/// Contiguous default: blocks of size q/gamma, with the first (q mod gamma)
/// nodes taking one extra column. Strided: column k goes to node k mod gamma.
FederationTopology partition_columns(std::size_t q, std::size_t gamma,
                                     PartitionPolicy policy =
                                         PartitionPolicy::kContiguous);

}  // namespace altgdmin
