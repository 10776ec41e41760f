#include "altgdmin/fed/topology.hpp"

#include "altgdmin/errors.hpp"

namespace altgdmin {

FederationTopology partition_columns(std::size_t q, std::size_t gamma,
                                     PartitionPolicy policy) {
  if (gamma < 1 || gamma > q)
    throw BadGamma("partition_columns: need 1 <= gamma <= q");
  FederationTopology topo;
  topo.gamma = gamma;
  topo.shards.resize(gamma);
  if (policy == PartitionPolicy::kStrided) {
    for (std::size_t k = 0; k < q; ++k)
      topo.shards[k % gamma].push_back(static_cast<std::uint32_t>(k));
    return topo;
  }
  const std::size_t base = q / gamma;
  const std::size_t extra = q % gamma;
  std::size_t next = 0;
  for (std::size_t node = 0; node < gamma; ++node) {
    const std::size_t take = base + (node < extra ? 1 : 0);
    for (std::size_t i = 0; i < take; ++i)
      topo.shards[node].push_back(static_cast<std::uint32_t>(next++));
  }
  return topo;
}

}  // namespace altgdmin
