#pragma once

#include <string>

#include "altgdmin/problems/measure.hpp"

namespace altgdmin {

/// Sidecar metadata stored next to every exported dataset.
struct DatasetMeta {
  std::string problem;  // "lrcs" | "lrpr" | "lrmc"
  std::size_t n = 0, q = 0, r = 0;
  std::size_t m = 0;    // lrcs/lrpr
  double p = 0.0;       // lrmc
  double kappa = 1.0;
  double mu = 1.0;
  std::uint64_t seed = 0;  // master seed the dataset was generated from
};

// Export layout (prefix + suffix):
//   <prefix>.json        sidecar {problem, n, q, r, m|p, seeds, kappa, mu}
//   <prefix>.Y.mat       measurements in the binary matrix format
//   <prefix>.omega.bin   LRMC only: |Omega| sorted (u32 row, u32 col) pairs,
//                        little-endian, lexicographic by (row, col)
//   <prefix>.values.mat  LRMC only: 1 x |Omega| observed values, same order

void save_dataset(const std::string& prefix, const LrcsData& d,
                  const DatasetMeta& meta);
void save_dataset(const std::string& prefix, const LrprData& d,
                  const DatasetMeta& meta);
void save_dataset(const std::string& prefix, const LrmcData& d,
                  const DatasetMeta& meta);

LrcsData load_lrcs_dataset(const std::string& prefix, DatasetMeta* meta_out);
LrprData load_lrpr_dataset(const std::string& prefix, DatasetMeta* meta_out);
LrmcData load_lrmc_dataset(const std::string& prefix, DatasetMeta* meta_out);

}  // namespace altgdmin
