#include "altgdmin/problems/dataset_io.hpp"

#include <algorithm>
#include <json.hpp>

#include "altgdmin/core/io.hpp"
#include "altgdmin/errors.hpp"

namespace altgdmin {

namespace {

using json = nlohmann::ordered_json;

json common_sidecar(const DatasetMeta& meta) {
  json j;
  j["format_version"] = 1;
  j["problem"] = meta.problem;
  j["n"] = meta.n;
  j["q"] = meta.q;
  j["r"] = meta.r;
  j["seed"] = meta.seed;
  return j;
}

void write_sidecar(const std::string& prefix, const json& j) {
  write_text_file(prefix + ".json", j.dump(2) + "\n");
}

json read_sidecar(const std::string& prefix, const std::string& expected) {
  json j;
  try {
    j = json::parse(read_text_file(prefix + ".json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad dataset sidecar: ") + e.what());
  }
  if (j.value("problem", "") != expected)
    throw IoError("dataset sidecar problem mismatch");
  return j;
}

DatasetMeta meta_from(const json& j) {
  DatasetMeta meta;
  meta.problem = j.value("problem", "");
  meta.n = j.at("n").get<std::size_t>();
  meta.q = j.at("q").get<std::size_t>();
  meta.r = j.at("r").get<std::size_t>();
  meta.m = j.value("m", std::size_t{0});
  meta.p = j.value("p", 0.0);
  meta.kappa = j.value("kappa", 1.0);
  meta.mu = j.value("mu", 1.0);
  meta.seed = j.value("seed", std::uint64_t{0});
  return meta;
}

void put_u32le_bytes(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32le_bytes(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void save_dataset(const std::string& prefix, const LrcsData& d,
                  const DatasetMeta& meta) {
  json j = common_sidecar(meta);
  j["m"] = d.m;
  j["kappa"] = meta.kappa;
  j["mu"] = meta.mu;
  j["operator_kind"] =
      d.kind == OperatorKind::kIdentity ? "identity" : "gaussian";
  j["noise_sigma"] = d.noise_sigma;
  j["seeds"] = d.operator_seeds;
  write_sidecar(prefix, j);
  write_matrix_file(prefix + ".Y.mat", d.y);
}

void save_dataset(const std::string& prefix, const LrprData& d,
                  const DatasetMeta& meta) {
  json j = common_sidecar(meta);
  j["m"] = d.m;
  j["kappa"] = meta.kappa;
  j["mu"] = meta.mu;
  j["operator_kind"] =
      d.kind == OperatorKind::kIdentity ? "identity" : "gaussian";
  j["seeds"] = d.operator_seeds;
  write_sidecar(prefix, j);
  write_matrix_file(prefix + ".Y.mat", d.z);
}

void save_dataset(const std::string& prefix, const LrmcData& d,
                  const DatasetMeta& meta) {
  json j = common_sidecar(meta);
  j["p"] = d.p;
  j["kappa"] = meta.kappa;
  j["mu"] = meta.mu;
  j["noise_sigma"] = d.noise_sigma;
  j["omega_size"] = d.omega_size();
  write_sidecar(prefix, j);

  // (row, col) pairs sorted lexicographically, plus values in the same order.
  std::vector<std::size_t> order;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(d.omega_size());
  for (std::size_t k = 0; k < d.q; ++k) {
    const auto rows = d.rows_of(k);
    for (std::size_t t = 0; t < rows.size(); ++t)
      pairs.emplace_back(rows[t], static_cast<std::uint32_t>(k));
  }
  order.resize(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a] < pairs[b];
  });

  std::string blob;
  blob.reserve(8 * pairs.size());
  DenseMatrix vals(1, pairs.size());
  // values vector is column-major over Omega by construction; reindex.
  std::vector<double> flat_values(d.values.begin(), d.values.end());
  for (std::size_t i = 0; i < order.size(); ++i) {
    put_u32le_bytes(blob, pairs[order[i]].first);
    put_u32le_bytes(blob, pairs[order[i]].second);
    vals(0, i) = flat_values[order[i]];
  }
  write_text_file(prefix + ".omega.bin", blob);
  write_matrix_file(prefix + ".values.mat", vals);
}

LrcsData load_lrcs_dataset(const std::string& prefix, DatasetMeta* meta_out) {
  const json j = read_sidecar(prefix, "lrcs");
  LrcsData d;
  d.y = read_matrix_file(prefix + ".Y.mat");
  d.n = j.at("n").get<std::size_t>();
  d.q = j.at("q").get<std::size_t>();
  d.m = j.at("m").get<std::size_t>();
  d.kind = j.value("operator_kind", "gaussian") == "identity"
               ? OperatorKind::kIdentity
               : OperatorKind::kGaussian;
  d.noise_sigma = j.value("noise_sigma", 0.0);
  d.operator_seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (d.y.rows() != d.m || d.y.cols() != d.q ||
      d.operator_seeds.size() != d.q)
    throw IoError("lrcs dataset is inconsistent");
  if (meta_out) *meta_out = meta_from(j);
  return d;
}

LrprData load_lrpr_dataset(const std::string& prefix, DatasetMeta* meta_out) {
  const json j = read_sidecar(prefix, "lrpr");
  LrprData d;
  d.z = read_matrix_file(prefix + ".Y.mat");
  d.n = j.at("n").get<std::size_t>();
  d.q = j.at("q").get<std::size_t>();
  d.m = j.at("m").get<std::size_t>();
  d.kind = j.value("operator_kind", "gaussian") == "identity"
               ? OperatorKind::kIdentity
               : OperatorKind::kGaussian;
  d.operator_seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (d.z.rows() != d.m || d.z.cols() != d.q ||
      d.operator_seeds.size() != d.q)
    throw IoError("lrpr dataset is inconsistent");
  for (std::size_t i = 0; i < d.z.size(); ++i)
    if (d.z.data()[i] < 0.0) throw IoError("lrpr dataset has negative entry");
  if (meta_out) *meta_out = meta_from(j);
  return d;
}

LrmcData load_lrmc_dataset(const std::string& prefix, DatasetMeta* meta_out) {
  const json j = read_sidecar(prefix, "lrmc");
  LrmcData d;
  d.n = j.at("n").get<std::size_t>();
  d.q = j.at("q").get<std::size_t>();
  d.p = j.at("p").get<double>();
  d.noise_sigma = j.value("noise_sigma", 0.0);

  const std::string blob = read_text_file(prefix + ".omega.bin");
  if (blob.size() % 8 != 0) throw IoError("omega file size not a pair multiple");
  const std::size_t count = blob.size() / 8;
  const DenseMatrix vals = read_matrix_file(prefix + ".values.mat");
  if (vals.rows() != 1 || vals.cols() != count)
    throw IoError("omega/value count mismatch");

  // Rebuild the per-column layout from (row, col) order.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> cols(d.q);
  const auto* p = reinterpret_cast<const unsigned char*>(blob.data());
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t row = get_u32le_bytes(p + 8 * i);
    const std::uint32_t col = get_u32le_bytes(p + 8 * i + 4);
    if (row >= d.n || col >= d.q) throw IoError("omega index out of range");
    cols[col].emplace_back(row, vals(0, i));
  }
  d.col_ptr.assign(d.q + 1, 0);
  for (std::size_t k = 0; k < d.q; ++k) {
    std::sort(cols[k].begin(), cols[k].end());
    for (const auto& [row, v] : cols[k]) {
      d.row_idx.push_back(row);
      d.values.push_back(v);
    }
    d.col_ptr[k + 1] = static_cast<std::uint32_t>(d.row_idx.size());
  }
  if (meta_out) *meta_out = meta_from(j);
  return d;
}

}  // namespace altgdmin
