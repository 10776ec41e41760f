#include "altgdmin/solvers/trace.hpp"

#include <json.hpp>

#include "altgdmin/core/io.hpp"
#include "altgdmin/errors.hpp"

namespace altgdmin {

std::string RunTrace::to_csv() const {
  CsvWriter csv("iter,se2,sef,max_col_err,objective,flops,seconds");
  for (const TraceRecord& rec : records) {
    csv.add_cell(static_cast<std::int64_t>(rec.iter));
    csv.add_cell(rec.se2);
    csv.add_cell(rec.sef);
    csv.add_cell(rec.max_col_err);
    csv.add_cell(rec.objective);
    csv.add_cell(rec.flops);
    csv.add_cell(0.0);  // wall time is not reproducible; kept in memory only
    csv.end_row();
  }
  return csv.str();
}

void save_factor_estimate(const std::string& prefix,
                          const FactorEstimate& e) {
  write_matrix_file(prefix + ".U.mat", e.u.matrix());
  write_matrix_file(prefix + ".B.mat", e.b);
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["n"] = e.u.n();
  j["r"] = e.u.r();
  j["q"] = e.b.cols();
  write_text_file(prefix + ".json", j.dump(2) + "\n");
}

FactorEstimate load_factor_estimate(const std::string& prefix) {
  FactorEstimate e;
  try {
    e.u = OrthonormalBasis(read_matrix_file(prefix + ".U.mat"));
  } catch (const Error& err) {
    throw IoError(std::string("estimate U is not orthonormal: ") +
                  err.what());
  }
  e.b = read_matrix_file(prefix + ".B.mat");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(read_text_file(prefix + ".json"));
  } catch (const nlohmann::json::exception& err) {
    throw IoError(std::string("bad estimate sidecar: ") + err.what());
  }
  if (j.value("n", std::size_t{0}) != e.u.n() ||
      j.value("r", std::size_t{0}) != e.u.r() ||
      j.value("q", std::size_t{0}) != e.b.cols())
    throw IoError("estimate sidecar does not match the matrices");
  return e;
}

}  // namespace altgdmin
