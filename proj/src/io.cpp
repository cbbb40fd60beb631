#include "pvc/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "pvc/error.hpp"

namespace pvc {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const MCEstimate& e) {
  return Json{{"mean", e.mean},
              {"std_error", e.std_error},
              {"reps", e.reps},
              {"master_seed", e.master_seed},
              {"degenerate_count", e.degenerate_count}};
}

MCEstimate mc_estimate_from_json(const Json& j) {
  MCEstimate e;
  e.mean = j.at("mean").get<double>();
  e.std_error = j.at("std_error").get<double>();
  e.reps = j.at("reps").get<std::int64_t>();
  e.master_seed = j.at("master_seed").get<std::uint64_t>();
  e.degenerate_count = j.at("degenerate_count").get<std::int64_t>();
  return e;
}

namespace {

Json estimates(const std::vector<MCEstimate>& v) {
  Json a = Json::array();
  for (const auto& e : v) a.push_back(to_json(e));
  return a;
}

}  // namespace

Json to_json(const TailReport& r) {
  return Json{{"d", r.d},
              {"alpha", r.alpha},
              {"t_grid", r.t_grid},
              {"empirical_prob", estimates(r.empirical_prob)},
              {"pointy_count", estimates(r.pointy_count)},
              {"pair_count", estimates(r.pair_count)},
              {"exact_expected_count", r.exact_expected_count},
              {"asymptotic", r.asymptotic},
              {"reps", r.reps},
              {"master_seed", r.master_seed},
              {"degenerate_count", r.degenerate_count},
              {"radius_cap_retries", r.radius_cap_retries}};
}

Json to_json(const ExtremeReport& r) {
  return Json{{"d", r.d},
              {"n", r.n},
              {"rho", r.rho},
              {"buffer", r.buffer},
              {"master_seed", r.master_seed},
              {"maxima", r.maxima},
              {"nuclei_in_box", r.nuclei_in_box},
              {"normalized", r.normalized},
              {"threshold", r.threshold},
              {"theta_hat", to_json(r.theta_hat)},
              {"ks_gumbel", r.ks_gumbel},
              {"rejected_replicates", r.rejected_replicates},
              {"total_nuclei", r.total_nuclei}};
}

Json cell_to_json(const TypicalCell& cell) {
  auto vec = [](const Vec& v) { return std::vector<double>(v.begin(), v.end()); };
  Json gens = Json::array();
  for (const auto& g : cell.generators) gens.push_back(vec(g));
  Json verts = Json::array();
  for (const auto& v : cell.vertices) {
    const auto idx = v.nuclei();
    verts.push_back(Json{{"location", vec(v.location)},
                         {"nucleus_indices", std::vector<std::int32_t>(idx.begin(), idx.end())},
                         {"pointy", v.pointy}});
  }
  return Json{{"generators", gens},
              {"vertices", verts},
              {"D", cell.max_vertex_distance},
              {"sampled_radius", cell.sampled_radius},
              {"seed", cell.master_seed},
              {"replicate_index", cell.replicate_index}};
}

namespace {

std::string cell_text(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_string()) return v.get<std::string>();
  throw Error(ErrorCode::NotTabular, "table cell is not a scalar");
}

bool is_estimate(const Json& v) { return v.is_object() && v.contains("mean") && v.contains("std_error"); }

// One row per threshold; every array aligned with t_grid becomes a column,
// estimates become a value column and a standard-error column.
std::string grid_csv(const Json& r) {
  const auto& t = r.at("t_grid");
  std::vector<std::string> keys;
  for (auto it = r.begin(); it != r.end(); ++it) {
    if (it.key() != "t_grid" && it->is_array() && it->size() == t.size()) keys.push_back(it.key());
  }
  std::string out = "t";
  for (const auto& k : keys) {
    out += "," + k;
    if (!t.empty() && is_estimate(r.at(k)[0])) out += "," + k + "_se";
  }
  out += '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += cell_text(t[i]);
    for (const auto& k : keys) {
      const Json& v = r.at(k)[i];
      if (is_estimate(v)) {
        out += "," + cell_text(v.at("mean")) + "," + cell_text(v.at("std_error"));
      } else {
        out += "," + cell_text(v);
      }
    }
    out += '\n';
  }
  return out;
}

std::string maxima_csv(const Json& r) {
  const auto& m = r.at("maxima");
  const bool has_norm = r.contains("normalized") && r.at("normalized").size() == m.size();
  const bool has_count = r.contains("nuclei_in_box") && r.at("nuclei_in_box").size() == m.size();
  std::string out = "replicate,maximum";
  if (has_norm) out += ",normalized";
  if (has_count) out += ",nuclei_in_box";
  out += '\n';
  for (std::size_t k = 0; k < m.size(); ++k) {
    out += std::to_string(k) + "," + cell_text(m[k]);
    if (has_norm) out += "," + cell_text(r.at("normalized")[k]);
    if (has_count) out += "," + cell_text(r.at("nuclei_in_box")[k]);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string results_to_csv(const Json& results) {
  try {
    if (results.is_object() && results.contains("t_grid")) return grid_csv(results);
    if (results.is_object() && results.contains("maxima")) return maxima_csv(results);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::NotTabular, e.what());
  }
  throw Error(ErrorCode::NotTabular, "results have no tabular form");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

}  // namespace pvc
