#pragma once

#include <string>

#include <json.hpp>

#include "pvc/estimators.hpp"
#include "pvc/extremes.hpp"
#include "pvc/stats.hpp"
#include "pvc/typical_cell.hpp"

namespace pvc {

using Json = nlohmann::json;

/// %.17g; parses back to the same double.
std::string format_double(double x);

Json to_json(const MCEstimate& e);
MCEstimate mc_estimate_from_json(const Json& j);

Json to_json(const TailReport& r);
Json to_json(const ExtremeReport& r);

/// {generators, vertices:[{location, nucleus_indices, pointy}], D, sampled_radius, seed}
Json cell_to_json(const TypicalCell& cell);

/// Tabular view of a results payload: payloads carrying "t_grid" give one
/// row per threshold, payloads carrying "maxima" one row per replicate.
/// Throws NotTabular otherwise.
std::string results_to_csv(const Json& results);

/// Writes text to path, or to standard output for an empty path. Throws IoError.
void write_text(const std::string& path, const std::string& text);

}  // namespace pvc
