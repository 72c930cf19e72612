#pragma once

#include <string>

#include <json.hpp>

#include "chaosflow/chaos_matrix.hpp"

namespace chaosflow {

using json = nlohmann::json;

// Text form of chaos objects. A polynomial is
//   {"dim": n, "cap": d, "terms": [{"alpha": [..], "c": value}, ...]}
// with dense alpha arrays of length dim; fields nest per component and
// matrices per entry (row-major). A "weights" key carries the optional
// profile. Values round-trip bit-faithfully (shortest round-trip decimals).
json to_json(const GaussianSpace& s);
json to_json(const ChaosPoly& p);
json to_json(const ChaosField& v);
json to_json(const ChaosMatrix& k);

GaussianSpace space_from_json(const json& j);
ChaosPoly poly_from_json(const json& j);
ChaosField field_from_json(const json& j);
ChaosMatrix matrix_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace chaosflow
