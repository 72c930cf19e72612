#include "chaosflow/serialization.hpp"

#include <fstream>

namespace chaosflow {

json to_json(const GaussianSpace& s) {
  json j;
  j["dim"] = s.dim;
  j["cap"] = s.degree_cap;
  if (s.has_weights()) j["weights"] = s.weights;
  return j;
}

namespace {

json terms_to_json(const ChaosPoly& p) {
  json terms = json::array();
  for (auto& [alpha, c] : p.coeffs()) {
    json t;
    t["alpha"] = alpha.dense(p.space().dim);
    t["c"] = c;
    terms.push_back(std::move(t));
  }
  return terms;
}

ChaosPoly terms_from_json(const GaussianSpace& space, const json& terms) {
  ChaosPoly p(space);
  for (auto& t : terms) {
    std::vector<int> alpha = t.at("alpha").get<std::vector<int>>();
    p.add(MultiIndex::from_dense(alpha), t.at("c").get<double>());
  }
  return p;
}

}  // namespace

json to_json(const ChaosPoly& p) {
  json j = to_json(p.space());
  j["terms"] = terms_to_json(p);
  return j;
}

json to_json(const ChaosField& v) {
  json j = to_json(v.space());
  json comps = json::array();
  for (int i = 0; i < v.dim(); ++i) comps.push_back(json{{"terms", terms_to_json(v.component(i))}});
  j["components"] = std::move(comps);
  return j;
}

json to_json(const ChaosMatrix& k) {
  json j = to_json(k.space());
  json rows = json::array();
  for (int i = 0; i < k.dim(); ++i) {
    json row = json::array();
    for (int c = 0; c < k.dim(); ++c) row.push_back(json{{"terms", terms_to_json(k.entry(i, c))}});
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

GaussianSpace space_from_json(const json& j) {
  int dim = j.at("dim").get<int>();
  int cap = j.at("cap").get<int>();
  if (j.contains("weights")) return GaussianSpace(dim, cap, j.at("weights").get<std::vector<double>>());
  return GaussianSpace(dim, cap);
}

ChaosPoly poly_from_json(const json& j) {
  return terms_from_json(space_from_json(j), j.at("terms"));
}

ChaosField field_from_json(const json& j) {
  GaussianSpace space = space_from_json(j);
  const json& comps = j.at("components");
  if (int(comps.size()) != space.dim)
    throw std::invalid_argument("field_from_json: component count mismatch");
  ChaosField v(space);
  for (int i = 0; i < space.dim; ++i)
    v.set_component(i, terms_from_json(space, comps.at(i).at("terms")));
  return v;
}

ChaosMatrix matrix_from_json(const json& j) {
  GaussianSpace space = space_from_json(j);
  const json& rows = j.at("entries");
  if (int(rows.size()) != space.dim) throw std::invalid_argument("matrix_from_json: row count mismatch");
  ChaosMatrix k(space);
  for (int i = 0; i < space.dim; ++i) {
    const json& row = rows.at(i);
    if (int(row.size()) != space.dim)
      throw std::invalid_argument("matrix_from_json: column count mismatch");
    for (int c = 0; c < space.dim; ++c)
      k.set_entry(i, c, terms_from_json(space, row.at(c).at("terms")));
  }
  return k;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace chaosflow
