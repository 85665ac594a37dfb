#include "spantri/io.hpp"

#include <fstream>
#include <sstream>

#include "spantri/errors.hpp"

namespace spantri {

nlohmann::ordered_json to_json(const Triangulation& t) {
  nlohmann::ordered_json j;
  j["n"] = t.n();
  j["k"] = t.k();
  j["boundary"] = t.boundary();
  nlohmann::ordered_json rot = nlohmann::ordered_json::object();
  for (int v = 0; v < t.n(); ++v) rot[std::to_string(v)] = t.rotation(v);
  j["rotations"] = rot;
  j["internal"] = t.internal();
  j["regime_tag"] = std::string(regime_name(t.regime()));
  return j;
}

Triangulation from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    if (n < 1 || k < 1 || k > n) throw ParameterError("bad n or k in triangulation file");
    const auto boundary = j.at("boundary").get<std::vector<int>>();
    const auto internal = j.at("internal").get<std::vector<int>>();
    const auto& rot = j.at("rotations");
    if (!rot.is_object()) throw ParameterError("rotations must be an object keyed by vertex id");
    std::vector<std::vector<int>> rotations(n);
    std::vector<char> seen(n, 0);
    for (auto it = rot.begin(); it != rot.end(); ++it) {
      std::size_t used = 0;
      int v = -1;
      try {
        v = std::stoi(it.key(), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != it.key().size()) throw ParameterError("rotation key is not an integer: " + it.key());
      if (v < 0 || v >= n) throw StructuralError("rotation for vertex " + it.key() + " outside 0.." + std::to_string(n - 1));
      if (seen[v]) throw StructuralError("duplicate rotation for vertex " + it.key());
      seen[v] = 1;
      rotations[v] = it.value().get<std::vector<int>>();
    }
    Regime regime = Regime::custom;
    if (j.contains("regime_tag")) regime = parse_regime(j.at("regime_tag").get<std::string>());
    return Triangulation(n, k, std::move(rotations), boundary, internal, regime);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed triangulation JSON: ") + e.what());
  }
}

Triangulation read_triangulation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(path + ": " + e.what());
  }
  return from_json(j);
}

void write_triangulation(const Triangulation& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path);
  out << to_json(t).dump(2) << '\n';
}

std::string to_dot(const Triangulation& t) {
  std::ostringstream os;
  os << "graph T_" << t.n() << "_" << t.k() << " {\n  node [shape=circle];\n";
  for (int v : t.internal()) os << "  " << v << " [style=filled, fillcolor=lightgrey];\n";
  const auto& b = t.boundary();
  auto on_boundary = [&](const Edge& e) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const int x = b[j], y = b[(j + 1) % b.size()];
      if ((x == e.u && y == e.v) || (x == e.v && y == e.u)) return true;
    }
    return false;
  };
  for (const auto& e : t.edges()) {
    os << "  " << e.u << " -- " << e.v;
    if (on_boundary(e)) os << " [color=red, penwidth=2.5]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace spantri
