#include "pentree/map_io.hpp"

#include <sstream>

#include "json.hpp"

namespace pentree {

using nlohmann::json;

std::string map_to_json(const PlaneMap& map, int indent) {
  json j;
  j["version"] = 1;
  json darts = json::array();
  for (const auto& r : map.darts()) darts.push_back({{"twin", r.twin}, {"next", r.next}, {"tail", r.tail}});
  j["darts"] = std::move(darts);
  j["outer_face_dart"] = map.face_dart(map.outer_face());
  j["root_dart"] = map.root_dart() ? json(*map.root_dart()) : json(nullptr);
  if (map.has_colors()) {
    json colors = json::array();
    for (Color c : map.colors()) colors.push_back(static_cast<int>(c));
    j["colors"] = std::move(colors);
  } else {
    j["colors"] = nullptr;
  }
  return j.dump(indent);
}

PlaneMap map_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MapError(std::string("map JSON parse error: ") + e.what());
  }
  try {
    if (j.value("version", 0) != 1) throw MapError("unsupported map JSON version");
    std::vector<DartRecord> darts;
    for (const auto& d : j.at("darts"))
      darts.push_back({d.at("twin").get<int>(), d.at("next").get<int>(), d.at("tail").get<int>()});
    std::optional<int> root;
    if (j.contains("root_dart") && !j["root_dart"].is_null()) root = j["root_dart"].get<int>();
    std::vector<Color> colors;
    if (j.contains("colors") && !j["colors"].is_null())
      for (const auto& c : j["colors"]) {
        const int v = c.get<int>();
        if (v != 0 && v != 1) throw MapError("color must be 0 or 1");
        colors.push_back(static_cast<Color>(v));
      }
    return PlaneMap::from_darts(std::move(darts), j.at("outer_face_dart").get<int>(), root,
                                std::move(colors));
  } catch (const json::exception& e) {
    throw MapError(std::string("malformed map JSON: ") + e.what());
  }
}

std::string map_to_dot(const PlaneMap& map) {
  std::ostringstream os;
  os << "graph map {\n";
  os << "  // outer face: " << map.face_degree(map.outer_face()) << " edges\n";
  const auto outer = map.outer_vertex_mask();
  for (int v = 0; v < map.num_vertices(); ++v) {
    os << "  " << v << " [";
    if (map.has_colors() && map.color(v) == Color::kBlack)
      os << "style=filled, fillcolor=black, fontcolor=white";
    else
      os << "shape=circle";
    if (outer[v]) os << ", peripheries=2";
    os << "];\n";
  }
  for (int d = 0; d < map.num_darts(); ++d) {
    if (d > map.twin(d)) continue;
    os << "  " << map.tail(d) << " -- " << map.head(d);
    if (!map.is_inner_edge(d)) os << " [style=bold]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace pentree
