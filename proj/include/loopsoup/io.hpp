#ifndef LOOPSOUP_IO_HPP
#define LOOPSOUP_IO_HPP

#include "loopsoup/holonomy.hpp"
#include "loopsoup/planar.hpp"
#include "loopsoup/sampler.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace loopsoup::io {

using Json = nlohmann::json;

/// Malformed input; the message starts with the JSON path of the offending
/// field, e.g. "graph.edges[3]: endpoint out of range".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what) {}
};

/// Field access that reports the JSON path on failure.
const Json& require(const Json& j, const char* key, const std::string& path);
int as_int(const Json& j, const std::string& path);
double as_double(const Json& j, const std::string& path);

/// {"vertices": n, "edges": [[i, j], ...], "kappa": [...]},
/// {"grid": {"width": W, "height": H}, "kappa_const": c} or
/// {"window": n, "kappa_const": c}.
WeightedGraph graph_from_json(const Json& j, const std::string& path = "graph");
Json graph_to_json(const WeightedGraph& g);

/// {"graph": {...}, "rotation": [[edge indices, counterclockwise] per vertex],
///  "infinite_face_edge": [u, v]}; the grid and window shorthands of
/// graph_from_json are also accepted (at top level or under "graph") and
/// derive the rotation and outer face.
PlanarMap planar_map_from_json(const Json& j, const std::string& path = "map");

/// {"edges": [{"u": 0, "v": 1, "value": 1.0}, ...]} or [[u, v, value], ...].
OneForm one_form_from_json(const Json& j, const WeightedGraph& g, const std::string& path = "one_form");

/// {"d": d, "edges": [{"u": .., "v": .., "A": [[[re, im], ...] per row]}]};
/// the (v, u) generator is the negation.
Connection connection_from_json(const Json& j, const WeightedGraph& g, const std::string& path = "connection");

/// One loop per line: {"len": k, "verts": [...]}.
void write_soup_jsonl(std::ostream& out, const LoopSoupSample& soup);
LoopSoupSample read_soup_jsonl(std::istream& in);

Json read_json_file(const std::string& file);

}  // namespace loopsoup::io

#endif  // LOOPSOUP_IO_HPP
