#include "loopsoup/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace loopsoup::io {

const Json& require(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(path, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

namespace {

// Runs a constructor and rethrows std::invalid_argument with the JSON path.
template <typename F>
auto at_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

bool is_shorthand(const Json& j) { return j.is_object() && (j.contains("grid") || j.contains("window")); }

}  // namespace

WeightedGraph graph_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (j.contains("grid")) {
    const Json& grid = j.at("grid");
    const int w = as_int(require(grid, "width", path + ".grid"), path + ".grid.width");
    const int h = as_int(require(grid, "height", path + ".grid"), path + ".grid.height");
    const double c = as_double(require(j, "kappa_const", path), path + ".kappa_const");
    return at_path(path, [&] { return WeightedGraph::grid(w, h, c); });
  }
  if (j.contains("window")) {
    const int n = as_int(j.at("window"), path + ".window");
    const double c = as_double(require(j, "kappa_const", path), path + ".kappa_const");
    return at_path(path, [&] { return grid_window(n, c); });
  }
  const int n = as_int(require(j, "vertices", path), path + ".vertices");
  const Json& edges = require(j, "edges", path);
  if (!edges.is_array()) throw ConfigError(path + ".edges", "expected an array");
  std::vector<Edge> list;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = path + ".edges[" + std::to_string(i) + "]";
    if (!edges[i].is_array() || edges[i].size() != 2) throw ConfigError(p, "expected [i, j]");
    list.push_back({as_int(edges[i][0], p + "[0]"), as_int(edges[i][1], p + "[1]")});
  }
  std::vector<double> kappa;
  const Json& k = require(j, "kappa", path);
  if (!k.is_array()) throw ConfigError(path + ".kappa", "expected an array");
  for (std::size_t i = 0; i < k.size(); ++i) kappa.push_back(as_double(k[i], path + ".kappa[" + std::to_string(i) + "]"));
  return at_path(path, [&] { return WeightedGraph(n, std::move(list), std::move(kappa)); });
}

Json graph_to_json(const WeightedGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  Json kappa = Json::array();
  for (double k : g.kappa()) kappa.push_back(k);
  return {{"vertices", g.vertex_count()}, {"edges", edges}, {"kappa", kappa}};
}

PlanarMap planar_map_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const Json* spec = &j;
  std::string spec_path = path;
  if (j.contains("graph") && is_shorthand(j.at("graph")) && !j.contains("rotation")) {
    spec = &j.at("graph");
    spec_path = path + ".graph";
  }
  if (is_shorthand(*spec)) {
    const double c = as_double(require(*spec, "kappa_const", spec_path), spec_path + ".kappa_const");
    if (spec->contains("grid")) {
      const Json& grid = spec->at("grid");
      const int w = as_int(require(grid, "width", spec_path + ".grid"), spec_path + ".grid.width");
      const int h = as_int(require(grid, "height", spec_path + ".grid"), spec_path + ".grid.height");
      return at_path(spec_path, [&] { return PlanarMap::grid(w, h, c); });
    }
    const int n = as_int(spec->at("window"), spec_path + ".window");
    return at_path(spec_path, [&] { return PlanarMap::window(n, c); });
  }

  WeightedGraph graph = graph_from_json(require(j, "graph", path), path + ".graph");
  const Json& rot = require(j, "rotation", path);
  if (!rot.is_array() || static_cast<int>(rot.size()) != graph.vertex_count())
    throw ConfigError(path + ".rotation", "expected one list per vertex");
  RotationSystem rotation(rot.size());
  for (std::size_t x = 0; x < rot.size(); ++x) {
    const std::string p = path + ".rotation[" + std::to_string(x) + "]";
    if (!rot[x].is_array()) throw ConfigError(p, "expected an array of edge indices");
    for (std::size_t i = 0; i < rot[x].size(); ++i) {
      const int e = as_int(rot[x][i], p + "[" + std::to_string(i) + "]");
      if (e < 0 || e >= static_cast<int>(graph.edges().size()))
        throw ConfigError(p + "[" + std::to_string(i) + "]", "edge index out of range");
      const Edge& edge = graph.edges()[static_cast<std::size_t>(e)];
      if (edge.u != static_cast<int>(x) && edge.v != static_cast<int>(x))
        throw ConfigError(p + "[" + std::to_string(i) + "]", "edge is not incident to the vertex");
      rotation[x].push_back(edge.u == static_cast<int>(x) ? edge.v : edge.u);
    }
  }
  const Json& inf = require(j, "infinite_face_edge", path);
  if (!inf.is_array() || inf.size() != 2) throw ConfigError(path + ".infinite_face_edge", "expected [u, v]");
  const DirectedEdge outer{as_int(inf[0], path + ".infinite_face_edge[0]"),
                           as_int(inf[1], path + ".infinite_face_edge[1]")};
  return at_path(path, [&] { return PlanarMap(std::move(graph), std::move(rotation), outer); });
}

OneForm one_form_from_json(const Json& j, const WeightedGraph& g, const std::string& path) {
  const Json& entries = j.is_object() ? require(j, "edges", path) : j;
  const std::string base = j.is_object() ? path + ".edges" : path;
  if (!entries.is_array()) throw ConfigError(base, "expected an array");
  OneForm form(g);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string p = base + "[" + std::to_string(i) + "]";
    const Json& e = entries[i];
    int u, v;
    double value;
    if (e.is_array()) {
      if (e.size() != 3) throw ConfigError(p, "expected [u, v, value]");
      u = as_int(e[0], p + "[0]");
      v = as_int(e[1], p + "[1]");
      value = as_double(e[2], p + "[2]");
    } else {
      u = as_int(require(e, "u", p), p + ".u");
      v = as_int(require(e, "v", p), p + ".v");
      value = as_double(require(e, "value", p), p + ".value");
    }
    at_path(p, [&] { return &form.set(u, v, value); });
  }
  return form;
}

Connection connection_from_json(const Json& j, const WeightedGraph& g, const std::string& path) {
  const int d = as_int(require(j, "d", path), path + ".d");
  Connection conn = at_path(path, [&] { return Connection(g, d); });
  const Json& edges = require(j, "edges", path);
  if (!edges.is_array()) throw ConfigError(path + ".edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = path + ".edges[" + std::to_string(i) + "]";
    const int u = as_int(require(edges[i], "u", p), p + ".u");
    const int v = as_int(require(edges[i], "v", p), p + ".v");
    const Json& a = require(edges[i], "A", p);
    ComplexMatrix gen(d, d);
    auto entry = [&](const Json& c, const std::string& cp) -> Complex {
      if (c.is_number()) return {c.get<double>(), 0.0};
      if (!c.is_array() || c.size() != 2) throw ConfigError(cp, "expected [re, im]");
      return {as_double(c[0], cp + "[0]"), as_double(c[1], cp + "[1]")};
    };
    if (a.is_array() && static_cast<int>(a.size()) == d && d > 0 && a[0].is_array() &&
        static_cast<int>(a[0].size()) == d) {
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          gen(r, c) = entry(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                            p + ".A[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    } else if (a.is_array() && static_cast<int>(a.size()) == d * d) {
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          gen(r, c) = entry(a[static_cast<std::size_t>(r * d + c)], p + ".A[" + std::to_string(r * d + c) + "]");
    } else {
      throw ConfigError(p + ".A", "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix of [re, im]");
    }
    at_path(p, [&] { return &conn.set(u, v, gen); });
  }
  return conn;
}

void write_soup_jsonl(std::ostream& out, const LoopSoupSample& soup) {
  for (const auto& loop : soup.loops) {
    Json line = {{"len", loop.length()}, {"verts", std::vector<int>(loop.vertices().begin(), loop.vertices().end())}};
    out << line.dump() << '\n';
  }
}

LoopSoupSample read_soup_jsonl(std::istream& in) {
  LoopSoupSample soup;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const std::string p = "line " + std::to_string(number);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ConfigError(p, e.what());
    }
    const auto verts = require(j, "verts", p).get<std::vector<int>>();
    if (as_int(require(j, "len", p), p + ".len") != static_cast<int>(verts.size()))
      throw ConfigError(p, "len does not match verts");
    soup.loops.push_back(at_path(p, [&] { return UnrootedLoop(verts); }));
    ++soup.counts_by_length[static_cast<int>(verts.size())];
  }
  return soup;
}

Json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(file, e.what());
  }
}

}  // namespace loopsoup::io
