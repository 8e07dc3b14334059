#include "corpus.hpp"

#include "loopsoup/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace loopsoup;
using io::Json;

TEST(Io, GraphRoundTrip) {
  const auto g = corpus::c4(0.5);
  const auto back = io::graph_from_json(io::graph_to_json(g));
  EXPECT_EQ(back.vertex_count(), 4);
  EXPECT_TRUE(build_transition(back).matrix() == build_transition(g).matrix());
}

TEST(Io, GridShorthand) {
  const auto g = io::graph_from_json(Json::parse(R"({"grid": {"width": 3, "height": 2}, "kappa_const": 2})"));
  EXPECT_EQ(g.vertex_count(), 6);
  EXPECT_EQ(g.edges().size(), 7u);
  EXPECT_EQ(io::graph_from_json(Json::parse(R"({"window": 2, "kappa_const": 1})")).vertex_count(), 25);
}

TEST(Io, ErrorsCarryFieldPaths) {
  try {
    io::graph_from_json(Json::parse(R"({"vertices": 3, "edges": [[0, 1], [1, 7]], "kappa": [1, 1, 1]})"));
    FAIL();
  } catch (const io::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("graph"), std::string::npos);
  }
  try {
    io::graph_from_json(Json::parse(R"({"vertices": 3, "edges": [[0, 1], [1, "x"]], "kappa": [1, 1, 1]})"));
    FAIL();
  } catch (const io::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("graph.edges[1][1]"), std::string::npos) << e.what();
  }
  try {
    io::graph_from_json(Json::parse(R"({"vertices": 2, "edges": [[0, 1]]})"));
    FAIL();
  } catch (const io::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("kappa"), std::string::npos);
  }
}

TEST(Io, PlanarMapFromRotation) {
  // C4 drawn as a square; edges 0:(0,1) 1:(1,2) 2:(2,3) 3:(3,0).
  const auto j = Json::parse(R"({
    "graph": {"vertices": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]], "kappa": [1, 1, 1, 1]},
    "rotation": [[0, 3], [1, 0], [2, 1], [3, 2]],
    "infinite_face_edge": [1, 0]})");
  const auto map = io::planar_map_from_json(j);
  EXPECT_EQ(map.face_count(), 2);
  EXPECT_EQ(map.infinite_face(), map.left_face(1, 0));
  const auto grid = io::planar_map_from_json(Json::parse(R"({"grid": {"width": 3, "height": 3}, "kappa_const": 1})"));
  EXPECT_EQ(grid.face_count(), 5);
  const auto nested = io::planar_map_from_json(Json::parse(R"({"graph": {"window": 1, "kappa_const": 1}})"));
  EXPECT_EQ(nested.face_count(), 5);
  auto bad = j;
  bad["rotation"][0] = Json::array({0, 1});
  EXPECT_THROW(io::planar_map_from_json(bad), io::ConfigError);
}

TEST(Io, OneFormBothForms) {
  const auto g = corpus::k3();
  const auto a = io::one_form_from_json(Json::parse(R"({"edges": [{"u": 0, "v": 1, "value": 1.5}]})"), g);
  EXPECT_DOUBLE_EQ(a(1, 0), -1.5);
  const auto b = io::one_form_from_json(Json::parse(R"([[1, 2, -2.0]])"), g);
  EXPECT_DOUBLE_EQ(b(2, 1), 2.0);
  EXPECT_THROW(io::one_form_from_json(Json::parse(R"([[0, 0, 1.0]])"), g), io::ConfigError);
}

TEST(Io, ConnectionNestedAndFlat) {
  const auto g = corpus::k3();
  const auto c = io::connection_from_json(Json::parse(R"({"d": 2, "edges": [
      {"u": 0, "v": 1, "A": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
      {"u": 1, "v": 2, "A": [[0.5, 0], [0, -1], [0, 1], [-0.5, 0]]}]})"),
                                          g);
  EXPECT_EQ(c.fiber_dim(), 2);
  EXPECT_EQ(c.generator(0, 1)(0, 1), Complex(1.0, 0.0));
  EXPECT_EQ(c.generator(1, 2)(1, 0), Complex(0.0, 1.0));
  EXPECT_EQ(c.generator(2, 1)(1, 0), Complex(0.0, -1.0));  // negation
  EXPECT_THROW(io::connection_from_json(Json::parse(R"({"d": 1, "edges": [{"u": 0, "v": 1, "A": [[0, 1]]}]})"), g),
               io::ConfigError);
}

TEST(Io, SoupJsonLinesRoundTrip) {
  LoopSoupSample soup;
  const std::vector<int> a = {0, 1, 2}, b = {1, 0};
  soup.loops.emplace_back(a);
  soup.loops.emplace_back(b);
  soup.counts_by_length = {{2, 1}, {3, 1}};
  std::stringstream ss;
  io::write_soup_jsonl(ss, soup);
  EXPECT_EQ(ss.str(), "{\"len\":3,\"verts\":[0,1,2]}\n{\"len\":2,\"verts\":[0,1]}\n");
  const auto back = io::read_soup_jsonl(ss);
  EXPECT_EQ(back.loops, soup.loops);
  EXPECT_EQ(back.counts_by_length, soup.counts_by_length);
  std::stringstream broken("{\"len\": 3, \"verts\": [0, 1]}\n");
  EXPECT_THROW(io::read_soup_jsonl(broken), io::ConfigError);
}
