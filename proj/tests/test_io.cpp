#include "support.hpp"

#include "cohmatch/error.hpp"
#include "cohmatch/fixtures.hpp"
#include "cohmatch/io.hpp"
#include "cohmatch/svg.hpp"

#include <doctest.h>

#include <sstream>

using namespace cohmatch;

namespace {

std::string parse_message(const std::string& text, ErrorKind expected) {
  try {
    parse_complex(text);
  } catch (const Error& e) {
    CHECK(e.kind() == expected);
    return e.what();
  }
  FAIL("no error thrown");
  return {};
}

}  // namespace

TEST_CASE("parse a small complex") {
  const auto in = parse_complex(
      "# triangle\n"
      "v 0 1\n"
      "v 1.5 -2e-1   # trailing comment\n"
      "\n"
      "v +3 4\n"
      "s 0 1\ns 1 2\ns 0 2\ns 0 1 2\n");
  CHECK(in.complex.num_vertices() == 3);
  CHECK(in.complex.size() == 7);
  CHECK(in.f.values()(1, 1) == -0.2);
  CHECK(in.f.values()(2, 0) == 3.0);
}

TEST_CASE("parse errors name the line") {
  CHECK(parse_message("v 0 1\nv 1 x\n", ErrorKind::ParseError).find("line 2") != std::string::npos);
  CHECK(parse_message("v 0 1\nv 1\n", ErrorKind::ParseError).find("line 2") != std::string::npos);
  CHECK(parse_message("v 0 1\nv 1 2\nq 0\n", ErrorKind::ParseError).find("line 3") != std::string::npos);
  CHECK(parse_message("v 0 1\nv 1 2\ns 1 0\n", ErrorKind::ParseError).find("line 3") != std::string::npos);
  CHECK(parse_message("v 0 1\nv 1 2\ns 0 5\n", ErrorKind::ParseError).find("line 3") != std::string::npos);
  CHECK(parse_message("v 0 1\nv nan 2\n", ErrorKind::ParseError).find("line 2") != std::string::npos);
  parse_message("# nothing\n", ErrorKind::EmptyComplex);
  parse_message("v 0 0\nv 0 0\nv 0 0\ns 0 1 2\n", ErrorKind::MissingFace);
  CHECK(parse_complex("v 0 0\nv 0 0\nv 0 0\ns 0 1 2\n", FaceClosure::Lenient).complex.auto_completed());
}

TEST_CASE("property: serialize and parse round trip") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = testing::random_complex(rng);
    const auto f = fixtures::random_bifiltration(k.num_vertices(), rng, -1e3, 1e3);
    const auto back = parse_complex(serialize_complex(k, f));
    CHECK(back.complex == k);
    CHECK(back.f == f);
    CHECK(serialize_complex(back.complex, back.f) == serialize_complex(k, f));
  }
}

TEST_CASE("diagram output") {
  const auto d = reduce(fixtures::octahedron(), fixtures::octahedron_height());
  CHECK(diagram_csv(d) == "degree,birth,death,multiplicity\n0,-1,inf,1\n2,1,inf,1\n");
  const Json j = diagram_json(d);
  CHECK(j["points"].size() == 2);
  CHECK(j["points"][0]["death"] == "inf");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(0.1, 3) == "0.1");
  CHECK(format_real(-kInfinity) == "-inf");
}

TEST_CASE("matching json") {
  const auto r = bottleneck({PlanePoint(0, 2), PlanePoint(0, 1)}, {PlanePoint(0.25, 2)});
  const Json j = matching_json(r.matching);
  CHECK(j["cost"] == 0.5);
  CHECK(j["pairs"].size() == 2);
}

TEST_CASE("svg output is well formed") {
  const auto d = reduce(fixtures::octahedron(), fixtures::octahedron_height());
  const std::string svg = diagram_svg(d, "height");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  Eigen::MatrixXd grid(2, 2);
  grid << 0.5, kInfinity, 0.25, 1.0;
  const std::string heat = heatmap_svg({0.1, 0.9, -1, 1}, grid, {{0.5, 0.0}});
  CHECK(heat.find("</svg>") != std::string::npos);
}
