#include "doctest.h"

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "hypercross/error.hpp"
#include "hypercross/io.hpp"

using namespace hypercross;

TEST_CASE("majorant round trip") {
  gen::Rng rng(71);
  for (int i = 0; i < 20; ++i) {
    const auto spec = gen::power_log(rng, gen::integer(rng, 1, 3));
    const Majorant m = spec.make();
    const Majorant back = majorant_from_json(majorant_to_json(m));
    CHECK(back.dim() == m.dim());
    CHECK(back.order() == m.order());
    for (int k = 0; k < 10; ++k) {
      const auto s = gen::index(rng, m.dim(), 12);
      CHECK(back.at_dyadic(s) == m.at_dyadic(s));
    }
  }

  const Json table = Json::parse(R"({"d":1,"l":1,"kind":"table","values":[{"s":[0],"v":1.0},{"s":[1],"v":0.5}]})");
  const Majorant t = majorant_from_json(table);
  CHECK(t.at_dyadic(DyadicIndex{1}) == 0.5);
  CHECK(majorant_to_json(t) == table);

  const Json nob = Json::parse(R"({"d":2,"l":1,"kind":"power_log","r":[0.6,0.7]})");
  CHECK(majorant_from_json(nob).at_dyadic(DyadicIndex{1, 1}) == doctest::Approx(std::exp2(-1.3)).epsilon(1e-15));
}

TEST_CASE("malformed majorants") {
  CHECK_THROWS_AS(majorant_from_json(Json::parse(R"({"d":2,"l":1,"kind":"power_log","r":[0.6]})")), ConfigurationError);
  CHECK_THROWS_AS(majorant_from_json(Json::parse(R"({"d":1,"l":1,"kind":"power_log","r":[0.6],"x":1})")), ConfigurationError);
  CHECK_THROWS_AS(majorant_from_json(Json::parse(R"({"d":1,"l":1,"kind":"spline","r":[0.6]})")), ConfigurationError);
  CHECK_THROWS_AS(majorant_from_json(Json::parse(R"({"d":1,"l":1,"kind":"table","values":[{"s":[0],"v":1},{"s":[0],"v":2}]})")),
                  ConfigurationError);
  const auto custom = Majorant::custom(1, 1, [](const DyadicIndex&) { return 1.0; });
  CHECK_THROWS_AS(majorant_to_json(custom), ConfigurationError);
}

TEST_CASE("block function round trip") {
  gen::Rng rng(72);
  for (int i = 0; i < 20; ++i) {
    const auto f = gen::block_function(rng, gen::integer(rng, 1, 3), 8, 6);
    CHECK(block_function_from_json(block_function_to_json(f)).coeffs() == f.coeffs());
  }
  CHECK_THROWS_AS(block_function_from_json(Json::parse(R"({"d":2,"blocks":[{"s":[1],"c":0.3}]})")), ConfigurationError);
  CHECK_THROWS_AS(block_function_from_json(Json::parse(R"({"d":1,"blocks":[{"s":[1],"c":0.3},{"s":[1],"c":1}]})")),
                  ConfigurationError);
  CHECK_THROWS_AS(block_function_from_json(Json::parse(R"({"d":1,"blocks":[{"s":[1],"c":0.3,"w":1}]})")),
                  ConfigurationError);
}

TEST_CASE("theta and grid encodings") {
  CHECK(theta_to_json(INFINITY) == "inf");
  CHECK(std::isinf(theta_from_json(Json("inf"))));
  CHECK(theta_from_json(Json(2.5)) == 2.5);
  CHECK(theta_to_json(4.0) == 4.0);
  CHECK_THROWS_AS(theta_from_json(Json("infinity")), ConfigurationError);
  CHECK_THROWS_AS(theta_from_json(Json(true)), ConfigurationError);

  const QuadratureGrid g = grid_from_json(Json::parse(R"({"T":100,"ppu":64,"rtol":0.001})"));
  CHECK(g.T == 100.0);
  CHECK(g.points_per_unit == 64);
  CHECK(g.rel_tol == 0.001);
  CHECK(grid_from_json(grid_to_json(g)).points_per_unit == 64);
  CHECK_THROWS_AS(grid_from_json(Json::parse(R"({"ppu":-1})")), ConfigurationError);
  CHECK_THROWS_AS(grid_from_json(Json::parse(R"({"dx":0.1})")), ConfigurationError);
}

TEST_CASE("config hash ignores key order") {
  const Json a = Json::parse(R"({"p":2,"q":4,"omega":{"d":1,"r":[0.6]}})");
  const Json b = Json::parse(R"({"omega":{"r":[0.6],"d":1},"q":4,"p":2})");
  const Json c = Json::parse(R"({"omega":{"r":[0.6],"d":1},"q":4,"p":3})");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
  // FNV-1a test vectors
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("parse errors are configuration errors") {
  CHECK_THROWS_AS(parse_json("{\"p\": ", "cfg"), ConfigurationError);
  CHECK_THROWS_AS(reject_unknown_fields(Json::parse(R"({"p":2,"zz":1})"), {"p"}, "cfg"), ConfigurationError);
  CHECK_NOTHROW(reject_unknown_fields(Json::parse(R"({"p":2})"), {"p", "q"}, "cfg"));
  CHECK_THROWS_AS(read_json_file("/nonexistent/path.json"), ConfigurationError);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(NAN) == "nan");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv layouts") {
  RateTable t;
  RateRow ok;
  ok.N = 16;
  ok.error = 0.5;
  ok.norm_ratio = 8;
  ok.lemmaV_upper = 0.25;
  RateRow bad;
  bad.N = 32;
  bad.ok = false;
  bad.failure = "resolution: too coarse";
  t.rows = {ok, bad};
  std::istringstream in(rate_table_csv(t, "0123456789abcdef"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "# config_hash=0123456789abcdef");
  std::getline(in, line);
  CHECK(line == "N,error,cert_width,norm_ratio,lemmaV_upper,status");
  std::getline(in, line);
  CHECK(line == "16,0.5,0,8,0.25,ok");
  std::getline(in, line);
  CHECK(line == "32,nan,nan,nan,nan,resolution");

  LevelSetFamily fam;
  fam.N = 4;
  fam.kappa = {{0, 0}, {1, 0}};
  fam.theta = {{2, 1}};
  std::istringstream in2(level_set_family_csv(fam, "h"));
  std::getline(in2, line);
  CHECK(line == "# config_hash=h");
  std::getline(in2, line);
  CHECK(line == "s1,s2,set");
  std::getline(in2, line);
  CHECK(line == "0,0,kappa");
  std::getline(in2, line);
  std::getline(in2, line);
  CHECK(line == "2,1,theta");

  const Json j = level_set_family_to_json(fam);
  CHECK(j["N"] == 4);
  CHECK(j["kappa_size"] == 2);
  CHECK(j["theta_size"] == 1);
}
