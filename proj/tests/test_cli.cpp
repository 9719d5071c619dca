#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "hypercross/lattice.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Sandbox {
 public:
  Sandbox() {
    dir_ = fs::temp_directory_path() / ("hypercross_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Sandbox() { fs::remove_all(dir_); }
  fs::path path(const std::string& name) const { return dir_ / name; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  Run run(const std::string& args, const std::string& env = "") const {
    Run r;
    const std::string cmd = env + " '" HYPERCROSS_CLI "' " + args + " > '" + path("stdout").string() + "' 2> '" +
                            path("stderr").string() + "'";
    const int raw = std::system(cmd.c_str());
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(path("stdout"));
    r.err = slurp(path("stderr"));
    return r;
  }
  std::size_t files() const {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir_))
      if (e.path().filename() != "stdout" && e.path().filename() != "stderr") ++n;
    return n;
  }

 private:
  inline static int counter_ = 0;
  fs::path dir_;
};

const char* kOmega = R"({"d":2,"l":1,"kind":"power_log","r":[0.6,0.6],"b":[0,0]})";

}  // namespace

TEST_CASE("indexset counts match an exhaustive scan") {
  Sandbox box;
  const auto cfg = box.write("idx.json", std::string(R"({"omega":)") + kOmega + R"(,"p":2,"q":4,"N":64})");
  const Run r = box.run("indexset --config '" + cfg.string() + "' --out '" + box.path("idx_out.json").string() + "'");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(slurp(box.path("idx_out.json")));

  // weight 2^{-0.35 |s|_1} >= 1/64 and, for Theta, in [1/128, 1/64)
  std::size_t kappa = 0, theta = 0;
  for (int a = 0; a <= 40; ++a)
    for (int b = 0; b <= 40; ++b) {
      const double lw = -0.35 * (a + b);
      if (lw >= -6.0 - 1e-12) ++kappa;
      else if (lw >= -7.0 - 1e-12) ++theta;
    }
  CHECK(j["kappa_size"] == kappa);
  CHECK(j["theta_size"] == theta);
  CHECK(j["config_hash"].get<std::string>().size() == 16);

  const auto manifest = nlohmann::json::parse(slurp(box.path("idx_out.json.manifest.json")));
  CHECK(manifest["command"] == "indexset");
  CHECK(manifest["config_hash"] == j["config_hash"]);
  CHECK(manifest.contains("timings"));
}

TEST_CASE("verify dk passes") {
  Sandbox box;
  const Run r = box.run("verify --suite dk --out '" + box.path("dk.json").string() + "'");
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(slurp(box.path("dk.json")));
  CHECK(j["pass"] == true);
}

TEST_CASE("invalid configurations exit 2 and write nothing") {
  Sandbox box;
  const auto bad = box.write("bad.json", std::string(R"({"omega":)") + kOmega + R"(,"p":4,"q":2,"witness":"f1","N_exponents":[4,5]})");
  const Run r = box.run("rates --config '" + bad.string() + "' --out '" + box.path("r.csv").string() + "'");
  CHECK(r.status == 2);
  const auto err = nlohmann::json::parse(r.err);
  CHECK(err["error"]["kind"] == "configuration");
  CHECK(box.files() == 1);

  const auto unknown = box.write("u.json", std::string(R"({"omega":)") + kOmega + R"(,"p":2,"q":4,"N":64,"colour":1})");
  const Run u = box.run("indexset --config '" + unknown.string() + "' --out '" + box.path("u_out.json").string() + "'");
  CHECK(u.status == 2);
  CHECK(u.err.find("colour") != std::string::npos);
  CHECK_FALSE(fs::exists(box.path("u_out.json")));

  const Run syntax = box.run("indexset --config '" + box.write("s.json", "{oops").string() + "'");
  CHECK(syntax.status == 2);

  const Run threads = box.run("verify --suite dk", "HYPERCROSS_THREADS=zero");
  CHECK(threads.status == 2);
}

TEST_CASE("rates are bit-identical across runs and embed the hash") {
  Sandbox box;
  const auto cfg = box.write("rates.json", std::string(R"({"omega":)") + kOmega +
                                               R"(,"p":2,"q":4,"theta":2,"witness":"random","N_exponents":[4,5,6],"seed":9})");
  const Run a = box.run("rates --config '" + cfg.string() + "' --out '" + box.path("a.csv").string() + "'");
  const Run b = box.run("rates --config '" + cfg.string() + "' --out '" + box.path("b.csv").string() + "' --threads 1");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  const std::string ta = slurp(box.path("a.csv")), tb = slurp(box.path("b.csv"));
  CHECK(ta == tb);
  CHECK(ta.rfind("# config_hash=", 0) == 0);

  const Run c = box.run("rates --config '" + cfg.string() + "' --seed 10 --out '" + box.path("c.csv").string() + "'");
  REQUIRE(c.status == 0);
  CHECK(slurp(box.path("c.csv")) != ta);
}

TEST_CASE("a failed sweep exits 3 with rows recorded") {
  Sandbox box;
  const auto cfg = box.write("f.json", std::string(R"({"omega":)") + kOmega +
                                           R"(,"p":1.5,"q":4,"theta":2,"witness":"f1","N_exponents":[4,5,6]})");
  const Run r = box.run("rates --config '" + cfg.string() + "' --ppu 1 --out '" + box.path("f.csv").string() + "'");
  CHECK(r.status == 3);
  const std::string csv = slurp(box.path("f.csv"));
  CHECK(csv.find("resolution") != std::string::npos);
}

TEST_CASE("norms prints both norms") {
  Sandbox box;
  const auto om = box.write("om.json", kOmega);
  const auto f = box.write("f.json", R"({"d":2,"blocks":[{"s":[1,2],"c":0.35},{"s":[0,0],"c":1}]})");
  const Run r = box.run("norms --function '" + f.string() + "' --omega '" + om.string() + "' --p 2 --theta 2");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  const double def = j["definition_norm"], dec = j["decomposition_norm"], ratio = j["ratio"];
  CHECK(ratio == doctest::Approx(def / dec).epsilon(1e-12));
}
