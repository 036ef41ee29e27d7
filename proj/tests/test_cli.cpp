#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fuzzyblock/app/csv.hpp"

namespace fs = std::filesystem;
using fuzzyblock::app::parse_csv;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("fb_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

std::string data(const std::string& name) { return std::string(FB_TEST_DATA) + "/" + name; }

// Runs the CLI with the given arguments; stdout/stderr go to files in the
// scratch directory.
int run(const Scratch& s, const std::string& args) {
  const std::string cmd = std::string(FB_CLI) + " " + args + " >" + (s / "stdout.txt") + " 2>" + (s / "stderr.txt");
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  Scratch s;
  CHECK(run(s, "") == 1);
  CHECK(run(s, "kbt") == 1);
  CHECK(run(s, "kbt analyze") == 1);
  CHECK(run(s, "kbt analyze -p " + data("minimal.json") + " --bogus") == 1);
  CHECK(run(s, "surrogate train -d x.csv --range 1") == 1);
  CHECK(run(s, "fuzzy pbr -p " + data("minimal.json") + " --delta-variant fancy") == 1);
  CHECK(run(s, "--help") == 0);
}

TEST_CASE("data errors exit 2 with one diagnostic line") {
  Scratch s;
  CHECK(run(s, "kbt analyze -p " + s / "missing.json") == 2);
  const auto err = slurp(s / "stderr.txt");
  CHECK(lines(err) == 1);
  CHECK(err.rfind("fuzzyblock: ", 0) == 0);

  std::ofstream(s / "bad.json") << R"({"schema_version": 1, "tunnel": {"section": [[-2,-2],[2,-2],[2,2],[-2,2]]},
    "joints": [{"id": "J1", "dip": 95, "dip_direction": 90, "friction": 30}]})";
  CHECK(run(s, "kbt analyze -p " + s / "bad.json") == 2);
  CHECK(slurp(s / "stderr.txt").find("[0, 90]") != std::string::npos);

  std::ofstream(s / "typo.json") << R"({"schema_version": 1, "frction": 3})";
  CHECK(run(s, "kbt analyze -p " + s / "typo.json") == 2);
  CHECK(slurp(s / "stderr.txt").find("frction") != std::string::npos);
}

TEST_CASE("kbt products") {
  Scratch s;
  REQUIRE(run(s, "kbt analyze -p " + data("tunnel_roof.json") + " -o " + s / "blocks.csv") == 0);
  const auto blocks = parse_csv(slurp(s / "blocks.csv"));
  CHECK(blocks.rows.size() == 4 * 8);
  CHECK(blocks.header[0] == "facet");
  REQUIRE(run(s, "kbt analyze -p " + data("minimal.json")) == 0);
  CHECK(parse_csv(slurp(s / "stdout.txt")).rows.size() == 4 * 2);
  REQUIRE(run(s, "kbt volume -p " + data("tunnel_roof.json") + " -o " + s / "vol.csv") == 0);
  CHECK(parse_csv(slurp(s / "vol.csv")).rows.size() == 4 * 8);
  REQUIRE(run(s, "plot -i " + s / "blocks.csv" + " -p " + data("tunnel_roof.json") + " -o " + s / "b.svg") == 0);
  CHECK(slurp(s / "b.svg").find("<svg") != std::string::npos);
}

TEST_CASE("fuzzy pbr crisp cross-check") {
  Scratch s;
  REQUIRE(run(s, "kbt analyze -p " + data("tunnel_roof.json") + " -o " + s / "blocks.csv") == 0);
  for (const char* v : {"paper", "standard"}) {
    REQUIRE(run(s, "fuzzy pbr -p " + data("tunnel_roof.json") + " --resolution 2000 --delta-variant " + v + " -o " +
                       s / "pbr.csv") == 0);
    const auto blocks = parse_csv(slurp(s / "blocks.csv"));
    const auto pbr = parse_csv(slurp(s / "pbr.csv"));
    REQUIRE(pbr.rows.size() == blocks.rows.size());
    const int pc = pbr.require_column("pbr"), cc = blocks.require_column("class");
    for (std::size_t k = 0; k < pbr.rows.size(); ++k) {
      const double v2 = pbr.number(k, pc);
      CHECK((v2 == 0.0 || v2 == 1.0));
      CHECK((v2 == 1.0) == (blocks.rows[k][cc] == "removable"));
      CHECK(pbr.rows[k][1] == blocks.rows[k][1]);
    }
  }
  REQUIRE(run(s, "fuzzy pbr -p " + data("fuzzy_joints.json") + " --resolution 2000") == 0);
  CHECK(slurp(s / "stdout.txt").find("PBR") != std::string::npos);
}

TEST_CASE("geometry products") {
  Scratch s;
  REQUIRE(run(s, "geom eval -p " + data("geometry.json") + " -o " + s / "r.csv") == 0);
  CHECK(parse_csv(slurp(s / "r.csv")).rows.size() == 48 * 48);
  REQUIRE(run(s, "geom eval -p " + data("geometry.json") + " -o " + s / "r.svg") == 0);
  REQUIRE(run(s, "plot -i " + s / "r.csv" + " -o " + s / "r2.svg") == 0);
  CHECK(slurp(s / "r.svg") == slurp(s / "r2.svg"));
  CHECK(run(s, "geom eval -p " + data("minimal.json") + " -o " + s / "x.csv") == 2);
}

TEST_CASE("surrogate pipeline") {
  Scratch s;
  const std::string proj = data("tunnel_roof.json");
  REQUIRE(run(s, "surrogate gen -p " + proj + " -o " + s / "data.csv") == 0);
  const auto text = slurp(s / "data.csv");
  const auto table = parse_csv(text);
  CHECK(table.rows.size() == 283);
  CHECK(table.header == std::vector<std::string>{"dip_deg", "dipdir_deg", "phi_deg", "angle_deg", "volume_m3", "sf"});
  CHECK(table.comments.size() == 1);

  // the seed fully determines the dataset
  REQUIRE(run(s, "surrogate gen -p " + proj + " -o " + s / "same.csv") == 0);
  CHECK(slurp(s / "same.csv") == text);
  REQUIRE(run(s, "surrogate gen -p " + proj + " --seed 2 -o " + s / "other.csv") == 0);
  CHECK(slurp(s / "other.csv") != text);

  const std::string tr = "surrogate train -p " + proj + " -d " + s / "data.csv" + " --epochs 4 -o ";
  REQUIRE(run(s, tr + s / "m1.json") == 0);
  CHECK(slurp(s / "stdout.txt").find("holdout_rmse=") != std::string::npos);
  REQUIRE(run(s, tr + s / "m2.json") == 0);
  CHECK(slurp(s / "m1.json") == slurp(s / "m2.json"));
  REQUIRE(run(s, "surrogate train -d " + s / "data.csv" + " --epochs 2 --range 0,1 -o " + s / "m3.json") == 0);
  CHECK(fs::file_size(s / "m3.json") > 0);

  REQUIRE(run(s, "surrogate predict -m " + s / "m1.json" + " -d " + s / "data.csv" + " -o " + s / "pred.csv") == 0);
  const auto pred = parse_csv(slurp(s / "pred.csv"));
  CHECK(pred.rows.size() == 283);
  CHECK(pred.header.back() == "sf_pred");

  REQUIRE(run(s, "surrogate map -m " + s / "m1.json" + " -p " + proj + " --bins 36 -o " + s / "map.csv") == 0);
  CHECK(parse_csv(slurp(s / "map.csv")).rows.size() == 36);
  REQUIRE(run(s, "surrogate map -m " + s / "m1.json" + " -p " + proj + " -o " + s / "map.svg") == 0);
  const auto svg = slurp(s / "map.svg");
  REQUIRE(run(s, "surrogate map -m " + s / "m1.json" + " -p " + proj + " -o " + s / "map2.svg") == 0);
  CHECK(slurp(s / "map2.svg") == svg);
  REQUIRE(run(s, "plot -i " + s / "map.csv" + " -p " + proj + " -o " + s / "map3.svg") == 0);
  REQUIRE(run(s, "plot -i " + s / "pred.csv" + " -o " + s / "pred.svg") == 0);
  REQUIRE(run(s, "plot -i " + s / "data.csv" + " -o " + s / "data.svg") == 0);

  CHECK(run(s, "surrogate predict -m " + s / "data.csv" + " -d " + s / "data.csv") == 2);
  CHECK(run(s, "surrogate map -m " + s / "m1.json" + " --bins 4") == 1);
  CHECK(run(s, "surrogate map -m " + s / "nothing.json") == 2);
}
