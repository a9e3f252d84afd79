#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hplab/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = hplab::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hplab_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("hannorm of a kernel function") {
  const auto r = call({"hannorm", "--points", "[0.0],[0.5]", "--symbol", "kx:1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(4.0 / 3).epsilon(1e-12));
  CHECK(j.contains("gap"));
  CHECK(j["method"] == "svd");
}

TEST_CASE("h1 of a kernel function") {
  const auto r = call({"h1", "--points", "[0.0],[0.5]", "--values", "kx:1"});
  const auto bf = call({"h1", "--points", "[0.0],[0.5]", "--values", "kx:1", "--bruteforce", "2"});
  REQUIRE(r.code == 0);
  REQUIRE(bf.code == 0);
  const double v = nlohmann::json::parse(r.out)["value"].get<double>();
  // k_x = k_x * 1 gives ||k_x||_{H^1} <= ||k_x|| = sqrt(k(x,x))
  CHECK(v <= std::sqrt(4.0 / 3) + 1e-9);
  CHECK(v == doctest::Approx(nlohmann::json::parse(bf.out)["value"].get<double>()).epsilon(1e-4));
}

TEST_CASE("thmc1 CSV") {
  const auto r = call({"thmc1", "--kernel", "szego", "--radii", "0.5,0.9", "--p", "1,2"});
  REQUIRE(r.code == 0);
  CHECK(first_line(r.out) == "kernel,point,p,kxx,lower,upper,ratio_a,ratio_c,ratio_d");
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("example317 ratios decrease") {
  const auto r = call({"example317", "--rule", "doubleexp", "--jmin", "1", "--jmax", "6"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  double prev = 1e300;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    const double ratio = std::stod(cells.at(4));
    CHECK(ratio < prev);
    prev = ratio;
    ++rows;
  }
  CHECK(rows == 6);
}

TEST_CASE("usage errors exit 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"nosuchcommand"}).code == 2);
  CHECK(call({"dk", "--points", "[0.0],[2.0]"}).code == 2);
  CHECK(call({"thmc1", "--radii", "0.5", "--p", "0.5"}).code == 2);
  CHECK(call({"selftest", "--only", "no_such_criterion"}).code == 2);
}

TEST_CASE("numerical failures exit 1 with a diagnostic") {
  const auto r = call({"pick", "--kernel", "gram", "--gram", "[[2,0.2],[0.2,2]]"});
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["error"] == "numerical");
  CHECK(j["residual"].get<double>() < 0);
}

TEST_CASE("output is reproducible") {
  const std::vector<std::string> args = {"hannorm", "--points", "[0.1,0.2],[0.5],[-0.3,0.4]",
                                         "--symbol", "[1,[0,1],-2]", "--probes", "10"};
  const auto a = call(args);
  const auto b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("seed precedence") {
  const std::vector<std::string> base = {"selftest", "--only", "growth_decay"};
  ::unsetenv("HPLAB_SEED");
  CHECK(first_line(call(base).out) == "seed 20240501");
  ::setenv("HPLAB_SEED", "77", 1);
  CHECK(first_line(call(base).out) == "seed 77");
  auto with_flag = base;
  with_flag.insert(with_flag.end(), {"--seed", "5"});
  CHECK(first_line(call(with_flag).out) == "seed 5");
  ::unsetenv("HPLAB_SEED");
}

TEST_CASE("config file") {
  const auto path = scratch("config.json");
  {
    std::ofstream f(path);
    f << R"({"command": "dk", "kernel": {"type": "szego", "points": [[0.0], [0.6]]}, "i": 0, "j": 1})";
  }
  const auto r = call({"--config", path.string()});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["dk"].get<double>() == doctest::Approx(0.6));
  std::filesystem::remove(path);
  CHECK(call({"--config", path.string()}).code == 2);
}

TEST_CASE("selftest pass and tightened failure") {
  const auto ok = call({"selftest", "--only", "growth_decay"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("PASS  8 growth_decay") != std::string::npos);
  const auto bad = call({"selftest", "--only", "8", "--tighten", "100"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL  8") != std::string::npos);
}

TEST_CASE("plot from CSV and file output") {
  const auto csv = scratch("ratios.csv");
  const auto svg = scratch("ratios.svg");
  REQUIRE(call({"example317", "--jmin", "1", "--jmax", "5", "--output", csv.string()}).code == 0);
  CHECK(slurp(csv).rfind("j,log_y", 0) == 0);
  const auto r = call({"plot", "--input", csv.string(), "--kind", "decay", "--output", svg.string()});
  CHECK(r.code == 0);
  CHECK(slurp(svg).rfind("<?xml", 0) == 0);

  const auto direct = call({"thmc1", "--radii", "0.5,0.9,0.99", "--format", "svg"});
  CHECK(direct.code == 0);
  CHECK(direct.out.find("<svg") != std::string::npos);
  std::filesystem::remove(csv);
  std::filesystem::remove(svg);
}

TEST_CASE("h1 reports non-convergence") {
  const auto r = call({"h1", "--points", "[0.1,0.2],[0.5],[-0.3,0.4]", "--values", "[1,[0,1],-2]",
                       "--max-iter", "3", "--tol", "1e-12"});
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["error"] == "not_converged");
  CHECK(j["estimate"]["iters"] == 3);
}
