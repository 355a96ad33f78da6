#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "branchsolve/app.hpp"
#include "branchsolve/config.hpp"
#include "branchsolve/error.hpp"
#include "branchsolve/field_io.hpp"
#include "branchsolve/generators.hpp"
#include "branchsolve/unfold.hpp"
#include "test_util.hpp"

using namespace branchsolve;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("branchsolve_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(BRANCHSOLVE_CLI) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fixture(const std::string& name) { return std::string(BRANCHSOLVE_FIXTURES) + "/" + name; }

std::string read_text(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string without_timing(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line))
    if (line.rfind("wall_time_ms", 0) != 0) out += line + "\n";
  return out;
}

double report_value(const fs::path& p, const std::string& key) {
  std::istringstream is(read_text(p));
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(key + " = ", 0) == 0) return std::stod(line.substr(key.size() + 3));
  return -1.0;
}

}  // namespace

TEST_CASE("field files round-trip exactly") {
  const Grid g = make_grid(3, 4, 9, 24, 4);
  SheetedField f = random_field(g, 2, 12);
  f.set_axis({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  std::stringstream ss;
  write_field(ss, f);
  const AnyField back = read_field(ss);
  REQUIRE(std::holds_alternative<SheetedField>(back));
  const auto& s = std::get<SheetedField>(back);
  CHECK(s.grid() == g);
  CHECK(s.components() == 2);
  CHECK(std::equal(s.values().begin(), s.values().end(), f.values().begin()));
  REQUIRE(s.axis().has_value());
  CHECK(*s.axis() == *f.axis());

  const UnfoldedField u = unfold(f);
  std::stringstream su;
  write_field(su, u);
  const AnyField ub = read_field(su);
  REQUIRE(std::holds_alternative<UnfoldedField>(ub));
  const auto& uu = std::get<UnfoldedField>(ub);
  CHECK(std::equal(uu.values().begin(), uu.values().end(), u.values().begin()));

  const fs::path dir = scratch("io");
  save_field(dir / "f.field", f);
  const SheetedField loaded = load_sheeted(dir / "f.field");
  CHECK(max_diff(loaded, f) == 0.0);
  std::stringstream again;
  write_field(again, loaded);
  std::stringstream first;
  write_field(first, f);
  CHECK(again.str() == first.str());

  std::stringstream bad("representation = sheeted\nq = 2\n\n");
  CHECK_THROWS_AS(read_field(bad), IoError);
  CHECK_THROWS_AS(load_sheeted(dir / "missing.field"), IoError);
}

TEST_CASE("config parsing") {
  std::istringstream is(
      "# comment\n"
      "q = 3\nk = 4\nN_r = 33\nN_theta = 24\nN_y = 8\n"
      "boundary = manufactured\n"
      "manufactured = m=4, z=1, amp=1/0.5, fr=0.25 ; m=8\n"
      "epsilon = 1e-3\nthreads = 3\nseed = 9\n");
  const RunConfig cfg = parse_config(is);
  CHECK(cfg.grid.q == 3);
  CHECK(cfg.grid.k == 4);
  CHECK(cfg.grid.n_rhat == 33);
  CHECK(cfg.grid.n_theta_hat == 24);
  CHECK(cfg.grid.n_y == std::vector<int>{8});
  CHECK(cfg.epsilon == 1e-3);
  CHECK(cfg.threads == 3);
  CHECK(cfg.seed == 9);
  REQUIRE(cfg.manufactured.size() == 2);
  CHECK(cfg.manufactured[0].m == 4);
  CHECK(cfg.manufactured[0].z == std::vector<int>{1});
  CHECK(cfg.manufactured[0].amplitude == cplx(1.0, 0.5));
  CHECK(cfg.manufactured[0].flux_r == cplx(0.25, 0.0));
  CHECK(cfg.manufactured[1].m == 8);

  std::istringstream typo("N_rr = 3\n");
  CHECK_THROWS_AS(parse_config(typo), IoError);
  std::istringstream junk("q = two\n");
  CHECK_THROWS_AS(parse_config(junk), IoError);
  CHECK_THROWS_AS(load_config("/nonexistent/branchsolve.cfg"), IoError);
  CHECK_THROWS_AS(parse_manufactured("m=3, w=1", 1), IoError);
}

TEST_CASE("problem data built from a config") {
  RunConfig cfg;
  cfg.grid = make_grid(2, 3, 17, 24, 4).spec();
  cfg.boundary = "harmonic";
  cfg.epsilon = 0.5;
  const auto data = build_problem_data(cfg, 1);
  CHECK(max_diff(data.phi, 0.5 * branched_power(Grid(cfg.grid), 3)) < 1e-13);
  cfg.boundary = "nonsense";
  CHECK_THROWS_AS(build_problem_data(cfg, 1), Error);
}

TEST_CASE("command line") {
  SUBCASE("missing config") {
    CHECK(cli("solve-poisson --config /nonexistent/x.cfg --out " + scratch("missing").string()) == kExitIo);
  }
  SUBCASE("shipped harmonic fixture") {
    const fs::path out = scratch("harmonic");
    CHECK(cli("solve-poisson --config " + fixture("q2k3_harmonic.cfg") + " --out " + out.string()) == kExitOk);
    CHECK(fs::exists(out / "u.field"));
    const double forb = report_value(out / "report.txt", "forbidden_mode_energy");
    CHECK(forb >= 0.0);
    CHECK(forb <= 1e-12);
  }
  SUBCASE("outputs do not depend on the thread count") {
    std::string reference;
    for (int t : {1, 4, 8}) {
      const fs::path out = scratch("threads" + std::to_string(t));
      REQUIRE(cli("solve-poisson --config " + fixture("q2k3_manufactured.cfg") + " --out " + out.string() +
                  " --threads " + std::to_string(t)) == kExitOk);
      std::string all;
      for (const char* f : {"u.field", "report.txt"}) all += without_timing(read_text(out / f));
      if (reference.empty())
        reference = all;
      else
        CHECK(all == reference);
    }
  }
  SUBCASE("environment supplies the thread count") {
    const fs::path out = scratch("env");
    const std::string cmd = "BRANCHSOLVE_THREADS=3 " + std::string(BRANCHSOLVE_CLI) + " gen-example --config " +
                            fixture("q2k3_manufactured.cfg") + " --out " + out.string() + " 2>/dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out / "boundary.field"));
    CHECK(fs::exists(out / "exact.field"));
  }
  SUBCASE("non-convergent nonlinear run exits 3 without a field") {
    const fs::path dir = scratch("nonconv");
    std::ofstream(dir / "run.cfg") << "q = 2\nk = 3\nN_r = 17\nN_theta = 24\nN_y = 4\n"
                                      "boundary = harmonic\nnonlinearity = mse\nepsilon = 2\nmax_iters = 4\n";
    CHECK(cli("solve-nonlinear --config " + (dir / "run.cfg").string() + " --out " + (dir / "out").string()) ==
          kExitDiverged);
    CHECK(fs::exists(dir / "out" / "trace.csv"));
    CHECK_FALSE(fs::exists(dir / "out" / "u.field"));
  }
  SUBCASE("asymmetric boundary file is rejected") {
    const fs::path dir = scratch("asym");
    const Grid g = make_grid(2, 3, 17, 24, 4);
    SheetedField phi = gen_branched_harmonic(g, 3);
    phi.at(0, 0, g.rings() - 1, 2, 1) += 0.1;
    save_field(dir / "phi.field", phi);
    std::ofstream(dir / "run.cfg") << "q = 2\nk = 3\nN_r = 17\nN_theta = 24\nN_y = 4\nboundary = file\nboundary_file = "
                                   << (dir / "phi.field").string() << "\n";
    CHECK(cli("solve-poisson --config " + (dir / "run.cfg").string() + " --out " + (dir / "out").string()) ==
          kExitInvariant);
  }
}
