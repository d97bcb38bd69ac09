#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qwire/cli.hpp"
#include "qwire/bc.hpp"
#include "qwire/index.hpp"
#include "qwire/io.hpp"
#include "qwire/types.hpp"

using namespace qwire;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path dir() {
  const auto d = std::filesystem::temp_directory_path() / "qwire_cli_tests";
  std::filesystem::create_directories(d);
  return d;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

const std::string kTwoPi = "6.2831853071795862";

std::string free_config(const std::string& bc, double lmax = 3.0) {
  return "[interval]\na = 0\nb = " + kTwoPi + "\nmetric = 1\npotential = 0\n[bc]\n" + bc +
         "[solve]\nlambda_min = -1\nlambda_max = " + format_double(lmax) + "\n";
}

bool single_line(const std::string& s) {
  return !s.empty() && s.back() == '\n' && s.find('\n') == s.size() - 1;
}

}  // namespace

TEST_CASE("cli: spectrum of the dirichlet interval") {
  const std::string cfg = write_file("dir.cfg", free_config("kind = dirichlet\n", 10));
  const Result r = run_cli({"spectrum", "--config", cfg, "--lambda-min", "-1", "--lambda-max", "3"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "# qwire-spectra v1");
  const double expected[] = {0.125, 0.5, 1.125, 2.0};
  for (int k = 0; k < 4; ++k) {
    std::istringstream ls(lines[k + 1]);
    double lambda, residual;
    int mult;
    ls >> lambda >> mult >> residual;
    CHECK(std::fabs(lambda - expected[k]) < 1e-8);
    CHECK(mult == 1);
  }
}

TEST_CASE("cli: output is deterministic across runs and thread counts") {
  const std::string cfg = write_file("per.cfg", free_config("kind = quasiperiodic\ntheta = 0.4\n", 6));
  const Result a = run_cli({"spectrum", "--config", cfg, "--threads", "1"});
  const Result b = run_cli({"spectrum", "--config", cfg, "--threads", "3"});
  const Result c = run_cli({"spectrum", "--config", cfg});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  const std::string target = (dir() / "per.out").string();
  std::filesystem::remove(target);
  const Result f = run_cli({"spectrum", "--config", cfg, "--output", target});
  CHECK(f.code == 0);
  CHECK(f.out.empty());
  std::ifstream in(target);
  std::stringstream got;
  got << in.rdbuf();
  CHECK(got.str() == a.out);
}

TEST_CASE("cli: wire-check") {
  const std::string mat = (dir() / "wire.mat").string();
  {
    std::ofstream out(mat);
    write_matrix(out, make_quasiperiodic(0).matrix());
  }
  Result r = run_cli({"wire-check", "--bc", mat, "--perm", "2 1", "--phases", "0 0"});
  CHECK(r.code == 0);
  CHECK(r.out == "PASS residual<1e-10\n");

  r = run_cli({"wire-check", "--bc", mat, "--perm", "2 1", "--phases", "0.7 -0.7"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("FAIL residual=", 0) == 0);

  const std::string dmat = (dir() / "dirichlet.mat").string();
  {
    std::ofstream out(dmat);
    write_matrix(out, make_dirichlet(1).matrix());
  }
  r = run_cli({"wire-check", "--bc", dmat, "--perm", "2 1"});
  CHECK(r.out == "PASS residual<1e-10 degenerate\n");

  r = run_cli({"wire-check", "--bc", mat, "--perm", "2 2"});
  CHECK(r.code == 4);
  CHECK(single_line(r.err));
}

TEST_CASE("cli: maslov") {
  const std::string path = (dir() / "loop.crv").string();
  {
    std::ofstream out(path);
    write_curve(out, sample_curve([](double t) { return CMatrix(std::polar(1.0, t + 0.01) * CMatrix::Identity(2, 2)); }, 41));
  }
  Result r = run_cli({"maslov", "--curve", path});
  CHECK(r.code == 0);
  CHECK(r.out == "cayley 2\nwinding 2\nindex 2\n");

  const std::string coarse = (dir() / "coarse.crv").string();
  {
    std::ofstream out(coarse);
    write_curve(out, sample_curve([](double t) { return CMatrix(std::polar(1.0, 3 * t + 0.01) * CMatrix::Identity(2, 2)); }, 8));
  }
  r = run_cli({"maslov", "--curve", coarse});
  CHECK(r.code == 3);
  CHECK(single_line(r.err));
}

TEST_CASE("cli: eigenfunctions, evolve, edge-scan, oracle-compare") {
  const std::string cfg = write_file("neu.cfg", free_config("kind = neumann\n", 1));
  Result r = run_cli({"eigenfunctions", "--config", cfg, "--lambda", "0.125", "--samples", "5"});
  REQUIRE(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2 + 5);
  {
    std::istringstream ls(lines.back());
    double lambda, x, re, im;
    int mode, interval;
    ls >> lambda >> mode >> interval >> x >> re >> im;
    CHECK(x == doctest::Approx(2 * kPi));
    CHECK(std::fabs(std::fabs(re) - 1 / std::sqrt(kPi)) < 1e-6);
  }

  const std::string per = write_file("per2.cfg", free_config("kind = quasiperiodic\ntheta = 0\n", 40));
  r = run_cli({"evolve", "--config", per, "--initial-re", "exp(-(x-3)^2)", "--times", "0 0.5 1", "--modes", "16"});
  REQUIRE(r.code == 0);
  lines = lines_of(r.out);
  CHECK(lines[0] == "# modes 16");
  CHECK(lines[3] == "# t x re im");
  CHECK(lines.size() == 4 + 3 * 257);

  const std::string edge = write_file("edge.cfg",
      "[interval]\na = 0\nb = 3.1415926535897931\n[bc]\nkind = dirichlet\n");
  r = run_cli({"edge-scan", "--config", edge, "--t", "1.0 0.5"});
  REQUIRE(r.code == 0);
  lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "# t lambda_min collar_mass");

  r = run_cli({"oracle-compare", "--config", cfg, "--cells", "400", "--count", "3", "--lambda-max", "2"});
  REQUIRE(r.code == 0);
  lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  for (int k = 1; k <= 3; ++k) CHECK(lines[k].substr(lines[k].size() - 4) == "PASS");
}

TEST_CASE("cli: failures exit nonzero with one diagnostic line") {
  Result r = run_cli({});
  CHECK(r.code == 2);
  CHECK(single_line(r.err));
  r = run_cli({"transmogrify"});
  CHECK(r.code == 2);
  r = run_cli({"spectrum"});
  CHECK(r.code == 2);
  CHECK(single_line(r.err));
  r = run_cli({"spectrum", "--config", "/nonexistent.cfg"});
  CHECK(r.code == 4);
  CHECK(single_line(r.err));
  const std::string bad = write_file("bad.cfg", "[interval]\na = 0\nb = 1\nmetric = 1+\n");
  r = run_cli({"spectrum", "--config", bad});
  CHECK(r.code == 4);
  CHECK(single_line(r.err));
  const std::string cfg = write_file("ok.cfg", free_config("kind = dirichlet\n"));
  r = run_cli({"spectrum", "--config", cfg, "--grid", "10"});
  CHECK(r.code == 4);
  r = run_cli({"spectrum", "--config", cfg, "--output", "/nonexistent/dir/out.txt"});
  CHECK(r.code == 4);
  CHECK(single_line(r.err));
  r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("spectrum") != std::string::npos);
}
