#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tnls/harness.hpp"
#include "tnls/snapshot.hpp"
#include "tnls/types.hpp"

using namespace tnls;
using namespace tnls::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("tnls_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Shell {
  int code;
  std::string err;
};

Shell cli(const std::string& args) {
  auto errf = fs::temp_directory_path() / "tnls_test_cli_stderr.txt";
  std::string cmd = std::string(TNLS_CLI_PATH) + " " + args + " >/dev/null 2>" + errf.string();
  int rc = std::system(cmd.c_str());
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, slurp(errf)};
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config parsing") {
    auto c = Config::parse("# comment\n  M = 32  \nN=2, 4 ,8 # trailing\nname = bump\nflag = true\n\n", "t");
    CHECK(c.integer("M") == 32);
    CHECK(c.nums("N") == std::vector<double>{2, 4, 8});
    CHECK(c.str("name") == "bump");
    CHECK(c.flag("flag", false));
    CHECK(c.num("missing", 1.5) == 1.5);
    CHECK(c.unused().empty());
    CHECK(c.echo()["missing"] == "1.5");

    CHECK_THROWS_AS(Config::parse("M = 1\nM = 2\n"), ValidationError);
    CHECK_THROWS_AS(Config::parse("no equals sign\n"), ValidationError);
    CHECK_THROWS_AS(Config::parse("bad key! = 1\n"), ValidationError);
    auto d = Config::parse("M = abc\nx = 1.5\n");
    CHECK_THROWS_AS(d.integer("M"), ValidationError);
    CHECK_THROWS_AS(d.integer("x"), ValidationError);
    CHECK_THROWS_AS(d.num("absent"), ValidationError);
    CHECK_THROWS_AS(d.seed(), ValidationError);
  }

  TEST_CASE("config overrides, unused keys and loading") {
    auto c = Config::parse("M = 16\ntypo = 3\n");
    c.apply_override("M=64");
    CHECK(c.integer("M") == 64);
    CHECK_THROWS_AS(c.apply_override("novalue"), ValidationError);
    CHECK(c.unused() == std::vector<std::string>{"typo"});
    try {
      c.require_all_used();
      FAIL("unused key accepted");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("typo") != std::string::npos);
    }
    try {
      Config::load("/nonexistent/dir/run.cfg");
      FAIL("missing file accepted");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/dir/run.cfg") != std::string::npos);
    }
    c.set("seed", "123");
    CHECK(c.seed() == 123u);
  }

  TEST_CASE("tables and number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(infinity) == "inf");
    CHECK(format_number(-infinity) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    Table t("t", {"a", "b", "c"});
    t.add({1.5, 2LL, std::string("x")});
    CHECK(t.csv() == "a,b,c\n1.5,2,x\n");
    CHECK(t.number(0, "a") == 1.5);
    CHECK(t.number(0, "b") == 2.0);
    CHECK_THROWS_AS(t.number(0, "c"), std::logic_error);
    CHECK_THROWS_AS(t.number(0, "zz"), std::logic_error);
    CHECK_THROWS_AS(t.add({1.0}), std::logic_error);
  }

  TEST_CASE("report statuses and fits") {
    ExperimentReport r;
    r.experiment = "x";
    r.check("ok", true, 1.0, "", "");
    CHECK(r.passed());
    // Scattered points: R^2 < 0.9 gives an inconclusive fit, which never passes.
    const auto& f = r.add_fit("scatter", "t", "x", "y", {1, 2, 4, 8}, {1, 8, 1, 8});
    CHECK(f.fit.verdict == "inconclusive");
    r.checks.push_back({"fitted", Status::inconclusive, f.fit.slope, "", "t"});
    CHECK_FALSE(r.passed());
    auto j = r.to_json();
    CHECK(j["status"] == "fail");
    CHECK(j["fits"][0]["residuals"].size() == 4);
    CHECK(j["plots"][0]["scale"] == "loglog");
    CHECK_FALSE(j.contains("wall_seconds"));
  }

  TEST_CASE("unknown experiment and empty sweep") {
    CHECK_THROWS_AS(run("nope", Config::parse("")), ValidationError);
    auto r = run("strichartz", Config::parse("N =\n"));
    CHECK(r.checks.empty());
    CHECK(r.table("samples").rows.empty());
    CHECK(r.passed());
  }

  TEST_CASE("zero profile gives zero Z values") {
    auto r = run("extinction", Config::parse("profile = zero\nM = 64\nN = 4\nT = 2,4\nlinf = false\n"));
    const auto& t = r.table("z");
    REQUIRE(t.rows.size() == 2);
    for (std::size_t k = 0; k < t.rows.size(); ++k) CHECK(t.number(k, "Z") == 0.0);
  }

  TEST_CASE("validation failures") {
    CHECK_THROWS_AS(run("euclid-compare", Config::parse("L_box = 16\nR = 8\n")), ValidationError);
    CHECK_THROWS_AS(run("solve", Config::parse("data = plane\nunused_key = 1\n")), ValidationError);
    CHECK_THROWS_AS(run("solve", Config::parse("data = nonsense\n")), ValidationError);
    CHECK_THROWS_AS(run("solve", Config::parse("data = random\n")), ValidationError);
  }

  TEST_CASE("field snapshot round trip and solve output") {
    auto dir = scratch("fieldio");
    auto r = run("field-io", Config::parse("data = plane\nM = 8\n"), {dir.string()});
    CHECK(r.passed());
    CHECK(fs::file_size(dir / "fields" / "roundtrip.tnls") == 20u + 16u * 512u);
    auto s = run("solve", Config::parse("data = file\nM = 8\ninterval = 0,0.01\ndt = 1e-3\nsample_stride = 5\n"
                                        "data.path = " + (dir / "fields" / "roundtrip.tnls").string() + "\n"),
                 {dir.string()});
    CHECK(s.table("trajectory").rows.size() == 3);
    CHECK(fs::exists(dir / "fields" / "sample_00002.tnls"));
    const auto& t = s.table("trajectory");
    CHECK(std::fabs(t.number(2, "mass") / t.number(0, "mass") - 1) < 1e-12);
  }

  TEST_CASE("determinism of written reports") {
    auto a = scratch("det_a"), b = scratch("det_b");
    std::string text = "N = 2\nsamples = 2\nM = 16\nseed = 99\n";
    run("strichartz", Config::parse(text)).write(a.string());
    run("strichartz", Config::parse(text)).write(b.string());
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "tables" / "samples.csv") == slurp(b / "tables" / "samples.csv"));
    auto c = scratch("det_c");
    run("strichartz", Config::parse("N = 2\nsamples = 2\nM = 16\nseed = 100\n")).write(c.string());
    CHECK(slurp(a / "tables" / "samples.csv") != slurp(c / "tables" / "samples.csv"));
  }

  TEST_CASE("command line exit codes") {
    auto dir = scratch("cli");
    auto ok = cli("field-io --seed 3 --out " + (dir / "out").string() + " --override M=8");
    CHECK(ok.code == 0);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "tables" / "roundtrip.csv"));

    auto missing = cli("solve --config " + (dir / "absent.cfg").string());
    CHECK(missing.code == 1);
    CHECK(missing.err.find((dir / "absent.cfg").string()) != std::string::npos);

    CHECK(cli("nosuchcommand").code == 1);
    CHECK(cli("solve --nosuchflag").code == 1);
    CHECK(cli("solve --override M=abc").code == 1);

    {
      std::ofstream cfg(dir / "run.cfg");
      cfg << "data = random\nM = 16\ninterval = 0,0.01\n";
    }
    auto seeded = cli("solve --config " + (dir / "run.cfg").string() + " --seed 5 --threads 1 --out " +
                      (dir / "s1").string());
    CHECK(seeded.code == 0);
    auto again = cli("solve --config " + (dir / "run.cfg").string() + " --seed 5 --out " + (dir / "s2").string());
    CHECK(again.code == 0);
    CHECK(slurp(dir / "s1" / "tables" / "trajectory.csv") == slurp(dir / "s2" / "tables" / "trajectory.csv"));

    // Focusing sign plus a tiny blow-up factor: the first H1 increase is a numerical abort.
    auto abort = cli("solve --config " + (dir / "run.cfg").string() +
                     " --seed 5 --override data.h1=20 --override rho=-1 --override blowup_factor=1.000000001");
    CHECK(abort.code == 2);
    CHECK(abort.err.find("numerical abort") != std::string::npos);
  }
}
