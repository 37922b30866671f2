#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <sys/wait.h>

#include "horolab/error.hpp"
#include "horolab/suites.hpp"

using namespace horolab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::NumericalFailure;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("horolab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HOROLAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig small_config() {
  RunConfig cfg = parse_config("n = 3\nseed = 5\n");
  cfg.samples["iwasawa"] = 50;
  cfg.samples["busemann.pairs"] = 200;
  return cfg;
}

}  // namespace

TEST(Config, TextRoundTrip) {
  const RunConfig cfg = parse_config(
      "# comment\nn = 4\ntau = 0.6, 0.2, -0.2, -0.6\nseed = 42\ndil.samples = 7\n"
      "calibration.c_push = 0.75\npolicy.construction = 1e-9\n");
  EXPECT_EQ(cfg.n, 4);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.samples_for("dil", 1), 7);
  EXPECT_EQ(cfg.calibration.c_push, 0.75);
  EXPECT_EQ(parse_config(cfg.to_text()).to_text(), cfg.to_text());
}

TEST(Config, Rejections) {
  EXPECT_EQ(kind_of([] { parse_config("bogus = 1\n"); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { parse_config("n = 1\n"); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { parse_config("calibration.nope = 1\n"); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { parse_config("n = 3\ntau = 1, 1, -2\n"); }), ErrorKind::NotRegular);
  EXPECT_EQ(kind_of([] { parse_config("seed = abc\n"); }), ErrorKind::InvalidArgument);
}

TEST(Lockfile, RoundTripAndMismatch) {
  const fs::path dir = scratch("lock");
  const RunConfig cfg3 = parse_config("n = 3\n");
  write_lockfile((dir / "a.lock").string(), cfg3, {{"c_push", 0.5}, {"lip_cap", 0.6}});
  const auto back = read_lockfile((dir / "a.lock").string(), cfg3);
  EXPECT_EQ(back.at("c_push"), 0.5);
  EXPECT_EQ(back.at("lip_cap"), 0.6);
  const RunConfig cfg4 = parse_config("n = 4\n");
  EXPECT_EQ(kind_of([&] { read_lockfile((dir / "a.lock").string(), cfg4); }), ErrorKind::CalibrationFailure);
}

TEST(Report, CsvFormat) {
  SuiteReport r;
  r.suite = "demo";
  r.n = 3;
  r.seed = 9;
  r.add_le("a", 0.1, 0.2);
  r.add_ge("b", 0.1, 0.2);
  EXPECT_EQ(csv_header(), "suite,check_id,n,seed,measured,bound,pass\n");
  const std::string csv = to_csv(r);
  EXPECT_EQ(csv, "suite,check_id,n,seed,measured,bound,pass\ndemo,a,3,9,0.1,0.2,true\ndemo,b,3,9,0.1,0.2,false\n");
  EXPECT_FALSE(r.all_pass());
  EXPECT_EQ(r.failures(), 1);
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Determinism, SuitesAreByteIdentical) {
  const RunConfig cfg = small_config();
  for (const char* s : {"iwasawa", "busemann", "dil"}) {
    const SuiteReport a = run_suite(s, cfg), b = run_suite(s, cfg);
    EXPECT_EQ(to_csv(a), to_csv(b)) << s;
    EXPECT_EQ(to_json(a), to_json(b)) << s;
  }
  RunConfig other = cfg;
  other.seed = 6;
  EXPECT_NE(to_csv(run_suite("iwasawa", cfg)), to_csv(run_suite("iwasawa", other)));
}

TEST(Determinism, GoldenFillBitForBit) {
  const SphereFile input = parse_sphere(slurp(HOROLAB_TEST_DATA "/fixtures/sl3_m0.sphere.json"));
  const FillResult res = fill_sphere(input, RunConfig{});
  EXPECT_EQ(res.disk.dump(2) + "\n", slurp(HOROLAB_TEST_DATA "/golden/sl3_m0.disk.json"));
  EXPECT_TRUE(res.report.all_pass());
}

TEST(Suites, UnknownSuite) {
  EXPECT_EQ(kind_of([] { run_suite("nope", RunConfig{}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { run_distort("rank3", RunConfig{}); }), ErrorKind::InvalidArgument);
}

TEST(Suites, OmegaNeedsRankTwo) {
  RunConfig cfg = parse_config("n = 2\n");
  EXPECT_EQ(kind_of([&] { run_suite("omega_infty", cfg); }), ErrorKind::InvalidArgument);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  spit(dir / "ok.cfg", "n = 3\nseed = 2\niwasawa.samples = 40\nout_dir = " + dir.string() + "\n");
  spit(dir / "bad.cfg", "n = 3\nwhat = 1\n");
  spit(dir / "tau.cfg", "n = 3\ntau = 1, 1, -2\n");
  EXPECT_EQ(run_cli("verify --suite iwasawa --config " + (dir / "ok.cfg").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "iwasawa.csv"));
  EXPECT_TRUE(fs::exists(dir / "iwasawa.json"));
  EXPECT_EQ(run_cli("verify --suite iwasawa --config " + (dir / "bad.cfg").string()), 2);
  EXPECT_EQ(run_cli("verify --suite iwasawa --config " + (dir / "tau.cfg").string()), 2);
  EXPECT_EQ(run_cli("verify --suite nope --config " + (dir / "ok.cfg").string()), 2);
  EXPECT_EQ(run_cli("verify --suite iwasawa"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);

  spit(dir / "broken.sphere.json", "{\"schema\": \"horolab.sphere/1\", \"n\": 3}");
  EXPECT_EQ(run_cli("fill --input " + (dir / "broken.sphere.json").string() + " --output " +
                    (dir / "o.json").string() + " --config " + (dir / "ok.cfg").string()),
            4);
  EXPECT_FALSE(fs::exists(dir / "o.json"));
}

TEST(Cli, FillMatchesGolden) {
  const fs::path dir = scratch("fill");
  spit(dir / "c.cfg", "out_dir = " + dir.string() + "\n");
  EXPECT_EQ(run_cli("fill --input " HOROLAB_TEST_DATA "/fixtures/sl3_m0.sphere.json --output " +
                    (dir / "disk.json").string() + " --config " + (dir / "c.cfg").string()),
            0);
  EXPECT_EQ(slurp((dir / "disk.json").string()), slurp(HOROLAB_TEST_DATA "/golden/sl3_m0.disk.json"));
  EXPECT_TRUE(fs::exists(dir / "fill.csv"));
}

TEST(Cli, CalibrateWritesLockfile) {
  const fs::path dir = scratch("calib");
  spit(dir / "c.cfg", "n = 3\nseed = 3\npushing.samples = 40\nout_dir = " + dir.string() + "\n");
  const int rc = run_cli("verify --suite pushing --calibrate --config " + (dir / "c.cfg").string());
  EXPECT_TRUE(rc == 0 || rc == 1);
  ASSERT_TRUE(fs::exists(dir / "horolab.lock"));
  const auto locked = read_lockfile((dir / "horolab.lock").string(), parse_config("n = 3\n"));
  EXPECT_TRUE(locked.count("c_push"));
}
