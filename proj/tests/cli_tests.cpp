#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "stcris/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

const std::string& cli_bin() {
  static const std::string bin = [] {
    const char* env = std::getenv("STC_CLI_BIN");
    REQUIRE_MESSAGE(env != nullptr, "STC_CLI_BIN must point at the CLI binary");
    return std::string(env);
  }();
  return bin;
}

const std::string& config_dir() {
  static const std::string dir = [] {
    const char* env = std::getenv("STC_CONFIG_DIR");
    REQUIRE_MESSAGE(env != nullptr, "STC_CONFIG_DIR must point at configs/");
    return std::string(env);
  }();
  return dir;
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() /
          ("stcris_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

CliResult run_cli(const Workspace& ws, const std::string& args,
                  const std::string& env_prefix = "") {
  const std::string out_file = ws.path("_stdout");
  const std::string err_file = ws.path("_stderr");
  const std::string cmd = env_prefix + "\"" + cli_bin() + "\" " + args + " >\"" +
                          out_file + "\" 2>\"" + err_file + "\"";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spectrum writes csv plus manifest and a one-line summary") {
  Workspace ws;
  const auto r = run_cli(ws, "spectrum --code 00000001 --tau 5e-4 --out " +
                                 ws.path("s.csv"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("17 harmonics") != std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
  const std::string csv = slurp(ws.path("s.csv"));
  CHECK(csv.rfind("n,freq_hz,re,im,mag,phase_deg\n", 0) == 0);
  const json m = json::parse(slurp(ws.path("s.csv.manifest.json")));
  CHECK(m.at("command") == "spectrum");
  CHECK(m.at("config").at("nmax") == 8);
  CHECK(m.at("outputs")[0] == "s.csv");
}

TEST_CASE("usage and config errors exit 2, internal output stays quiet") {
  Workspace ws;
  CHECK(run_cli(ws, "spectrum --code 2xyz --out " + ws.path("x.csv")).exit_code == 2);
  CHECK(run_cli(ws, "spectrum --out " + ws.path("x.csv")).exit_code == 2);
  CHECK(run_cli(ws, "frobnicate").exit_code == 2);
  CHECK(run_cli(ws, "").exit_code == 2);
  const auto bad = run_cli(ws, "steer --shift 5 --length 8 --out " + ws.path("p.csv"));
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("evanescent") != std::string::npos);
  CHECK(bad.out.empty());
  CHECK(run_cli(ws, "--help").exit_code == 0);
  CHECK(run_cli(ws, "linksim --config " + ws.path("missing.json") + " --out " +
                        ws.path("d")).exit_code == 2);
}

TEST_CASE("steer reports predicted and measured peak") {
  Workspace ws;
  const auto r = run_cli(ws, "steer --shift 2 --length 8 --out " + ws.path("p.csv"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("predicted_deg=30 ") != std::string::npos);
  CHECK(r.out.find("peak_deg=30.00") != std::string::npos);
  CHECK(slurp(ws.path("p.csv")).rfind("theta_deg,re,im,mag_db\n", 0) == 0);
  // Endfire warning goes to stderr, not stdout.
  const auto ef = run_cli(ws, "steer --shift 4 --length 8 --out " + ws.path("e.csv"));
  CHECK(ef.exit_code == 0);
  CHECK(ef.err.find("endfire") != std::string::npos);
  CHECK(ef.out.find("endfire") == std::string::npos);
}

TEST_CASE("codebook command covers both design methods") {
  Workspace ws;
  const auto shift = run_cli(
      ws, "codebook --scheme 8psk --length 8 --method shift --out " + ws.path("a.json"));
  CHECK(shift.exit_code == 0);
  const json a = json::parse(slurp(ws.path("a.json")));
  CHECK(a.at("scheme").at("M") == 8);
  CHECK(a.at("entries").size() == 8);

  const auto search = run_cli(ws,
                              "codebook --scheme qpsk --length 8 --method search "
                              "--amp-tol 0.05 --phase-tol 0.2 --out " +
                                  ws.path("b.json"));
  CHECK(search.exit_code == 0);
  const json b = json::parse(slurp(ws.path("b.json")));
  CHECK(b.at("entries").size() == 4);
  CHECK(b.at("quality").at("max_phase_err_rad").get<double>() <= 0.2);

  // Unreachable scheme: refusal with exit 2.
  CHECK(run_cli(ws, "codebook --scheme 16psk --length 4 --out " + ws.path("c.json"))
            .exit_code == 2);
}

TEST_CASE("map command respects the enumeration cap") {
  Workspace ws;
  const auto ok = run_cli(ws, "map --length 4 --harmonic 1 --out " + ws.path("m.csv"));
  CHECK(ok.exit_code == 0);
  const std::string csv = slurp(ws.path("m.csv"));
  CHECK(csv.rfind("code,re,im,mag,phase_deg\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);  // header + 16 codes
  const auto refused =
      run_cli(ws, "map --length 30 --harmonic 1 --out " + ws.path("n.csv"));
  CHECK(refused.exit_code == 2);
  CHECK(refused.err.find("cap") != std::string::npos);
}

TEST_CASE("linksim then export-schedule then replay, all reproducible") {
  Workspace ws;
  const std::string cfg = config_dir() + "/qpsk_ideal.json";
  const auto a = run_cli(ws, "linksim --config " + cfg + " --out " + ws.path("A"));
  CHECK(a.exit_code == 0);
  CHECK(a.out.find("ser=0 ") != std::string::npos);
  const auto b = run_cli(ws, "linksim --config " + cfg + " --out " + ws.path("B"));
  CHECK(b.exit_code == 0);
  for (const char* name :
       {"report.json", "spectrum.csv", "constellation.csv", "manifest.json"}) {
    CHECK(slurp(ws.dir / "A" / name) == slurp(ws.dir / "B" / name));
  }
  const auto rep = run_cli(ws, "replay --manifest " + ws.path("A/manifest.json") +
                                   " --out " + ws.path("C"));
  CHECK(rep.exit_code == 0);
  for (const char* name :
       {"report.json", "spectrum.csv", "constellation.csv", "manifest.json"}) {
    CHECK(slurp(ws.dir / "A" / name) == slurp(ws.dir / "C" / name));
  }

  // Schedule export from a codebook file.
  run_cli(ws, "codebook --scheme qpsk --length 8 --tau 5e-4 --out " + ws.path("bk.json"));
  const auto ex = run_cli(ws, "export-schedule --codebook " + ws.path("bk.json") +
                                  " --payload DE --reps 1 --columns 8 --shift 2 "
                                  "--out " + ws.path("sched.txt"));
  CHECK(ex.exit_code == 0);
  const std::string sched = slurp(ws.path("sched.txt"));
  CHECK(sched.rfind("# stcris-schedule v1\n", 0) == 0);
  CHECK(sched.find("# symbols=4") != std::string::npos);
  const auto rs = run_cli(ws, "replay --manifest " + ws.path("sched.txt.manifest.json") +
                                  " --out " + ws.path("D"));
  CHECK(rs.exit_code == 0);
  CHECK(slurp(ws.dir / "D" / "sched.txt") == sched);
}

TEST_CASE("STC_SEED overrides the config seed and lands in the manifest") {
  Workspace ws;
  const std::string cfg = config_dir() + "/qpsk_awgn15.json";
  const auto base = run_cli(ws, "linksim --config " + cfg + " --out " + ws.path("A"));
  CHECK(base.exit_code == 0);
  const auto overridden = run_cli(
      ws, "linksim --config " + cfg + " --out " + ws.path("B"), "STC_SEED=99 ");
  CHECK(overridden.exit_code == 0);
  CHECK(slurp(ws.dir / "A" / "constellation.csv") !=
        slurp(ws.dir / "B" / "constellation.csv"));
  const json m = json::parse(slurp(ws.path("B/manifest.json")));
  CHECK(m.at("config").at("seed") == 99);
  // Replay ignores the environment and uses the recorded seed.
  const auto rep = run_cli(ws, "replay --manifest " + ws.path("B/manifest.json") +
                                   " --out " + ws.path("C"), "STC_SEED=12345 ");
  CHECK(rep.exit_code == 0);
  CHECK(slurp(ws.dir / "B" / "constellation.csv") ==
        slurp(ws.dir / "C" / "constellation.csv"));
  CHECK(run_cli(ws, "linksim --config " + cfg + " --out " + ws.path("E"),
                "STC_SEED=banana ").exit_code == 2);
}

TEST_CASE("forcing the scalar lane reproduces the default output") {
  Workspace ws;
  const auto a = run_cli(ws, "spectrum --code 01101001 --out " + ws.path("a.csv"));
  const auto b = run_cli(ws, "spectrum --code 01101001 --out " + ws.path("b.csv"),
                         "STC_KERNELS=scalar ");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(slurp(ws.path("a.csv")) == slurp(ws.path("b.csv")));
  CHECK(run_cli(ws, "spectrum --code 01101001 --out " + ws.path("c.csv"),
                "STC_KERNELS=quantum ").exit_code == 2);
}

}  // TEST_SUITE
