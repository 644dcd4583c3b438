#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(SEDLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("list prints every scenario") {
  const auto r = run_cli("list");
  CHECK(r.code == 0);
  CHECK(r.out.find("ground_state") != std::string::npos);
  CHECK(r.out.find("planck_thermal") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run_cli("run --scenario nosuch").code == 2);
  CHECK(run_cli("analytic --quantity nosuch").code == 2);
  CHECK(run_cli("analytic --quantity ground_state --params bogus=1").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("analytic ground state") {
  const auto r = run_cli("analytic --quantity ground_state");
  CHECK(r.code == 0);
  CHECK(r.out.find("x_var=0.5\n") != std::string::npos);
  CHECK(r.out.find("p_var=0.5\n") != std::string::npos);
  CHECK(r.out.find("U=0.5\n") != std::string::npos);
}

TEST_CASE("repeated runs write identical reports") {
  const fs::path base = fs::temp_directory_path() / "sedlab_cli_test";
  fs::remove_all(base);
  fs::create_directories(base);
  {
    std::ofstream cfg(base / "cfg.json");
    cfg << R"({"n_samples": 65536, "n_ensemble": 3})";
  }
  const std::string common = "run --scenario ground_state --config " + (base / "cfg.json").string();
  const auto a = run_cli(common + " --jobs 1 --out " + (base / "a").string());
  const auto b = run_cli(common + " --jobs 2 --out " + (base / "b").string());
  // a short ensemble may fail sampling rows (exit 1) but never the config
  CHECK(a.code != 2);
  CHECK(a.code == b.code);
  const auto ra = slurp(base / "a" / "ground_state_report.json");
  CHECK_FALSE(ra.empty());
  CHECK(ra == slurp(base / "b" / "ground_state_report.json"));
  CHECK(slurp(base / "a" / "ground_state_report.csv") ==
        slurp(base / "b" / "ground_state_report.csv"));
  fs::remove_all(base);
}

}
