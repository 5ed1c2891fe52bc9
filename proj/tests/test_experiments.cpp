#include "zeno/experiments.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

using namespace zeno::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag)
{
  const fs::path dir = fs::temp_directory_path() / ("zeno-test-" + tag + "-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> errors_of(const std::string& text)
{
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& errors, const std::string& needle)
{
  for (const auto& e : errors) {
    if (e.find(needle) != std::string::npos) return true;
  }
  return false;
}

int cli(const std::string& args)
{
  const std::string cmd = std::string(ZENO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text)
{
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("defaults are filled in and the config echoes")
{
  const auto cfg = parse_config(R"({"experiment": "fig4", "grid": {"m": [1, 2, 4]}})");
  CHECK(cfg.experiment == "fig4");
  CHECK(cfg.threads == 1);
  CHECK(cfg.grid["m"] == Json::array({1, 2, 4}));
  CHECK(cfg.grid.contains("total_angle"));
  const Json once = cfg.to_json();
  CHECK(parse_config(once.dump()).to_json() == once);
  for (const auto& info : experiment_catalog()) {
    const auto c = parse_config(Json{{"experiment", info.id}}.dump());
    CHECK(c.grid.size() == info.params.size());
  }
}

TEST_CASE("invalid configs report the field and its line")
{
  const auto empty = errors_of("{\n  \"experiment\": \"fig2\",\n  \"grid\": {\n    \"m_stage\": []\n  }\n}");
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].find("line 4") == 0);
  CHECK(any_contains(empty, "grid.m_stage: grid must not be empty"));

  const auto phi = errors_of("{\"experiment\": \"custom\",\n\"grid\": {\"phi\": 7}}");
  REQUIRE(phi.size() == 1);
  CHECK(any_contains(phi, "line 2: grid.phi: out of range"));

  const auto many = errors_of("{\"experiment\": \"fig5\", \"threads\": 0, \"colour\": 1,\n \"grid\": {\"m\": [1, 2.5], \"psi\": 1}}");
  CHECK(any_contains(many, "threads"));
  CHECK(any_contains(many, "colour: unknown key"));
  CHECK(any_contains(many, "line 2: grid.m[1]: expected an integer"));
  CHECK(any_contains(many, "grid.psi: unknown parameter"));

  CHECK(any_contains(errors_of("{\"experiment\": \"fig99\"}"), "unknown experiment"));
  CHECK(any_contains(errors_of("{}"), "experiment: required"));
  CHECK(any_contains(errors_of("{\n\"experiment\": \"fig2\",,\n}"), "line 2: syntax error"));
  CHECK(any_contains(errors_of("[1, 2]"), "JSON object"));
  CHECK(any_contains(errors_of(R"({"experiment": "invariance", "grid": {"g_min": [0.1, 0.1]}})"), "two distinct"));
  CHECK(any_contains(errors_of(R"({"experiment": "blockade-grid", "grid": {"m": 3}})"), "fock_cutoff"));
  CHECK(any_contains(errors_of(R"({"experiment": "fig10", "grid": {"marked_sign": 0}})"), "+1 or -1"));
  CHECK(any_contains(errors_of(R"({"experiment": "fig6", "integrator": {"method": "euler"}})"), "integrator.method"));
}

TEST_CASE("runs are byte-identical across thread counts")
{
  const fs::path dir = scratch_dir("threads");
  Json base = {{"experiment", "fig8"}, {"grid", {{"m", {1, 8, 64, 512}}, {"phi", {0.1, 0.5, 1.2}}}}};
  std::vector<std::string> outputs;
  for (int threads : {1, 3, 8}) {
    base["threads"] = threads;
    base["output"] = (dir / std::to_string(threads)).string();
    const auto files = run_experiment(parse_config(base.dump()));
    REQUIRE(files.size() == 1);
    outputs.push_back(slurp(files[0]));
  }
  CHECK(outputs[0] == outputs[1]);
  CHECK(outputs[0] == outputs[2]);
  CHECK(outputs[0].rfind("phi,m,p_marked,p_destroyed\n", 0) == 0);
  // 12 rows plus the header.
  CHECK(std::count(outputs[0].begin(), outputs[0].end(), '\n') == 13);
  fs::remove_all(dir);
}

TEST_CASE("trajectory mode is reproducible per seed")
{
  const fs::path dir = scratch_dir("seed");
  Json cfg = {{"experiment", "custom"},
              {"output", dir.string()},
              {"seed", 11},
              {"grid", {{"m_ops", 20}, {"trajectories", 500}, {"family", "destruction"}}}};
  const std::string a = slurp(run_experiment(parse_config(cfg.dump()))[0]);
  const std::string b = slurp(run_experiment(parse_config(cfg.dump()))[0]);
  CHECK(a == b);
  cfg["seed"] = 12;
  CHECK(slurp(run_experiment(parse_config(cfg.dump()))[0]) != a);
  fs::remove_all(dir);
}

TEST_CASE("format_double round-trips")
{
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("reference lists every experiment")
{
  const std::string md = reference_markdown();
  for (const auto& info : experiment_catalog()) {
    CHECK(md.find(info.id) != std::string::npos);
    for (const auto& p : info.params) CHECK(md.find(p.name) != std::string::npos);
  }
}

TEST_CASE("command-line exit codes")
{
  const fs::path dir = scratch_dir("cli");
  const auto good = write(dir, "good.json", Json{{"experiment", "fig5"}, {"output", (dir / "out").string()},
                                                 {"grid", {{"m", {1, 2}}, {"phi", {1.0}}}}}
                                                .dump());
  const auto bad = write(dir, "bad.json", R"({"experiment": "fig5", "grid": {"m": []}})");
  write(dir, "blocker", "not a directory");
  const auto blocked = write(dir, "blocked.json",
                             Json{{"experiment", "fig5"}, {"output", (dir / "blocker" / "sub").string()}}.dump());
  // Valid config whose CSV path is taken by a directory: fails only at run time.
  fs::create_directories(dir / "taken" / "fig5.csv");
  const auto broken = write(dir, "broken.json",
                            Json{{"experiment", "fig5"}, {"output", (dir / "taken").string()}, {"grid", {{"m", {1}}}}}
                                .dump());

  CHECK(cli("list-experiments") == 0);
  CHECK(cli("list-experiments --reference") == 0);
  CHECK(cli("validate " + good.string()) == 0);
  CHECK(cli("validate " + bad.string()) == 1);
  CHECK(cli("validate " + (dir / "missing.json").string()) == 1);
  CHECK(cli("run " + good.string()) == 0);
  CHECK(fs::exists(dir / "out" / "fig5.csv"));
  CHECK(cli("run " + good.string() + " --threads 2 --out " + (dir / "other").string()) == 0);
  CHECK(slurp(dir / "out" / "fig5.csv") == slurp(dir / "other" / "fig5.csv"));
  CHECK(cli("run " + bad.string()) == 1);
  CHECK(cli("validate " + blocked.string()) == 1);
  CHECK(any_contains(errors_of(slurp(blocked)), "output: directory is not writable"));
  CHECK(cli("run " + broken.string()) == 2);
  CHECK(cli("frobnicate") == 1);
  fs::remove_all(dir);
}
