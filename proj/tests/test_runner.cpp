#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgeom/runner.hpp"

using namespace qgeom;
using namespace qgeom::runner;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("qgeom_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_scenario(const fs::path& dir, const std::string& name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream f(p);
    f << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kSmokeScenario = R"({
  "schema_version": 1,
  "seed": 42,
  "model": {"name": "two_level", "delta": 1.0},
  "tasks": [
    {"task": "berry_phase_loop", "output": "berry.json",
     "sweep_param": "phi", "from": 0.0, "to": 6.283185307179586, "segments": 128,
     "params": {"theta": 1.0471975511965976}},
    {"task": "curvature", "kappa": "theta", "lambda": "phi",
     "params": {"theta": 0.9, "phi": 0.4}},
    {"task": "curvature_random_points", "kappa": "theta", "lambda": "phi",
     "n_points": 5, "kappa_min": 0.4, "kappa_max": 2.6,
     "lambda_min": 0.0, "lambda_max": 6.28}
  ]
})";

int run_cli(const std::string& args, std::string* output = nullptr) {
    const char* cli = std::getenv("QGEOM_CLI");
    REQUIRE(cli != nullptr);
    std::string cmd = std::string(cli) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) text += buf;
    int rc = pclose(pipe);
    if (output) *output = text;
    return WEXITSTATUS(rc);
}

} // namespace

TEST_CASE("runner: smoke scenario completes with artifacts") {
    fs::path dir = fresh_dir("smoke");
    fs::path scenario = write_scenario(dir, "scenario.json", kSmokeScenario);
    RunOptions opts;
    opts.out_dir = (dir / "out").string();
    RunManifest manifest = run(scenario.string(), opts);
    CHECK(manifest.all_ok());
    CHECK(manifest.tasks.size() == 3);
    CHECK(fs::exists(dir / "out" / "berry.json"));
    CHECK(fs::exists(dir / "out" / "aggregate.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    CHECK(fs::exists(dir / "out" / "task2_curvature_points.csv"));
    // report content is numerically sane
    std::string berry = slurp(dir / "out" / "berry.json");
    CHECK(berry.find("principal") != std::string::npos);
}

TEST_CASE("runner: task failures are isolated and recorded") {
    fs::path dir = fresh_dir("degenerate");
    // open-shell ring at zero twist: exactly degenerate ground state
    fs::path scenario = write_scenario(dir, "scenario.json", R"({
      "schema_version": 1,
      "model": {"name": "interacting_ring", "n_sites": 8, "n_fermions": 4,
                "t_hop": 1.0, "v_int": 0.0},
      "tasks": [
        {"task": "curvature", "kappa": "twist", "lambda": "twist"},
        {"task": "model_info", "output": "info.json"}
      ]
    })");
    RunOptions opts;
    opts.out_dir = (dir / "out").string();
    RunManifest manifest = run(scenario.string(), opts);
    CHECK_FALSE(manifest.all_ok());
    CHECK(manifest.tasks[0].status == "error");
    CHECK(manifest.tasks[0].error_code == "DegenerateGroundState");
    CHECK(manifest.tasks[1].status == "ok"); // later task still ran
    CHECK(fs::exists(dir / "out" / "info.json"));
}

TEST_CASE("runner: reruns with the same seed are byte-identical") {
    fs::path dir = fresh_dir("determinism");
    fs::path scenario = write_scenario(dir, "scenario.json", kSmokeScenario);
    for (const char* sub : {"a", "b"}) {
        RunOptions opts;
        opts.out_dir = (dir / sub).string();
        CHECK(run(scenario.string(), opts).all_ok());
    }
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue; // wall times necessarily differ
        INFO("file ", name);
        CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
    }
}

TEST_CASE("runner: strict validation of every key") {
    fs::path dir = fresh_dir("validation");
    RunOptions opts;
    opts.out_dir = (dir / "out").string();

    fs::path bad_task = write_scenario(dir, "bad_task.json", R"({
      "schema_version": 1,
      "model": {"name": "two_level", "delta": 1.0},
      "tasks": [{"task": "no_such_task"}]
    })");
    CHECK_THROWS_AS(run(bad_task.string(), opts), UnknownTask);

    fs::path bad_key = write_scenario(dir, "bad_key.json", R"({
      "schema_version": 1,
      "model": {"name": "two_level", "delta": 1.0},
      "tasks": [{"task": "model_info", "tolerrance": 1e-9}]
    })");
    CHECK_THROWS_AS(run(bad_key.string(), opts), ConfigParseError);

    fs::path bad_model = write_scenario(dir, "bad_model.json", R"({
      "schema_version": 1,
      "model": {"name": "two_level", "delta": 1.0, "n_sites": 4},
      "tasks": [{"task": "model_info"}]
    })");
    CHECK_THROWS_AS(run(bad_model.string(), opts), ConfigParseError);

    fs::path bad_json = write_scenario(dir, "bad_json.json", "{ not json");
    CHECK_THROWS_AS(run(bad_json.string(), opts), ConfigParseError);
}

TEST_CASE("runner: parallel jobs produce the same reports") {
    fs::path dir = fresh_dir("jobs");
    fs::path scenario = write_scenario(dir, "scenario.json", kSmokeScenario);
    RunOptions serial;
    serial.out_dir = (dir / "serial").string();
    RunOptions parallel;
    parallel.out_dir = (dir / "parallel").string();
    parallel.jobs = 3;
    CHECK(run(scenario.string(), serial).all_ok());
    CHECK(run(scenario.string(), parallel).all_ok());
    for (const auto& entry : fs::directory_iterator(dir / "serial")) {
        std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue;
        INFO("file ", name);
        CHECK(slurp(entry.path()) == slurp(dir / "parallel" / name));
    }
}

TEST_CASE("task catalog: sorted and complete") {
    auto docs = list_tasks();
    REQUIRE(docs.size() > 10);
    bool has_berry = false, has_dcs = false;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (docs[i].name == "berry_phase_loop") has_berry = true;
        if (docs[i].name == "dcs_sum_rule") has_dcs = true;
        if (i > 0) CHECK(docs[i - 1].name < docs[i].name);
        CHECK_FALSE(docs[i].description.empty());
    }
    CHECK(has_berry);
    CHECK(has_dcs);
}

TEST_CASE("model documents: units block and boundary parsing") {
    Model m = model_from_document(R"({"name": "rice_mele", "n_sites": 6, "t_hop": 1.0,
        "delta_dim": 0.1, "onsite_delta": 0.4, "boundary": "pbc",
        "units": {"hbar": 2.0, "e_charge": 0.5}})");
    CHECK(m.boundary == Boundary::PBC);
    CHECK(m.units.hbar == 2.0);
    CHECK(m.units.e == 0.5);
    CHECK_THROWS_AS(model_from_document(R"({"name": "unknown_model"})"), ConfigParseError);
    CHECK_THROWS_AS(model_from_document(
                        R"({"name": "rice_mele", "n_sites": 6, "t_hop": 1.0,
                            "delta_dim": 0.1, "onsite_delta": 0.4, "boundary": "weird"})"),
                    ConfigParseError);
}

TEST_CASE("runner: trajectory dump with optional amplitude columns") {
    fs::path dir = fresh_dir("trajectory");
    fs::path scenario = write_scenario(dir, "scenario.json", R"({
      "schema_version": 1,
      "model": {"name": "two_level", "delta": 1.0},
      "tasks": [{"task": "propagate", "output": "run.json",
                 "drive_param": "theta", "from": 0.3, "to": 1.0, "duration": 5.0,
                 "dt": 0.01, "observables": ["sigma_z", "energy"],
                 "stride": 50, "amplitudes": 1}]
    })");
    RunOptions opts;
    opts.out_dir = (dir / "out").string();
    CHECK(run(scenario.string(), opts).all_ok());
    std::string csv = slurp(dir / "out" / "task0_trajectory.csv");
    CHECK(csv.find("time,sigma_z,energy,re_0,im_0,re_1,im_1") == 0);
}

TEST_CASE("runner: default output directory honors the environment") {
    fs::path dir = fresh_dir("envout");
    fs::path scenario = write_scenario(dir, "scenario.json", R"({
      "schema_version": 1,
      "model": {"name": "two_level", "delta": 1.0},
      "tasks": [{"task": "model_info", "output": "info.json"}]
    })");
    fs::path envdir = dir / "from_env";
    setenv("QGEOM_OUT", envdir.string().c_str(), 1);
    RunOptions opts; // no out_dir
    CHECK(run(scenario.string(), opts).all_ok());
    unsetenv("QGEOM_OUT");
    CHECK(fs::exists(envdir / "info.json"));
}

TEST_CASE("cli: exit codes distinguish success, task failure and config error") {
    fs::path dir = fresh_dir("cli");
    fs::path ok = write_scenario(dir, "ok.json", R"({
      "schema_version": 1,
      "model": {"name": "two_level", "delta": 1.0},
      "tasks": [{"task": "model_info"}]
    })");
    fs::path failing = write_scenario(dir, "failing.json", R"({
      "schema_version": 1,
      "model": {"name": "interacting_ring", "n_sites": 8, "n_fermions": 4,
                "t_hop": 1.0, "v_int": 0.0},
      "tasks": [{"task": "curvature", "kappa": "twist", "lambda": "twist"}]
    })");
    fs::path broken = write_scenario(dir, "broken.json", R"({"schema_version": 1})");

    CHECK(run_cli("run " + ok.string() + " --out " + (dir / "o1").string()) == 0);
    CHECK(run_cli("run " + failing.string() + " --out " + (dir / "o2").string()) == 1);
    CHECK(run_cli("run " + broken.string() + " --out " + (dir / "o3").string()) == 2);

    std::string listing;
    CHECK(run_cli("list-tasks", &listing) == 0);
    CHECK(listing.find("berry_phase_loop") != std::string::npos);
    CHECK(listing.find("dcs_sum_rule") != std::string::npos);
}
