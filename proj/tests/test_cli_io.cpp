#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "loclab/csv.hpp"
#include "loclab/experiment.hpp"
#include "loclab/hamiltonian.hpp"
#include "loclab/spectral.hpp"

using namespace loclab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("loclab_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#ifdef LOCLAB_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(LOCLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}
#endif

}  // namespace

TEST_CASE("key=value parsing and rejection") {
  RunConfig cfg;
  apply_key_value(cfg, "dim", "2");
  apply_key_value(cfg, "lambda", "5.5");
  apply_key_value(cfg, "seed", "42");
  apply_key_value(cfg, "times", "1,2.5,10");
  CHECK(cfg.dim == 2);
  CHECK(cfg.lambda == 5.5);
  CHECK(cfg.seed == 42);
  REQUIRE(cfg.times.size() == 3);
  CHECK(cfg.times[1] == 2.5);

  CHECK_THROWS_AS(apply_key_value(cfg, "no_such_key", "1"), InvalidParameter);
  CHECK_THROWS_WITH_AS(apply_key_value(cfg, "lambda", "abc"),
                       doctest::Contains("lambda"), InvalidParameter);
}

TEST_CASE("validation catches range violations") {
  RunConfig cfg;
  cfg.experiment = "spectrum";
  CHECK_NOTHROW(validate(cfg));

  RunConfig bad = cfg;
  bad.interval_lo = 0.5;
  bad.interval_hi = -0.5;
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("interval"), InvalidParameter);

  bad = cfg;
  bad.experiment = "quench";
  CHECK_THROWS_AS(validate(bad), InvalidParameter);

  bad = cfg;
  bad.side = 7;
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("side"), InvalidParameter);

  bad = cfg;
  bad.distribution = "poisson";
  CHECK_THROWS_AS(validate(bad), InvalidParameter);
}

TEST_CASE("config file load and lossless round trip") {
  const fs::path dir = temp_dir("config");
  const fs::path file = dir / "run.cfg";
  {
    std::ofstream out(file);
    out << "# comment line\n";
    out << "experiment = fermi\n";
    out << "dim=1\n";
    out << "lambda = 5  # strong disorder\n";
    out << "interval_lo=-0.5\n";
    out << "interval_hi=0.5\n";
    out << "realizations = 7\n";
  }
  RunConfig cfg;
  load_config_file(cfg, file);
  CHECK(cfg.experiment == "fermi");
  CHECK(cfg.lambda == 5.0);
  CHECK(cfg.realizations == 7);

  // round trip through the serialized key=value map
  const auto kv = to_key_values(cfg);
  RunConfig copy;
  for (const auto& [key, value] : kv) apply_key_value(copy, key, value);
  CHECK(to_key_values(copy) == kv);

  {
    std::ofstream out(file, std::ios::app);
    out << "mystery_knob = 3\n";
  }
  RunConfig cfg2;
  CHECK_THROWS_WITH_AS(load_config_file(cfg2, file), doctest::Contains("mystery_knob"),
                       InvalidParameter);
}

TEST_CASE("spectrum experiment output matches an in-process oracle") {
  const fs::path dir = temp_dir("spectrum");
  RunConfig cfg;
  cfg.experiment = "spectrum";
  cfg.dim = 1;
  cfg.side = 6;
  cfg.lambda = 2.0;
  cfg.seed = 9;
  cfg.realizations = 2;
  cfg.outdir = (dir / "out").string();
  const auto result = run_experiment(cfg);
  CHECK(result.exit_code == 0);

  // oracle: rebuild the same realization and compare the CSV numbers
  const Box box(1, {0, 0}, 6);
  DisorderSpec spec = disorder_of(cfg);
  const auto sol0 = eigendecompose(build_hamiltonian(box, at_realization(spec, 0)).matrix);

  std::ifstream in(result.run_dir / "eigenvalues.csv");
  REQUIRE(in);
  std::string line;
  std::getline(in, line);
  CHECK(line == "realization,index,eigenvalue");
  for (Index i = 0; i < 6; ++i) {
    REQUIRE(std::getline(in, line));
    const auto last_comma = line.rfind(',');
    CHECK(std::stod(line.substr(last_comma + 1)) ==
          doctest::Approx(sol0.eigenvalues[i]).epsilon(1e-15));
  }
}

TEST_CASE("rerun with the same config is byte-identical") {
  const fs::path dir = temp_dir("determinism");
  RunConfig cfg;
  cfg.experiment = "fermi";
  cfg.dim = 1;
  cfg.side = 20;
  cfg.lambda = 3.0;
  cfg.seed = 5;
  cfg.realizations = 6;
  cfg.sep_min = 1;
  cfg.sep_max = 8;
  cfg.outdir = (dir / "a").string();
  const auto first = run_experiment(cfg);
  cfg.outdir = (dir / "b").string();
  const auto second = run_experiment(cfg);
  CHECK(first.exit_code == 0);
  for (const std::string name : {"samples.csv", "ensemble.csv", "summary.json"})
    CHECK(slurp(first.run_dir / name) == slurp(second.run_dir / name));
}

TEST_CASE("manifest checksums validate and reproduce the run") {
  const fs::path dir = temp_dir("manifest");
  RunConfig cfg;
  cfg.experiment = "sudec";
  cfg.dim = 1;
  cfg.side = 18;
  cfg.lambda = 4.0;
  cfg.seed = 31;
  cfg.realizations = 4;
  cfg.sep_max = 7;
  cfg.outdir = (dir / "a").string();
  const auto result = run_experiment(cfg);
  CHECK(result.exit_code == 0);

  const auto manifest = nlohmann::json::parse(slurp(result.manifest_path));
  CHECK(manifest["status"] == "ok");
  for (const auto& [name, checksum] : manifest["outputs"].items())
    CHECK(file_checksum(result.run_dir / name) == checksum.get<std::string>());

  // reproducibility from the manifest's config snapshot
  RunConfig replay;
  for (const auto& [key, value] : manifest["config"].items())
    apply_key_value(replay, key, value.get<std::string>());
  replay.outdir = (dir / "b").string();
  const auto second = run_experiment(replay);
  for (const auto& [name, checksum] : manifest["outputs"].items())
    CHECK(file_checksum(second.run_dir / name) == checksum.get<std::string>());
}

TEST_CASE("fermi below the spectrum yields all-zero kernels and a recorded fit failure") {
  const fs::path dir = temp_dir("fermi_zero");
  RunConfig cfg;
  cfg.experiment = "fermi";
  cfg.dim = 1;
  cfg.side = 12;
  cfg.lambda = 1.0;
  cfg.interval_lo = -30.0;
  cfg.interval_hi = -20.0;  // below sigma(H) in [-1, 5]
  cfg.realizations = 3;
  cfg.sep_max = 5;
  cfg.outdir = (dir / "out").string();
  const auto result = run_experiment(cfg);
  CHECK(result.exit_code == 1);  // decay fit infeasible on all-zero data

  std::ifstream in(result.run_dir / "samples.csv");
  REQUIRE(in);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto last_comma = line.rfind(',');
    CHECK(std::stod(line.substr(last_comma + 1)) == 0.0);
  }
  const auto manifest = nlohmann::json::parse(slurp(result.manifest_path));
  CHECK(manifest["status"] == "error");
  CHECK(manifest["error"].get<std::string>().find("fit infeasible") != std::string::npos);
}

#ifdef LOCLAB_CLI_PATH
TEST_CASE("cli golden run: flags override the config file") {
  const fs::path dir = temp_dir("cli");
  const fs::path file = dir / "run.cfg";
  {
    std::ofstream out(file);
    out << "dim = 1\nside = 6\nlambda = 2\nseed = 9\nrealizations = 2\n";
    out << "outdir = " << (dir / "from_file").string() << "\n";
  }

  // file as-is
  REQUIRE(run_cli("spectrum --config " + file.string()) == 0);
  // same run with a flag override of the seed
  REQUIRE(run_cli("spectrum --config " + file.string() + " --seed 10 --outdir " +
                  (dir / "overridden").string()) == 0);

  const auto base = nlohmann::json::parse(slurp(dir / "from_file/spectrum/manifest.json"));
  const auto over = nlohmann::json::parse(slurp(dir / "overridden/spectrum/manifest.json"));
  CHECK(base["config"]["seed"] == "9");
  CHECK(over["config"]["seed"] == "10");   // flag wins
  CHECK(over["config"]["lambda"] == "2");  // file value kept
  CHECK(base["outputs"]["eigenvalues.csv"] != over["outputs"]["eigenvalues.csv"]);
}

TEST_CASE("cli rejects a bad interval") {
  CHECK(run_cli("fermi --interval 0.5,-0.5") != 0);
}
#endif
