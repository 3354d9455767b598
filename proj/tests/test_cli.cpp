// test_cli.cpp — Drive the command-line front end through its library entry
// point: artifacts, manifests, exit codes, determinism, and an end-to-end
// simulate → reconstruct loop.

#include <doctest.h>

#include <focklab/fock.hpp>
#include <focklab/states.hpp>

#include <cli.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace focklab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("focklab_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

// Parse a numeric CSV with a header row into rows of doubles.
std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::string line;
  REQUIRE(static_cast<bool>(std::getline(f, line)));  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("state coherent emits amplitudes, statistics and a manifest") {
    const fs::path dir = fresh_dir("state_coherent");
    const int code = cli::run({"state", "coherent", "--alpha", "0.5", "--nmax", "12",
                               "--out", dir.string()});
    REQUIRE(code == 0);
    for (const char* name :
         {"amplitudes.csv", "probabilities.csv", "summary.json", "run_manifest.json"})
      CHECK(fs::exists(dir / name));
    CHECK(!fs::exists(dir / "rho.json"));  // lossless run keeps the pure record

    const json summary = slurp_json(dir / "summary.json");
    CHECK(summary["kind"] == "coherent");
    CHECK(std::abs(summary["moments"]["mean_x"].get<double>() -
                   std::sqrt(2.0) * 0.5) < 1e-6);
    CHECK(std::abs(summary["trace"].get<double>() - 1.0) < 1e-10);

    const json manifest = slurp_json(dir / "run_manifest.json");
    CHECK(manifest["command"] == "state");
    CHECK(manifest["parameters"]["alpha"].get<double>() == 0.5);
    CHECK(manifest["wall_clock_seconds"].get<double>() >= 0.0);
    bool lists_summary = false;
    for (const auto& o : manifest["outputs"])
      if (o.get<std::string>() == "summary.json") lists_summary = true;
    CHECK(lists_summary);
  }

  TEST_CASE("state cubic writes the closed-form amplitudes") {
    const fs::path dir = fresh_dir("state_cubic");
    REQUIRE(cli::run({"state", "cubic", "--chi", "0.090", "--nmax", "8", "--out",
                      dir.string()}) == 0);
    const auto rows = read_csv(dir / "amplitudes.csv");
    REQUIRE(rows.size() == 9);
    const double chi = 0.090;
    const double norm = std::sqrt(1.0 + 15.0 * chi * chi / 8.0);
    CHECK(std::abs(rows[0][1] - 1.0 / norm) < 1e-12);               // re a0
    CHECK(std::abs(rows[0][2]) < 1e-12);                            // im a0
    CHECK(std::abs(rows[1][2] - 3.0 * chi / (2.0 * std::sqrt(2.0) * norm)) < 1e-12);
    CHECK(std::abs(rows[2][1]) + std::abs(rows[2][2]) < 1e-15);     // a2 = 0
    CHECK(std::abs(rows[3][2] - std::sqrt(6.0) * chi / (2.0 * std::sqrt(2.0) * norm)) <
          1e-12);
  }

  TEST_CASE("state with loss writes the mixed density matrix") {
    const fs::path dir = fresh_dir("state_lossy");
    REQUIRE(cli::run({"state", "cubic", "--eta", "0.8", "--out", dir.string()}) == 0);
    CHECK(fs::exists(dir / "rho.json"));
    const json summary = slurp_json(dir / "summary.json");
    CHECK(summary["amplitudes_are_pre_loss"] == true);
  }

  TEST_CASE("exit codes distinguish argument, numeric and io failures") {
    const fs::path dir = fresh_dir("exit_codes");
    CHECK(cli::run({"state", "bogus", "--out", dir.string()}) == 2);
    CHECK(cli::run({"figure", "fig9", "--out", dir.string()}) == 2);
    CHECK(cli::run({"state", "cubic", "--nmax", "2", "--out", dir.string()}) == 2);
    CHECK(cli::run({"herald", "--lambda", "0", "--out", dir.string()}) == 3);
    CHECK(cli::run({"tomo", "reconstruct", "--in",
                    (dir / "missing.csv").string(), "--out", dir.string()}) == 4);

    std::ofstream bad(dir / "bad.csv");
    bad << "theta,x\n0.1,oops\n";
    bad.close();
    CHECK(cli::run({"tomo", "reconstruct", "--in", (dir / "bad.csv").string(),
                    "--out", dir.string()}) == 4);
    CHECK(cli::run({"--version"}) == 0);
  }

  TEST_CASE("figure fig2b exposes the negative Wigner dip") {
    const fs::path dir = fresh_dir("fig2b");
    REQUIRE(cli::run({"figure", "fig2b", "--out", dir.string()}) == 0);
    const json summary = slurp_json(dir / "summary.json");
    CHECK(summary["subtracted"] == true);
    CHECK(summary["min_w"].get<double>() < -0.01);
    CHECK(summary["subtraction_weight"].get<double>() > 0.0);
    CHECK(fs::exists(dir / "wigner.csv"));
    CHECK(fs::exists(dir / "rho.json"));
  }

  TEST_CASE("figure fig3 with chi zero is flat") {
    const fs::path dir = fresh_dir("fig3_flat");
    REQUIRE(cli::run({"figure", "fig3", "--chi", "0", "--out", dir.string()}) == 0);
    for (const auto& row : read_csv(dir / "curve.csv"))
      CHECK(std::abs(row[2]) <= 1e-9);  // mean_p column
    const json fit = slurp_json(dir / "fit.json");
    CHECK(std::abs(fit["raw"]["c2"].get<double>()) <= 1e-9);
    CHECK(std::abs(fit["rescaled"]["c2"].get<double>()) <= 1e-9);
  }

  TEST_CASE("figure fig4 tracks the small-chi antidiagonal law") {
    const fs::path dir = fresh_dir("fig4");
    const double chi = 0.01;
    REQUIRE(cli::run({"figure", "fig4", "--chi", "0.01", "--out", dir.string()}) == 0);
    const auto rows = read_csv(dir / "antidiag.csv");
    REQUIRE(rows.size() == 301);
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, std::abs(row[1] - row[2]));
    CHECK(worst <= 5.0 * chi * chi);
    const json fit = slurp_json(dir / "fit.json");
    CHECK(std::abs(fit["delta_p"].get<double>()) < 0.05);
  }

  TEST_CASE("herald command reports probabilities and success rate") {
    const fs::path dir = fresh_dir("herald_run");
    REQUIRE(cli::run({"herald", "--lambda", "0.05", "--out", dir.string()}) == 0);
    const json result = slurp_json(dir / "result.json");
    CHECK(result["p_success"].get<double>() > 0.0);
    CHECK(result["photon_probs"][3].get<double>() > 0.9);
    CHECK(fs::exists(dir / "signal_rho.json"));
    CHECK(cli::run({"herald", "--optimize", "fock9", "--out", dir.string()}) == 2);
  }

  TEST_CASE("identical seeds give identical samples and manifests") {
    const fs::path d1 = fresh_dir("tomo_rep1");
    const fs::path d2 = fresh_dir("tomo_rep2");
    const std::vector<std::string> base = {"tomo",      "simulate", "--seed", "7",
                                           "--samples", "200",      "--phases", "6"};
    auto with_out = [&](const fs::path& d) {
      std::vector<std::string> args = base;
      args.push_back("--out");
      args.push_back(d.string());
      return args;
    };
    REQUIRE(cli::run(with_out(d1)) == 0);
    REQUIRE(cli::run(with_out(d2)) == 0);
    CHECK(slurp(d1 / "samples.csv") == slurp(d2 / "samples.csv"));

    json m1 = slurp_json(d1 / "run_manifest.json");
    json m2 = slurp_json(d2 / "run_manifest.json");
    m1.erase("wall_clock_seconds");
    m2.erase("wall_clock_seconds");
    CHECK(m1 == m2);
  }

  TEST_CASE("FOCKLAB_OUT supplies the default output directory") {
    const fs::path dir = fresh_dir("env_out");
    ::setenv("FOCKLAB_OUT", dir.string().c_str(), 1);
    const int code = cli::run({"state", "fock", "--n", "1"});
    ::unsetenv("FOCKLAB_OUT");
    REQUIRE(code == 0);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "run_manifest.json"));
  }

  TEST_CASE("simulate then reconstruct closes the loop against the truth") {
    const fs::path truth_dir = fresh_dir("loop_truth");
    const fs::path sim_dir = fresh_dir("loop_sim");
    const fs::path rec_dir = fresh_dir("loop_rec");
    REQUIRE(cli::run({"figure", "fig2a", "--chi", "0.090", "--nmax", "10", "--out",
                      truth_dir.string()}) == 0);
    REQUIRE(cli::run({"tomo", "simulate", "--chi", "0.090", "--nmax", "10",
                      "--samples", "2000", "--seed", "5", "--out",
                      sim_dir.string()}) == 0);
    REQUIRE(cli::run({"tomo", "reconstruct", "--in", (sim_dir / "samples.csv").string(),
                      "--truth", (truth_dir / "rho.json").string(), "--out",
                      rec_dir.string()}) == 0);
    const json report = slurp_json(rec_dir / "report.json");
    CHECK(report["n_samples"].get<int>() == 24000);
    CHECK(report["fidelity_to_truth"].get<double>() >= 0.9);
    CHECK(fs::exists(rec_dir / "rho.json"));

    // Mismatched truth dimensions are a caller error.
    const fs::path small_dir = fresh_dir("loop_truth_small");
    REQUIRE(cli::run({"figure", "fig2a", "--nmax", "8", "--out",
                      small_dir.string()}) == 0);
    CHECK(cli::run({"tomo", "reconstruct", "--in", (sim_dir / "samples.csv").string(),
                    "--truth", (small_dir / "rho.json").string(), "--out",
                    rec_dir.string()}) == 2);
  }
}
