// cli.cpp — Subcommand pipelines. Each command computes with the core library,
// writes its artifacts into the output directory, and finishes by writing
// run_manifest.json; the manifest is always the last file written, so its
// presence certifies a completed run.

#include "cli.hpp"

#include "focklab/channels.hpp"
#include "focklab/characterize.hpp"
#include "focklab/fock.hpp"
#include "focklab/herald.hpp"
#include "focklab/imprint.hpp"
#include "focklab/io.hpp"
#include "focklab/states.hpp"
#include "focklab/tomo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace focklab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";
constexpr double kDefaultChi = 0.090;

// Bookkeeping for one invocation: output directory, parameter echo, the list
// of files written so far, and the manifest writer.
struct Run {
  std::string command;
  json parameters = json::object();
  std::uint64_t seed = 0;
  fs::path out_dir;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit Run(std::string cmd, const std::string& out_flag) : command(std::move(cmd)) {
    if (!out_flag.empty()) {
      out_dir = out_flag;
    } else if (const char* env = std::getenv("FOCKLAB_OUT"); env && *env) {
      out_dir = env;
    } else {
      out_dir = ".";
    }
    fs::create_directories(out_dir);
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream f(out_dir / name);
    if (!f) throw io_error("cannot open " + (out_dir / name).string() + " for writing");
    return f;
  }

  void wrote(const std::string& name, std::ofstream& f) {
    f.flush();
    if (!f) throw io_error("failed while writing " + (out_dir / name).string());
    outputs.push_back(name);
  }

  void write_json(const std::string& name, const json& j) {
    std::ofstream f = open(name);
    f << j.dump(2) << "\n";
    wrote(name, f);
  }

  // The terminal act of every successful run.
  void write_manifest() {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["tool_version"] = kToolVersion;
    j["outputs"] = outputs;
    j["wall_clock_seconds"] = dt.count();
    std::ofstream f = open("run_manifest.json");
    f << j.dump(2) << "\n";
    f.flush();
    if (!f) throw io_error("failed while writing run manifest");
  }
};

json moments_json(const Moments& m) {
  return {{"mean_x", m.mean_x}, {"mean_p", m.mean_p},
          {"var_x", m.var_x},   {"var_p", m.var_p}};
}

void write_probabilities(Run& run, const DensityMatrix& rho) {
  const std::vector<double> probs = photon_probs(rho);
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 0; n < probs.size(); ++n)
    rows.push_back({static_cast<double>(n), probs[n]});
  std::ofstream f = run.open("probabilities.csv");
  write_table_csv(f, {"n", "probability"}, rows);
  run.wrote("probabilities.csv", f);
}

void write_density(Run& run, const std::string& name, const DensityMatrix& rho) {
  std::ofstream f = run.open(name);
  write_density_json(f, rho);
  run.wrote(name, f);
}

void write_wigner_csv(Run& run, const WignerGrid& grid) {
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.xs.size() * grid.ps.size());
  for (std::size_t i = 0; i < grid.xs.size(); ++i)
    for (std::size_t j = 0; j < grid.ps.size(); ++j)
      rows.push_back({grid.xs[i], grid.ps[j], grid.w(i, j)});
  std::ofstream f = run.open("wigner.csv");
  write_table_csv(f, {"x", "p", "w"}, rows);
  run.wrote("wigner.csv", f);
}

// ------------------------------ state ---------------------------------------

struct StateArgs {
  std::string kind;
  double chi = kDefaultChi;
  int n = 0;
  double alpha = 0.5;
  bool perp = false;
  int nmax = 10;
  double eta = 1.0;
  std::string out;
};

void run_state(const StateArgs& a) {
  Run run("state", a.out);
  run.parameters = {{"kind", a.kind}, {"nmax", a.nmax}, {"eta", a.eta}};

  const Truncation t(a.nmax);
  StateVector psi = fock(0, t);
  if (a.kind == "cubic") {
    psi = cubic_state(a.chi, t);
    run.parameters["chi"] = a.chi;
  } else if (a.kind == "fock") {
    psi = fock(a.n, t);
    run.parameters["n"] = a.n;
  } else if (a.kind == "coherent") {
    psi = coherent(Complex(a.alpha, 0.0), t);
    run.parameters["alpha"] = a.alpha;
  } else if (a.kind == "one-and-three") {
    psi = one_and_three(t, a.perp);
    run.parameters["perp"] = a.perp;
  } else {
    throw std::invalid_argument("state: unknown kind '" + a.kind + "'");
  }

  DensityMatrix rho = to_density(psi);
  if (a.eta < 1.0) rho = loss(rho, LossParam(a.eta));

  {
    std::vector<std::vector<double>> rows;
    for (int n = 0; n < psi.total_dim(); ++n)
      rows.push_back({static_cast<double>(n), psi.amps(n).real(), psi.amps(n).imag()});
    std::ofstream f = run.open("amplitudes.csv");
    write_table_csv(f, {"n", "re", "im"}, rows);
    run.wrote("amplitudes.csv", f);
  }
  write_probabilities(run, rho);
  if (a.eta < 1.0) write_density(run, "rho.json", rho);

  json summary;
  summary["kind"] = a.kind;
  summary["nmax"] = a.nmax;
  summary["eta"] = a.eta;
  summary["trace"] = rho.trace().real();
  summary["moments"] = moments_json(moments(rho));
  summary["amplitudes_are_pre_loss"] = (a.eta < 1.0);
  run.write_json("summary.json", summary);

  run.write_manifest();
}

// ------------------------------ figure --------------------------------------

struct FigureArgs {
  std::string which;
  double chi = kDefaultChi;
  double eta = 1.0;
  int nmax = 10;
  std::string out;
};

DensityMatrix figure_source_state(const FigureArgs& a) {
  DensityMatrix rho = to_density(cubic_state(a.chi, Truncation(a.nmax)));
  if (a.eta < 1.0) rho = loss(rho, LossParam(a.eta));
  return rho;
}

void run_figure_wigner(const FigureArgs& a, Run& run, bool subtract_one) {
  DensityMatrix rho = figure_source_state(a);
  double weight = 1.0;
  if (subtract_one) {
    Subtracted sub = subtract(rho, 1);
    rho = std::move(sub.rho);
    weight = sub.weight;
  }

  const std::vector<double> grid = default_grid();
  const WignerGrid w = wigner(rho, grid, grid);
  write_wigner_csv(run, w);
  write_density(run, "rho.json", rho);

  json summary;
  summary["which"] = a.which;
  summary["chi"] = a.chi;
  summary["eta"] = a.eta;
  summary["nmax"] = a.nmax;
  summary["subtracted"] = subtract_one;
  if (subtract_one) summary["subtraction_weight"] = weight;
  summary["min_w"] = w.w.minCoeff();
  summary["max_w"] = w.w.maxCoeff();
  summary["moments"] = moments_json(moments(rho));
  run.write_json("summary.json", summary);
}

void run_figure_moment_curve(const FigureArgs& a, Run& run) {
  const DensityMatrix ancilla = figure_source_state(a);
  std::vector<double> alphas;
  for (int i = 0; i <= 10; ++i) alphas.push_back(0.1 * i);
  const MomentCurve curve = sweep(alphas, ancilla);

  std::vector<std::vector<double>> rows;
  for (const MomentPoint& p : curve.points)
    rows.push_back({p.alpha, p.mean_x, p.mean_p, p.weight});
  std::ofstream f = run.open("curve.csv");
  write_table_csv(f, {"alpha", "mean_x", "mean_p", "weight"}, rows);
  run.wrote("curve.csv", f);

  // Raw fit in the stretched output coordinate, plus the fit after undoing
  // the √2 stretch (x/√2, p·√2), where the quadratic coefficient reads as
  // the bare nonlinearity strength.
  const QuadFit raw = quad_fit(curve);
  MomentCurve rescaled = curve;
  for (MomentPoint& p : rescaled.points) {
    p.mean_x /= std::sqrt(2.0);
    p.mean_p *= std::sqrt(2.0);
  }
  const QuadFit unstretched = quad_fit(rescaled);

  json fit;
  fit["raw"] = {{"c0", raw.c0}, {"c1", raw.c1}, {"c2", raw.c2}, {"rms", raw.rms}};
  fit["rescaled"] = {{"c0", unstretched.c0},
                     {"c1", unstretched.c1},
                     {"c2", unstretched.c2},
                     {"rms", unstretched.rms}};
  run.write_json("fit.json", fit);
}

void run_figure_antidiag(const FigureArgs& a, Run& run) {
  const DensityMatrix rho = figure_source_state(a);

  std::vector<double> xs;
  for (int i = -150; i <= 150; ++i) xs.push_back(0.02 * i);
  const std::vector<double> values = antidiag_im(rho, xs);

  // Reference curve: the small-χ law for the ideal state in the same
  // (unit-trace kernel) normalization.
  const double norm2 = 1.0 + 15.0 * a.chi * a.chi / 8.0;
  const double scale = 2.0 * a.chi / (std::sqrt(M_PI) * norm2);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    rows.push_back({x, values[i], scale * x * x * x * std::exp(-x * x)});
  }
  std::ofstream f = run.open("antidiag.csv");
  write_table_csv(f, {"x", "value", "model"}, rows);
  run.wrote("antidiag.csv", f);

  const DisplacementFit dfit = fit_displacement(rho);
  json fit;
  fit["delta_p"] = dfit.delta_p;
  fit["beta"] = dfit.beta;
  fit["residual"] = dfit.residual;
  run.write_json("fit.json", fit);
}

void run_figure(const FigureArgs& a) {
  Run run("figure", a.out);
  run.parameters = {{"which", a.which}, {"chi", a.chi}, {"eta", a.eta}, {"nmax", a.nmax}};

  if (a.which == "fig2a") run_figure_wigner(a, run, false);
  else if (a.which == "fig2b") run_figure_wigner(a, run, true);
  else if (a.which == "fig3") run_figure_moment_curve(a, run);
  else if (a.which == "fig4") run_figure_antidiag(a, run);
  else throw std::invalid_argument("figure: unknown id '" + a.which + "'");

  run.write_manifest();
}

// ------------------------------ tomo ----------------------------------------

struct TomoSimulateArgs {
  double chi = kDefaultChi;
  int nmax = 10;
  int phases = 12;
  int samples = 5000;  // per phase
  std::uint64_t seed = 1;
  std::string out;
};

void run_tomo_simulate(const TomoSimulateArgs& a) {
  Run run("tomo simulate", a.out);
  run.parameters = {{"chi", a.chi},
                    {"nmax", a.nmax},
                    {"phases", a.phases},
                    {"samples_per_phase", a.samples}};
  run.seed = a.seed;

  if (a.phases < 1) throw std::invalid_argument("tomo simulate: phases must be >= 1");
  const DensityMatrix rho = to_density(cubic_state(a.chi, Truncation(a.nmax)));
  std::vector<double> thetas;
  for (int k = 0; k < a.phases; ++k) thetas.push_back(M_PI * k / a.phases);

  const QuadratureRecord rec = sample(rho, thetas, a.samples, a.seed);
  std::ofstream f = run.open("samples.csv");
  save_record_csv(rec, f);
  run.wrote("samples.csv", f);

  run.write_manifest();
}

struct TomoReconstructArgs {
  std::string in;
  std::string truth;
  int nmax = 10;
  std::string out;
};

void run_tomo_reconstruct(const TomoReconstructArgs& a) {
  Run run("tomo reconstruct", a.out);
  run.parameters = {{"in", a.in}, {"nmax", a.nmax}};
  if (!a.truth.empty()) run.parameters["truth"] = a.truth;

  std::ifstream in(a.in);
  if (!in) throw io_error("cannot open " + a.in + " for reading");
  const QuadratureRecord rec = load_record_csv(in);

  TomoConfig cfg;
  cfg.nmax = a.nmax;
  const TomoResult res = reconstruct_full(rec, cfg);

  write_density(run, "rho.json", res.rho);

  json report;
  report["n_samples"] = rec.samples.size();
  report["iterations"] = res.iterations;
  report["converged"] = res.converged;
  report["final_loglik"] = res.loglik.empty() ? 0.0 : res.loglik.back();
  if (!a.truth.empty()) {
    std::ifstream tin(a.truth);
    if (!tin) throw io_error("cannot open " + a.truth + " for reading");
    DensityMatrix truth = read_density_json(tin);
    if (truth.dims != res.rho.dims)
      throw std::invalid_argument("tomo reconstruct: truth dimensions " +
                                  std::to_string(truth.total_dim()) +
                                  " do not match reconstruction space");
    report["fidelity_to_truth"] = fidelity(res.rho, truth);
  }
  run.write_json("report.json", report);

  run.write_manifest();
}

// ------------------------------ herald --------------------------------------

struct HeraldArgs {
  std::string config;
  double lambda = 0.1;
  bool lambda_given = false;
  int signal_nmax = 5;
  int idler_nmax = 2;
  std::string optimize;  // "", "cubic", or "fockN"
  double chi = kDefaultChi;
  std::uint64_t seed = 1;
  int starts = 8;
  std::string out;
};

StateVector herald_target(const HeraldArgs& a, Truncation signal) {
  if (a.optimize == "cubic") return cubic_state(a.chi, signal);
  if (a.optimize.size() == 5 && a.optimize.compare(0, 4, "fock") == 0) {
    const int n = a.optimize[4] - '0';
    if (n >= 0 && n <= 3) return fock(n, signal);
  }
  throw std::invalid_argument("herald: unknown optimize target '" + a.optimize +
                              "' (use cubic or fock0..fock3)");
}

void run_herald(const HeraldArgs& a) {
  Run run("herald", a.out);
  run.seed = a.seed;

  HeraldConfig cfg = HeraldConfig::balanced(a.lambda, Truncation(a.signal_nmax),
                                            Truncation(a.idler_nmax));
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw io_error("cannot open " + a.config + " for reading");
    cfg = load_herald_config(in);
    if (a.lambda_given) cfg.lambda = a.lambda;
    run.parameters["config"] = a.config;
  }
  run.parameters["lambda"] = cfg.lambda;
  run.parameters["signal_nmax"] = cfg.signal.nmax;
  run.parameters["idler_nmax"] = cfg.idler.nmax;

  json result;
  if (!a.optimize.empty()) {
    run.parameters["optimize"] = a.optimize;
    if (a.optimize == "cubic") run.parameters["chi"] = a.chi;
    const StateVector target = herald_target(a, cfg.signal);
    HeraldOptions opt;
    opt.seed = a.seed;
    opt.starts = a.starts;
    const HeraldOptimum best = optimize_betas(target, cfg, opt);
    cfg = best.config;
    result["fidelity_to_target"] = best.fidelity;
    result["target"] = a.optimize;
    {
      std::ofstream f = run.open("best_config.json");
      save_herald_config(cfg, f);
      run.wrote("best_config.json", f);
    }
  }

  const HeraldResult res = herald(cfg);
  write_density(run, "signal_rho.json", res.rho_signal);
  result["p_success"] = res.p_success;
  result["photon_probs"] = photon_probs(res.rho_signal);
  run.write_json("result.json", result);

  run.write_manifest();
}

// ------------------------------ app wiring ----------------------------------

void add_out_flag(CLI::App* cmd, std::string& out) {
  cmd->add_option("--out", out,
                  "Output directory (default: $FOCKLAB_OUT or the working directory)");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Truncated Fock-space laboratory: states, channels, heralding, tomography"};
  app.name("focklab");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  StateArgs sa;
  CLI::App* state_cmd = app.add_subcommand(
      "state", "Emit a named state's amplitudes, photon statistics and moments");
  state_cmd->add_option("kind", sa.kind, "cubic | fock | coherent | one-and-three")
      ->required()
      ->check(CLI::IsMember({"cubic", "fock", "coherent", "one-and-three"}));
  state_cmd->add_option("--chi", sa.chi, "Nonlinearity strength (cubic)")
      ->capture_default_str();
  state_cmd->add_option("--n", sa.n, "Photon number (fock)")->capture_default_str();
  state_cmd->add_option("--alpha", sa.alpha, "Coherent amplitude (coherent)")
      ->capture_default_str();
  state_cmd->add_flag("--perp", sa.perp, "Orthogonal partner (one-and-three)");
  state_cmd->add_option("--nmax", sa.nmax, "Fock-space cutoff")->capture_default_str();
  state_cmd->add_option("--eta", sa.eta, "Loss-channel transmittance")
      ->capture_default_str();
  add_out_flag(state_cmd, sa.out);

  FigureArgs fa;
  CLI::App* figure_cmd = app.add_subcommand(
      "figure", "Run a named analysis pipeline and emit plot-ready data");
  figure_cmd
      ->add_option("which", fa.which,
                   "fig2a (Wigner) | fig2b (Wigner, one subtracted) | "
                   "fig3 (moment curve) | fig4 (anti-diagonal)")
      ->required()
      ->check(CLI::IsMember({"fig2a", "fig2b", "fig3", "fig4"}));
  figure_cmd->add_option("--chi", fa.chi, "Nonlinearity strength")->capture_default_str();
  figure_cmd->add_option("--eta", fa.eta, "Loss-channel transmittance")
      ->capture_default_str();
  figure_cmd->add_option("--nmax", fa.nmax, "Fock-space cutoff")->capture_default_str();
  add_out_flag(figure_cmd, fa.out);

  CLI::App* tomo_cmd =
      app.add_subcommand("tomo", "Homodyne sampling and maximum-likelihood inversion");
  tomo_cmd->require_subcommand(1);

  TomoSimulateArgs tsa;
  CLI::App* tomo_sim = tomo_cmd->add_subcommand(
      "simulate", "Sample homodyne quadratures of the resource state");
  tomo_sim->add_option("--chi", tsa.chi, "Nonlinearity strength")->capture_default_str();
  tomo_sim->add_option("--nmax", tsa.nmax, "Fock-space cutoff")->capture_default_str();
  tomo_sim->add_option("--phases", tsa.phases, "Number of equally spaced phases in [0, π)")
      ->capture_default_str();
  tomo_sim->add_option("--samples", tsa.samples, "Samples per phase")
      ->capture_default_str();
  tomo_sim->add_option("--seed", tsa.seed, "Sampling seed")->capture_default_str();
  add_out_flag(tomo_sim, tsa.out);

  TomoReconstructArgs tra;
  CLI::App* tomo_rec = tomo_cmd->add_subcommand(
      "reconstruct", "Reconstruct a density matrix from a quadrature record");
  tomo_rec->add_option("--in", tra.in, "Quadrature record CSV")->required();
  tomo_rec->add_option("--truth", tra.truth,
                       "Density JSON to compare the reconstruction against");
  tomo_rec->add_option("--nmax", tra.nmax, "Reconstruction-space cutoff")
      ->capture_default_str();
  add_out_flag(tomo_rec, tra.out);

  HeraldArgs ha;
  CLI::App* herald_cmd = app.add_subcommand(
      "herald", "Condition the signal of a two-mode squeezed pair on a triple click");
  CLI::Option* cfg_opt =
      herald_cmd->add_option("--config", ha.config, "Herald configuration JSON");
  CLI::Option* lambda_opt =
      herald_cmd->add_option("--lambda", ha.lambda, "Squeezing parameter λ")
          ->capture_default_str();
  herald_cmd->add_option("--signal-nmax", ha.signal_nmax, "Signal-mode cutoff")
      ->capture_default_str()
      ->excludes(cfg_opt);
  herald_cmd->add_option("--idler-nmax", ha.idler_nmax, "Split-arm cutoff")
      ->capture_default_str()
      ->excludes(cfg_opt);
  herald_cmd->add_option("--optimize", ha.optimize,
                         "Optimize betas toward a target: cubic or fock0..fock3");
  herald_cmd->add_option("--chi", ha.chi, "Target nonlinearity (optimize cubic)")
      ->capture_default_str();
  herald_cmd->add_option("--seed", ha.seed, "Optimizer start-placement seed")
      ->capture_default_str();
  herald_cmd->add_option("--starts", ha.starts, "Optimizer multi-start count")
      ->capture_default_str();
  add_out_flag(herald_cmd, ha.out);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ha.lambda_given = lambda_opt->count() > 0;
    if (state_cmd->parsed()) run_state(sa);
    else if (figure_cmd->parsed()) run_figure(fa);
    else if (tomo_cmd->parsed() && tomo_sim->parsed()) run_tomo_simulate(tsa);
    else if (tomo_cmd->parsed() && tomo_rec->parsed()) run_tomo_reconstruct(tra);
    else if (herald_cmd->parsed()) run_herald(ha);
    return 0;
  } catch (const numeric_error& e) {
    std::cerr << "focklab: numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const io_error& e) {
    std::cerr << "focklab: i/o failure: " << e.what() << "\n";
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "focklab: i/o failure: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "focklab: bad arguments: " << e.what() << "\n";
    return 2;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace focklab::cli
