// herald.cpp — Triple-click conditional preparation and the β optimizer.

#include "focklab/herald.hpp"

#include "focklab/channels.hpp"
#include "focklab/characterize.hpp"
#include "focklab/states.hpp"
#include "focklab/tomo.hpp"  // splitmix64 / derive_seed

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

namespace focklab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<int> register_dims(const HeraldConfig& cfg) {
  return {cfg.signal.dim(), cfg.signal.dim(), cfg.idler.dim(), cfg.idler.dim()};
}

// The β-independent part of the run: TMSV on (0,1), two mixers. Expensive
// (two 4-mode exponentials), so cached per geometry — optimizers and grid
// scans call herald() thousands of times with fixed angles and varying betas.
struct SplitState {
  std::vector<int> dims;
  Vector amps;  // pre-displacement pure state of the full register
};

std::shared_ptr<const SplitState> build_split_state(const HeraldConfig& cfg) {
  using Key = std::tuple<double, double, double, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const SplitState>> cache;

  const Key key{cfg.lambda, cfg.split[0], cfg.split[1], cfg.signal.nmax,
                cfg.idler.nmax};
  {
    std::lock_guard<std::mutex> lock(mutex);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const std::vector<int> dims = register_dims(cfg);
  const StateVector pair = tmsv(cfg.lambda, cfg.signal);
  const StateVector idle = fock(0, cfg.idler);
  const StateVector full = tensor(tensor(pair, idle), idle);
  const ModeOperator u1 = beamsplitter(cfg.split[0], {1, 2}, dims);
  const ModeOperator u2 = beamsplitter(cfg.split[1], {1, 3}, dims);
  auto state = std::make_shared<const SplitState>(
      SplitState{dims, u2.m * (u1.m * full.amps)});

  std::lock_guard<std::mutex> lock(mutex);
  if (cache.size() >= 16) cache.clear();
  cache.emplace(key, state);
  return state;
}

// Conditioning on all three arms clicking. The on/off POVM element
// Π = 1 − |0⟩⟨0| is diagonal, so the conditioned signal matrix is a masked
// contraction of the pure-state amplitudes.
HeraldResult condition_on_clicks(const SplitState& split,
                                 const std::array<Complex, 3>& betas) {
  const int ds = split.dims[0];
  const int da = split.dims[1];
  const int di = split.dims[2];

  const Matrix d1 = displacement_operator(betas[0], Truncation(da - 1)).m;
  const Matrix d2 = displacement_operator(betas[1], Truncation(di - 1)).m;
  const Matrix d3 = displacement_operator(betas[2], Truncation(di - 1)).m;

  // Apply mode-local displacements to the amplitude tensor A[s][a][b][c].
  const long long na = static_cast<long long>(da) * di * di;
  Vector amps = split.amps;
  Vector tmp(amps.size());

  // arm 1 (dimension da, stride di*di within each signal block)
  tmp.setZero();
  for (int s = 0; s < ds; ++s)
    for (int a2 = 0; a2 < da; ++a2)
      for (int a1 = 0; a1 < da; ++a1) {
        const Complex w = d1(a2, a1);
        if (w == Complex(0.0, 0.0)) continue;
        const long long src = s * na + static_cast<long long>(a1) * di * di;
        const long long dst = s * na + static_cast<long long>(a2) * di * di;
        tmp.segment(dst, di * di) += w * amps.segment(src, di * di);
      }
  amps.swap(tmp);

  // arm 2 (dimension di, stride di)
  tmp.setZero();
  for (long long outer = 0; outer < static_cast<long long>(ds) * da; ++outer)
    for (int b2 = 0; b2 < di; ++b2)
      for (int b1 = 0; b1 < di; ++b1) {
        const Complex w = d2(b2, b1);
        if (w == Complex(0.0, 0.0)) continue;
        tmp.segment(outer * di * di + b2 * di, di) +=
            w * amps.segment(outer * di * di + b1 * di, di);
      }
  amps.swap(tmp);

  // arm 3 (dimension di, stride 1)
  tmp.setZero();
  for (long long outer = 0; outer < static_cast<long long>(ds) * da * di; ++outer)
    for (int c2 = 0; c2 < di; ++c2)
      for (int c1 = 0; c1 < di; ++c1) {
        const Complex w = d3(c2, c1);
        if (w == Complex(0.0, 0.0)) continue;
        tmp(outer * di + c2) += w * amps(outer * di + c1);
      }
  amps.swap(tmp);

  Matrix rho = Matrix::Zero(ds, ds);
  for (int a = 1; a < da; ++a)
    for (int b = 1; b < di; ++b)
      for (int c = 1; c < di; ++c) {
        const long long off = static_cast<long long>(a) * di * di + b * di + c;
        for (int m = 0; m < ds; ++m) {
          const Complex am = amps(m * na + off);
          if (am == Complex(0.0, 0.0)) continue;
          for (int n = 0; n < ds; ++n)
            rho(m, n) += am * std::conj(amps(n * na + off));
        }
      }

  const double p = rho.trace().real();
  if (p < 1e-15)
    throw numeric_error("herald: p_success below 1e-15 (nothing heralded)");
  rho /= p;
  return {DensityMatrix{{ds}, std::move(rho)}, p};
}

}  // namespace

HeraldConfig HeraldConfig::balanced(double lambda, Truncation signal, Truncation idler) {
  HeraldConfig cfg;
  cfg.lambda = lambda;
  cfg.split = {std::asin(1.0 / std::sqrt(3.0)), kPi / 4.0};
  cfg.betas = {Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0)};
  cfg.signal = signal;
  cfg.idler = idler;
  return cfg;
}

HeraldResult herald(const HeraldConfig& cfg) {
  if (cfg.lambda < 0.0 || cfg.lambda >= 1.0)
    throw std::invalid_argument("herald: lambda must lie in [0, 1)");
  if (cfg.signal.nmax < 3)
    throw std::invalid_argument("herald: signal nmax must be >= 3");
  if (cfg.idler.nmax < 2)
    throw std::invalid_argument("herald: idler nmax must be >= 2");
  const std::shared_ptr<const SplitState> split = build_split_state(cfg);
  return condition_on_clicks(*split, cfg.betas);
}

// ------------------------------ optimizer -----------------------------------

namespace {

std::array<Complex, 3> betas_from(const std::array<double, 6>& v) {
  return {Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5])};
}

// Nelder–Mead on the six real β components (maximizing fidelity as −f).
struct Simplex {
  using Point = std::array<double, 6>;

  static Point step(const Point& a, const Point& b, double w) {
    Point out{};
    for (int i = 0; i < 6; ++i) out[i] = a[i] + w * (b[i] - a[i]);
    return out;
  }
};

}  // namespace

HeraldOptimum optimize_betas(const StateVector& target, const HeraldConfig& base,
                             const HeraldOptions& options) {
  if (target.dims != std::vector<int>{base.signal.dim()})
    throw std::invalid_argument("optimize_betas: target must live on the signal mode");
  if (std::abs(target.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("optimize_betas: target must be normalized");
  for (int n = 4; n < target.total_dim(); ++n)
    if (std::abs(target.amps(n)) > 1e-12)
      throw std::invalid_argument("optimize_betas: target must live in span{|0>..|3>}");
  if (options.starts < 1 || options.max_iters < 1)
    throw std::invalid_argument("optimize_betas: bad options");

  const std::shared_ptr<const SplitState> split = build_split_state(base);
  auto objective = [&](const Simplex::Point& v) -> double {
    try {
      const HeraldResult res = condition_on_clicks(*split, betas_from(v));
      return -fidelity(res.rho_signal, target);
    } catch (const numeric_error&) {
      return 0.0;  // dead configuration (no clicks): worst possible score
    }
  };

  std::uint64_t seed_state = options.seed;
  Simplex::Point best_v{};
  double best_f = 1.0;  // objective scale: −fidelity ∈ [−1, 0]

  for (int start = 0; start < options.starts; ++start) {
    std::mt19937_64 rng(derive_seed(splitmix64(seed_state), start));
    auto u = [&rng]() {
      return (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
    };
    // First start probes β = 0; the rest scatter inside the radius.
    Simplex::Point center{};
    if (start > 0)
      for (int i = 0; i < 6; ++i) center[i] = options.radius * u();

    std::array<Simplex::Point, 7> pts;
    std::array<double, 7> f;
    pts[0] = center;
    for (int k = 1; k < 7; ++k) {
      pts[k] = center;
      pts[k][k - 1] += 0.1;
    }
    for (int k = 0; k < 7; ++k) f[k] = objective(pts[k]);

    for (int it = 0; it < options.max_iters; ++it) {
      std::array<int, 7> order;
      for (int k = 0; k < 7; ++k) order[k] = k;
      std::sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
      const int lo = order[0], hi = order[6], second_hi = order[5];
      if (f[hi] - f[lo] < 1e-12) break;

      Simplex::Point centroid{};
      for (int k = 0; k < 7; ++k)
        if (k != hi)
          for (int i = 0; i < 6; ++i) centroid[i] += pts[k][i] / 6.0;

      const Simplex::Point refl = Simplex::step(centroid, pts[hi], -1.0);
      const double f_refl = objective(refl);
      if (f_refl < f[lo]) {
        const Simplex::Point expd = Simplex::step(centroid, pts[hi], -2.0);
        const double f_expd = objective(expd);
        if (f_expd < f_refl) { pts[hi] = expd; f[hi] = f_expd; }
        else { pts[hi] = refl; f[hi] = f_refl; }
      } else if (f_refl < f[second_hi]) {
        pts[hi] = refl;
        f[hi] = f_refl;
      } else {
        const Simplex::Point contr = Simplex::step(centroid, pts[hi], 0.5);
        const double f_contr = objective(contr);
        if (f_contr < f[hi]) { pts[hi] = contr; f[hi] = f_contr; }
        else {
          for (int k = 0; k < 7; ++k) {
            if (k == lo) continue;
            pts[k] = Simplex::step(pts[lo], pts[k], 0.5);
            f[k] = objective(pts[k]);
          }
        }
      }
    }

    for (int k = 0; k < 7; ++k)
      if (f[k] < best_f) { best_f = f[k]; best_v = pts[k]; }
  }

  const double best_fidelity = -best_f;
  if (best_fidelity < 0.5) {
    std::ostringstream os;
    os << "optimize_betas: all starts below fidelity 0.5 (best " << best_fidelity
       << " at betas";
    for (double c : best_v) os << " " << c;
    os << ")";
    throw numeric_error(os.str());
  }

  HeraldConfig out = base;
  out.betas = betas_from(best_v);
  const HeraldResult res = condition_on_clicks(*split, out.betas);
  return {out, best_fidelity, res.p_success};
}

// ------------------------------ JSON config ---------------------------------

HeraldConfig load_herald_config(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("herald config: ") + e.what());
  }
  try {
    HeraldConfig cfg;
    cfg.lambda = j.at("lambda").get<double>();
    const auto split = j.at("split");
    if (!split.is_array() || split.size() != 2)
      throw std::invalid_argument("herald config: split must be two angles");
    cfg.split = {split[0].get<double>(), split[1].get<double>()};
    const auto betas = j.at("betas");
    if (!betas.is_array() || betas.size() != 3)
      throw std::invalid_argument("herald config: betas must be three [re, im] pairs");
    for (int i = 0; i < 3; ++i) {
      if (!betas[i].is_array() || betas[i].size() != 2)
        throw std::invalid_argument("herald config: beta entries are [re, im]");
      cfg.betas[i] = Complex(betas[i][0].get<double>(), betas[i][1].get<double>());
    }
    cfg.signal = Truncation(j.at("signal_nmax").get<int>());
    cfg.idler = Truncation(j.at("idler_nmax").get<int>());
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("herald config: ") + e.what());
  }
}

void save_herald_config(const HeraldConfig& cfg, std::ostream& out) {
  nlohmann::json j;
  j["lambda"] = cfg.lambda;
  j["split"] = {cfg.split[0], cfg.split[1]};
  j["betas"] = nlohmann::json::array();
  for (const Complex& b : cfg.betas) j["betas"].push_back({b.real(), b.imag()});
  j["signal_nmax"] = cfg.signal.nmax;
  j["idler_nmax"] = cfg.idler.nmax;
  out << j.dump(2) << "\n";
}

}  // namespace focklab
