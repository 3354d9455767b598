// tomo.cpp — Homodyne sampling and iterative maximum-likelihood reconstruction.

#include "focklab/tomo.hpp"

#include "focklab/characterize.hpp"
#include "focklab/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

namespace focklab {

// --------------------------- seeding helpers --------------------------------

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  return splitmix64(state);
}

// ------------------------------ sampling ------------------------------------

namespace {

constexpr double kXLo = -6.0;
constexpr double kXHi = 6.0;
constexpr double kXStep = 0.005;

// Quadrature pdf along phase θ: pr(x|θ) = Σ_{mn} ρ_{mn} e^{-iθ(m-n)} ψ_m(x) ψ_n(x).
// Evaluated on the whole grid at once as diag(P σ_θ Pᵀ) with P the Hermite table.
Eigen::VectorXd phase_pdf(const DensityMatrix& rho, double theta,
                          const Eigen::VectorXd& xs) {
  const int dim = rho.dims[0];
  Matrix sigma(dim, dim);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n)
      sigma(m, n) = rho.m(m, n) * std::exp(Complex(0.0, -theta * (m - n)));

  const int npts = static_cast<int>(xs.size());
  Eigen::MatrixXd p(npts, dim);
  for (int i = 0; i < npts; ++i) {
    const std::vector<double> row = hermite_all(dim - 1, xs[i]);
    for (int n = 0; n < dim; ++n) p(i, n) = row[n];
  }
  const Matrix pc = p.cast<Complex>();
  Eigen::VectorXd pdf(npts);
  for (int i = 0; i < npts; ++i) {
    const Complex v = pc.row(i) * sigma * pc.row(i).transpose();
    pdf[i] = std::max(v.real(), 0.0);
  }
  return pdf;
}

}  // namespace

QuadratureRecord sample(const DensityMatrix& rho, const std::vector<double>& thetas,
                        int n_per_phase, std::uint64_t seed) {
  if (rho.dims.size() != 1)
    throw std::invalid_argument("sample: single-mode states only");
  if (thetas.empty() || n_per_phase < 1)
    throw std::invalid_argument("sample: need at least one phase and one sample");

  const int npts = static_cast<int>(std::lround((kXHi - kXLo) / kXStep)) + 1;
  Eigen::VectorXd xs(npts);
  for (int i = 0; i < npts; ++i) xs[i] = kXLo + i * kXStep;

  QuadratureRecord record;
  record.samples.reserve(thetas.size() * static_cast<std::size_t>(n_per_phase));

  for (std::size_t t = 0; t < thetas.size(); ++t) {
    const Eigen::VectorXd pdf = phase_pdf(rho, thetas[t], xs);

    // Trapezoid cumulative, normalized so inversion covers (0, 1).
    std::vector<double> cdf(npts, 0.0);
    for (int i = 1; i < npts; ++i)
      cdf[i] = cdf[i - 1] + 0.5 * (pdf[i - 1] + pdf[i]) * kXStep;
    const double total = cdf[npts - 1];
    if (total <= 0.0)
      throw numeric_error("sample: pdf vanished on the sampling window");
    for (double& c : cdf) c /= total;

    std::mt19937_64 rng(derive_seed(seed, t));
    for (int k = 0; k < n_per_phase; ++k) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      int hi = static_cast<int>(it - cdf.begin());
      if (hi <= 0) hi = 1;
      if (hi >= npts) hi = npts - 1;
      const double c0 = cdf[hi - 1], c1 = cdf[hi];
      const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
      record.samples.push_back({thetas[t], xs[hi - 1] + frac * kXStep});
    }
  }
  return record;
}

// ------------------------------- CSV io -------------------------------------

void save_record_csv(const QuadratureRecord& record, std::ostream& out) {
  out << "theta,x\n";
  for (const QuadratureSample& s : record.samples)
    out << format_sig(s.theta, 9) << "," << format_sig(s.x, 9) << "\n";
}

QuadratureRecord load_record_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw io_error("quadrature csv: empty stream");
  if (line == "theta,x\r") line = "theta,x";
  if (line != "theta,x")
    throw io_error("quadrature csv: expected header 'theta,x'");

  QuadratureRecord record;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      std::ostringstream os;
      os << "quadrature csv: line " << lineno << ": missing comma";
      throw io_error(os.str());
    }
    try {
      std::size_t used = 0;
      const double theta = std::stod(line.substr(0, comma), &used);
      const double x = std::stod(line.substr(comma + 1), &used);
      record.samples.push_back({theta, x});
    } catch (const std::exception&) {
      std::ostringstream os;
      os << "quadrature csv: line " << lineno << ": bad number";
      throw io_error(os.str());
    }
  }
  return record;
}

// --------------------------- reconstruction ---------------------------------

TomoResult reconstruct_full(const QuadratureRecord& record, const TomoConfig& cfg) {
  if (record.samples.size() < 1000)
    throw std::invalid_argument("reconstruct: need at least 1000 samples");
  {
    std::vector<double> distinct;
    for (const QuadratureSample& s : record.samples) {
      bool seen = false;
      for (double d : distinct)
        if (std::abs(d - s.theta) < 1e-12) { seen = true; break; }
      if (!seen) distinct.push_back(s.theta);
    }
    if (distinct.size() < 6)
      throw std::invalid_argument("reconstruct: need at least 6 distinct phases");
  }
  if (cfg.nmax < 1 || cfg.bin_width <= 0.0 || cfg.max_iters < 1)
    throw std::invalid_argument("reconstruct: bad configuration");

  const int dim = cfg.nmax + 1;
  const double w = cfg.bin_width;
  const int nbins = static_cast<int>(std::lround((kXHi - kXLo) / w));

  // Histogram into (theta, bin) cells; projectors are rank-1 so each occupied
  // cell contributes one vector v with Π = v v†.
  struct Cell {
    double count = 0.0;
    Vector v;
  };
  std::map<std::pair<long long, int>, Cell> cells;
  const double theta_key_scale = 1e9;
  std::map<long long, double> theta_of_key;
  double n_used = 0.0;

  for (const QuadratureSample& s : record.samples) {
    int bin = static_cast<int>(std::floor((s.x - kXLo) / w));
    if (bin < 0 || bin >= nbins) continue;  // outside the analysis window
    const long long key = std::llround(s.theta * theta_key_scale);
    theta_of_key[key] = s.theta;
    cells[{key, bin}].count += 1.0;
    n_used += 1.0;
  }
  if (n_used < 1000.0)
    throw std::invalid_argument("reconstruct: fewer than 1000 samples in window");

  const double sq_w = std::sqrt(w);
  for (auto& [key, cell] : cells) {
    const double theta = theta_of_key[key.first];
    const double xc = kXLo + (key.second + 0.5) * w;
    const std::vector<double> psi = hermite_all(cfg.nmax, xc);
    cell.v = Vector(dim);
    for (int m = 0; m < dim; ++m)
      cell.v(m) = sq_w * std::exp(Complex(0.0, theta * m)) * psi[m];
  }

  Matrix rho = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  std::vector<double> loglik;
  loglik.reserve(cfg.max_iters);
  int it = 0;
  bool converged = false;

  for (; it < cfg.max_iters; ++it) {
    Matrix r = Matrix::Zero(dim, dim);
    double ll = 0.0;
    for (const auto& [key, cell] : cells) {
      const double p = std::max((cell.v.adjoint() * rho * cell.v).value().real(), 1e-300);
      const double f = cell.count / n_used;
      ll += f * std::log(p);
      r += (f / p) * (cell.v * cell.v.adjoint());
    }
    if (!loglik.empty() && ll < loglik.back() - 1e-9) {
      std::ostringstream os;
      os << "reconstruct: log-likelihood decreased at iteration " << it;
      throw numeric_error(os.str());
    }
    const double gain = loglik.empty() ? std::numeric_limits<double>::infinity()
                                       : ll - loglik.back();
    loglik.push_back(ll);
    if (gain < cfg.tol) {
      converged = true;
      break;
    }
    Matrix next = r * rho * r;
    next = Complex(0.5, 0.0) * (next + next.adjoint().eval());
    const double tr = next.trace().real();
    if (tr <= 0.0)
      throw numeric_error("reconstruct: iteration produced a traceless update");
    rho = next / tr;
  }

  return {DensityMatrix{{dim}, rho}, std::move(loglik), it, converged};
}

DensityMatrix reconstruct(const QuadratureRecord& record, const TomoConfig& cfg) {
  TomoResult res = reconstruct_full(record, cfg);
  return std::move(res.rho);
}

}  // namespace focklab
