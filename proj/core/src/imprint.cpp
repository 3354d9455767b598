// imprint.cpp — Measurement-induced nonlinearity map and its moment sweep.

#include "focklab/imprint.hpp"

#include "focklab/channels.hpp"
#include "focklab/characterize.hpp"
#include "focklab/states.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <mutex>

namespace focklab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Balanced mixer per dimension, cached (imprint always runs at θ = π/4 with
// the input on port 0 and the ancilla on port 1).
const Matrix& balanced_mixer(int d) {
  static std::mutex mu;
  static std::map<int, Matrix> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) {
    const ModeOperator bs = beamsplitter(kPi / 4.0, {0, 1}, {d, d});
    it = cache.emplace(d, bs.m).first;
  }
  return it->second;
}

// Fock coefficients of the (unnormalizable) x = 0 quadrature bra: ψ_n(0),
// zero for odd n. Keeping the bare wavefunction values puts every weight on
// the same relative scale.
Eigen::VectorXd x0_bra(int d) {
  Eigen::VectorXd e(d);
  const std::vector<double> psi = hermite_all(d - 1, 0.0);
  for (int n = 0; n < d; ++n) e(n) = psi[n];
  return e;
}

}  // namespace

ImprintResult imprint(const DensityMatrix& rho_in, const DensityMatrix& rho_ancilla) {
  if (rho_in.n_modes() != 1 || rho_ancilla.n_modes() != 1)
    throw std::invalid_argument("imprint: both states must be single-mode");
  if (rho_in.total_dim() != rho_ancilla.total_dim())
    throw std::invalid_argument("imprint: input and ancilla dimensions differ");
  const int d = rho_in.total_dim();

  const Matrix& u = balanced_mixer(d);
  const DensityMatrix joint = tensor(rho_in, rho_ancilla);
  const Matrix mixed = u * joint.m * u.adjoint();

  // M(m, n) = Σ_{jk} mixed[(m,j), (n,k)] ψ_j(0) ψ_k(0): the ancilla port is
  // pinched onto the x = 0 quadrature bra, leaving an operator on the input.
  const Eigen::VectorXd e = x0_bra(d);
  const Vector ec = e.cast<Complex>();
  Matrix out(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      out(m, n) = (ec.transpose() * mixed.block(m * d, n * d, d, d) * ec).value();

  const double weight = out.trace().real();
  if (weight <= 1e-12)
    throw numeric_error("imprint: projection annihilated the state");
  DensityMatrix rho{{d}, std::move(out)};
  rho.normalize();
  assert(is_hermitian(rho.m, 1e-10));
  return {std::move(rho), weight};
}

MomentCurve sweep(const std::vector<double>& alphas, const DensityMatrix& rho_ancilla) {
  if (alphas.size() < 2) throw std::invalid_argument("sweep: need at least 2 alphas");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] < 0.0 || alphas[i] > 1.2)
      throw std::invalid_argument("sweep: alphas must lie in [0, 1.2]");
    if (i > 0 && alphas[i] <= alphas[i - 1])
      throw std::invalid_argument("sweep: alphas must be strictly increasing");
  }
  if (rho_ancilla.n_modes() != 1)
    throw std::invalid_argument("sweep: ancilla must be single-mode");

  const Truncation t(rho_ancilla.total_dim() - 1);
  MomentCurve curve;
  for (double alpha : alphas) {
    const DensityMatrix probe = to_density(coherent(alpha, t));
    const ImprintResult res = imprint(probe, rho_ancilla);
    const Moments mom = moments(res.rho);
    assert(res.weight > 0.0 && res.weight <= 1.0);
    curve.points.push_back({alpha, mom.mean_x, mom.mean_p, res.weight});
  }
  return curve;
}

QuadFit quad_fit(const MomentCurve& curve) {
  const std::size_t n = curve.points.size();
  if (n < 4) throw std::invalid_argument("quad_fit: need at least 4 points");
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = curve.points[i].mean_x;
    a(i, 0) = 1.0;
    a(i, 1) = x;
    a(i, 2) = x * x;
    y(i) = curve.points[i].mean_p;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 3)
    throw numeric_error("quad_fit: rank-deficient design (degenerate mean_x values)");
  const Eigen::VectorXd c = qr.solve(y);
  const double rms = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(n));
  return {c(0), c(1), c(2), rms};
}

}  // namespace focklab
