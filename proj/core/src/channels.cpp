// channels.cpp — CP maps and passive optics.

#include "focklab/channels.hpp"

#include <cassert>
#include <cmath>
#include <vector>

namespace focklab {

namespace {

void require_single_mode(const DensityMatrix& rho, const char* who) {
  if (rho.n_modes() != 1)
    throw std::invalid_argument(std::string(who) + ": expects a single-mode state");
}

#ifndef NDEBUG
// Channel sanity in test builds: Hermiticity and positivity survive the map.
void debug_check_state(const DensityMatrix& rho) {
  assert(is_hermitian(rho.m, 1e-10));
  assert(min_eigenvalue(rho.m) > -1e-8);
}
#else
void debug_check_state(const DensityMatrix&) {}
#endif

}  // namespace

LossParam::LossParam(double eta_in) : eta(eta_in) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("LossParam: eta must lie in [0, 1]");
}

Subtracted subtract(const DensityMatrix& rho, int k) {
  require_single_mode(rho, "subtract");
  if (k != 1 && k != 2) throw std::invalid_argument("subtract: k must be 1 or 2");
  const Truncation t(rho.total_dim() - 1);
  Matrix a = destroy(t).m;
  Matrix ak = (k == 1) ? a : Matrix(a * a);
  Matrix num = ak * rho.m * ak.adjoint();
  const double weight = num.trace().real();
  if (weight <= 1e-12)
    throw numeric_error("subtract: no photons to subtract (weight <= 1e-12)");
  DensityMatrix out{rho.dims, std::move(num)};
  out.normalize();
  debug_check_state(out);
  return {std::move(out), weight};
}

DensityMatrix loss(const DensityMatrix& rho, LossParam p) {
  require_single_mode(rho, "loss");
  const int d = rho.total_dim();
  const double eta = p.eta;
  // A_k = Σ_n √C(n,k) η^{(n−k)/2} (1−η)^{k/2} |n−k⟩⟨n|, k = 0..nmax.
  Matrix out = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    Matrix ak = Matrix::Zero(d, d);
    for (int n = k; n < d; ++n) {
      double binom = 1.0;  // C(n, k)
      for (int j = 0; j < k; ++j) binom *= static_cast<double>(n - j) / (j + 1);
      ak(n - k, n) = std::sqrt(binom) * std::pow(eta, 0.5 * (n - k)) *
                     std::pow(1.0 - eta, 0.5 * k);
    }
    out.noalias() += ak * rho.m * ak.adjoint();
  }
  DensityMatrix result{rho.dims, std::move(out)};
  debug_check_state(result);
  return result;
}

ModeOperator displacement_operator(Complex beta, Truncation t) {
  const Matrix a = destroy(t).m;
  const Matrix g = beta * a.adjoint() - std::conj(beta) * a;
  return {{t.dim()}, expm_antihermitian(g), "D"};
}

DensityMatrix displace(const DensityMatrix& rho, Complex beta) {
  require_single_mode(rho, "displace");
  const ModeOperator d = displacement_operator(beta, Truncation(rho.total_dim() - 1));
  DensityMatrix out = sandwich(d, rho);
  debug_check_state(out);
  return out;
}

ModeOperator beamsplitter(double theta, std::pair<int, int> modes,
                          const std::vector<int>& dims) {
  const auto [i, j] = modes;
  const int n = static_cast<int>(dims.size());
  if (i < 0 || j < 0 || i >= n || j >= n || i == j)
    throw std::invalid_argument("beamsplitter: bad mode pair");
  const Matrix ai = embed(destroy(Truncation(dims[i] - 1)), i, dims).m;
  const Matrix aj = embed(destroy(Truncation(dims[j] - 1)), j, dims).m;
  const Matrix g = theta * (ai.adjoint() * aj - ai * aj.adjoint());
  return {dims, expm_antihermitian(g), "BS"};
}

}  // namespace focklab
