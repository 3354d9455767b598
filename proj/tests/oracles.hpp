// oracles.hpp — Reference results for the test suite, computed by routes the
// library never takes: physicists' Hermite polynomials instead of the
// normalized recurrence, quadrature integrals instead of operator algebra,
// explicit photon-path sums and closed-form displacement elements instead of
// matrix exponentials. Agreement between these and the library is evidence,
// not tautology, so nothing in here may call back into the code paths it
// checks.

#pragma once

#include <focklab/fock.hpp>

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace oracle {

// ψ_n(x) through the raw polynomial recurrence H_{n+1} = 2xH_n − 2nH_{n−1},
// normalized afterwards by (2ⁿ n! √π)^{−1/2}. Safe in double for n ≤ 60 on
// |x| ≤ 12.
double psi(int n, double x);
std::vector<double> psi_all(int nmax, double x);

// dψ_n/dx = √(2n) ψ_{n−1} − x ψ_n (with the oracle ψ).
double psi_prime(int n, double x);

// Simpson's rule over n (even) intervals; works for real and complex f.
template <class F>
auto simpson(F&& f, double a, double b, int n) {
  auto acc = f(a) + f(b);
  const double h = (b - a) / n;
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * (h / 3.0);
}

// W(x,p) = (1/π) ∫ ⟨x+y|ρ|x−y⟩ e^{−2ipy} dy, Simpson on y ∈ [−8, 8] with
// step 0.01. The kernel inside is rebuilt here from oracle wavefunctions.
double wigner_point(const focklab::DensityMatrix& rho, double x, double p);

// Moments of the fused wavefunction φ(x) = ψ_in(x/√2) · ψ_anc(x/√2), the two
// factors being Hermite series with the given amplitude vectors. Integrals by
// Simpson on [−12, 12], step 0.002.
struct FusedMoments {
  double weight;  // ∫ |φ|² dx
  double mean_x;  // ∫ x |φ|² dx / weight
  double mean_p;  // Im ∫ φ* φ′ dx / weight
};
FusedMoments fused_moments(const focklab::Vector& in_amps,
                           const focklab::Vector& anc_amps);

// Closed-form ⟨m|D(β)|n⟩ (Laguerre form of the infinite-space elements,
// restricted to dim levels — deliberately NOT a truncated exponential).
focklab::Matrix displacement_elements(focklab::Complex beta, int dim);

// Conditional preparation by explicit path enumeration. Pair amplitudes λⁿ
// split multinomially over three arms with amplitudes u₁ = cosθ₁cosθ₂,
// u₂ = −sinθ₁, u₃ = −cosθ₁sinθ₂; each arm is displaced with closed-form
// elements; every arm is then required to hold ≥ 1 photon. Paths leaving the
// finite register are dropped. The signal register has signal_dim levels and
// carries the first arm too; the split-off arms have idler_dim levels.
struct HeraldPaths {
  focklab::Matrix rho;  // normalized conditioned signal state
  double p_success;     // weight of the triple coincidence
};
HeraldPaths herald_paths(double lambda, const std::array<double, 2>& split,
                         const std::array<focklab::Complex, 3>& betas,
                         int signal_dim, int idler_dim);

// Two-sample Kolmogorov–Smirnov statistic sup_x |F_a(x) − F_b(x)|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Number of 4-connected components of {(i,j) : w(i,j) < −threshold}.
int negative_regions(const Eigen::MatrixXd& w, double threshold);

}  // namespace oracle
