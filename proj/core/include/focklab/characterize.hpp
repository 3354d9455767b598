// characterize.hpp — State diagnostics: Hermite functions, Wigner function,
// coordinate-representation kernel, purity witness R, moments, fits, fidelity.

#pragma once

#include "focklab/fock.hpp"

#include <vector>

namespace focklab {

// ------------------------------ wavefunctions -------------------------------

// Normalized Hermite function ψ_n(x) = (2ⁿ n! √π)^{−1/2} H_n(x) e^{−x²/2},
// evaluated by the stable three-term recurrence. ψ_0(0) = π^{−1/4}.
double hermite_fn(int n, double x);

// ψ_0(x) .. ψ_nmax(x) in one sweep of the recurrence.
std::vector<double> hermite_all(int nmax, double x);

// ------------------------------ Wigner function -----------------------------

// w(i, j) = W(xs[i], ps[j]); normalized so that ∬ W dx dp = 1
// (vacuum peaks at W(0,0) = 1/π).
struct WignerGrid {
  std::vector<double> xs;
  std::vector<double> ps;
  Eigen::MatrixXd w;
};

// Displaced-parity evaluation: W(x,p) = (1/π) Tr[ρ D(β) Π D(β)†] with
// β = (x + ip)/√2, computed per grid point through scaled Laguerre
// recurrences along the diagonals of ρ (no FFT, no quadrature).
WignerGrid wigner(const DensityMatrix& rho, const std::vector<double>& xs,
                  const std::vector<double>& ps);

// The library's standard phase-space grid: [−5, 5] at step 0.05 on each axis.
std::vector<double> default_grid();

// ------------------------------ coordinate kernel ---------------------------

// k(i, j) = ρ(xs[i], xs[j]) = Σ_{mn} ρ_{mn} ψ_m(xs[i]) ψ_n(xs[j]);
// vacuum gives π^{−1/2} e^{−(x²+x′²)/2}, and ∫ ρ(x,x) dx = 1.
struct CoordKernel {
  std::vector<double> xs;
  Matrix k;
};

CoordKernel coord_kernel(const DensityMatrix& rho, const std::vector<double>& xs);

// Im ρ(x, −x) sampled on xs — the witness of the cubic phase imprint
// (≡ 0 for any state with real amplitudes).
std::vector<double> antidiag_im(const DensityMatrix& rho,
                                const std::vector<double>& xs);

// ------------------------------ scalar witnesses ----------------------------

// R_{0,Φ}(ρ) = |⟨0|ρ|Φ⟩|² / (⟨0|ρ|0⟩⟨Φ|ρ|Φ⟩): 1 for a pure superposition of
// |0⟩ and Φ, 0 for their statistical mixture. Φ must be single-mode,
// normalized and orthogonal to |0⟩. A vacuum population below 1e−12 is an
// error; ⟨Φ|ρ|Φ⟩ below 1e−12 returns 0 when the numerator vanishes with it
// (the probed coherence is absent) and is an error otherwise.
double r_metric(const DensityMatrix& rho, const StateVector& phi);

// Diagonal of ρ in the number basis.
std::vector<double> photon_probs(const DensityMatrix& rho);

struct Moments {
  double mean_x;
  double mean_p;
  double var_x;
  double var_p;
};

Moments moments(const DensityMatrix& rho);

// ------------------------------ displacement fit ----------------------------

// Best momentum compensation: scan + golden-section polish of Δp ∈ [−1, 1]
// minimizing the least-squares residual of Im ρ_Δp(x,−x) against the odd
// cubic model β·x³e^{−x²} (β free, closed-form per Δp), sampled on
// x ∈ [−3, 3] at step 0.02. Ties resolve to Δp = 0 (a featureless input
// stays put).
struct DisplacementFit {
  double delta_p;      // applied shift: rho_shifted = displace(ρ, iΔp/√2)
  double beta;         // fitted model amplitude at delta_p
  double residual;     // sum of squared deviations at the optimum
  DensityMatrix shifted;
};

DisplacementFit fit_displacement(const DensityMatrix& rho);

// ------------------------------ fidelity ------------------------------------

// Uhlmann fidelity F(ρ,σ) = (Tr √(√ρ σ √ρ))²; |⟨ψ|φ⟩|² for pure inputs.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity(const DensityMatrix& rho, const StateVector& psi);

}  // namespace focklab
