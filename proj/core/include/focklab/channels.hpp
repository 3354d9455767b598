// channels.hpp — Completely positive maps and passive optics: virtual photon
// subtraction, loss, displacement, beamsplitters.

#pragma once

#include "focklab/fock.hpp"

#include <utility>

namespace focklab {

// Transmittance η ∈ [0, 1] of the loss channel.
struct LossParam {
  double eta;
  explicit LossParam(double eta_in);
};

// Result of virtual photon subtraction: the renormalized state and the
// relative weight Tr[â^k ρ â†^k] of the event.
struct Subtracted {
  DensityMatrix rho;
  double weight;
};

// ρ → â^k ρ â†^k / Tr[·], k ∈ {1, 2}. Exact matrix conjugation by the ladder
// operator; throws numeric_error when the weight falls below 1e−12
// (no photons to subtract).
Subtracted subtract(const DensityMatrix& rho, int k);

// Pure loss at transmittance η via the generalized amplitude-damping Kraus
// family A_k = Σ_n √C(n,k) η^{(n−k)/2} (1−η)^{k/2} |n−k⟩⟨n|. Trace preserving
// on the truncated space; loss(η₁)∘loss(η₂) = loss(η₁η₂).
DensityMatrix loss(const DensityMatrix& rho, LossParam p);

// D(β) = exp(βâ† − β*â) as a matrix at the given truncation.
ModeOperator displacement_operator(Complex beta, Truncation t);

// D(β) ρ D(β)†. A pure momentum shift by Δp uses β = iΔp/√2.
DensityMatrix displace(const DensityMatrix& rho, Complex beta);

// Two-mode mixer exp[θ(â_i†â_j − â_i â_j†)] embedded in a register with the
// given per-mode dimensions. θ = π/4 is balanced.
ModeOperator beamsplitter(double theta, std::pair<int, int> modes,
                          const std::vector<int>& dims);

}  // namespace focklab
