// states.hpp — State constructors: Fock, coherent, the 1&3 superposition,
// the approximate cubic-phase resource state, squeezing, two-mode squeezing.

#pragma once

#include "focklab/fock.hpp"

namespace focklab {

// |n⟩ at the given truncation.
StateVector fock(int n, Truncation t);

// Truncated coherent state, amplitudes ∝ αⁿ/√n!, renormalized. Warns through
// the warning channel if the truncated tail weight exceeds 1e−6.
StateVector coherent(Complex alpha, Truncation t);

// (√3|1⟩ + √2|3⟩)/√5, or with perp=true the orthogonal (√2|1⟩ − √3|3⟩)/√5.
StateVector one_and_three(Truncation t, bool perp = false);

// How to realize the cubic resource state.
enum class CubicMethod {
  analytic,   // closed-form amplitudes on |0⟩,|1⟩,|3⟩
  operator_,  // normalize((1 + iχx̂³)|0⟩) with x̂ built at the truncation
};

// Weak-nonlinearity resource state ∝ (1 + iχx̂³)|0⟩, normalized.
// Both methods agree to machine precision for nmax >= 3.
StateVector cubic_state(double chi, Truncation t,
                        CubicMethod method = CubicMethod::analytic);

// Squeezing with the sign convention var_x(squeeze(r)|0⟩) = e^{−2r}/2:
// squeeze(r) = exp[(r/2)(â² − â†²)] = exp[(ir/2)(x̂p̂ + p̂x̂)].
// The resource-state pre-factor (which stretches x) is squeeze(−r).
ModeOperator squeeze(double r, Truncation t);

// Nonlinearity bookkeeping: chi = chi0 · e^{3r} ties the effective strength
// to the bare strength and the pre-squeezing parameter.
struct CubicParams {
  double chi;
  double chi0;
  double r;

  CubicParams(double chi_in, double chi0_in, double r_in);
  static CubicParams from_chi(double chi);             // r = 0, chi0 = chi
  static CubicParams from_chi0(double chi0, double r); // chi derived
};

// Resource state at params.chi; with apply_prefactor the squeeze(−r)
// pre-factor is applied afterwards (off by default).
StateVector cubic_state(const CubicParams& params, Truncation t,
                        CubicMethod method = CubicMethod::analytic,
                        bool apply_prefactor = false);

// Two-mode squeezed vacuum ∝ Σ λⁿ|n,n⟩, renormalized at the truncation.
// Warns when λ^nmax >= 1e−3 (truncation sanity).
StateVector tmsv(double lambda, Truncation t);

}  // namespace focklab
