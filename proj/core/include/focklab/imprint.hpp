// imprint.hpp — Measurement-induced nonlinearity: mix the input with an
// ancilla on a balanced beamsplitter, post-select the ancilla port on x = 0.
//
// The surviving wavefunction fuses as ψ_out(x) ∝ ψ_in(x/√2) ψ_anc(x/√2);
// the √2 stretch is a pure coordinate rescale. Moments reported by sweep()
// are raw (post-stretch); divide mean_x by √2 and multiply mean_p by √2 to
// read them in the unstretched coordinate.

#pragma once

#include "focklab/fock.hpp"

#include <vector>

namespace focklab {

// Renormalized conditional state plus the relative weight of the x = 0
// post-selection (Tr of the unnormalized output; the sharp quadrature
// projection makes weights meaningful only relative to one another).
struct ImprintResult {
  DensityMatrix rho;
  double weight;
};

// Input and ancilla must be single-mode states of equal dimension.
// Throws numeric_error if the projection annihilates the state.
ImprintResult imprint(const DensityMatrix& rho_in, const DensityMatrix& rho_ancilla);

// One row per probe amplitude α (coherent input), raw output moments.
struct MomentPoint {
  double alpha;
  double mean_x;
  double mean_p;
  double weight;
};

struct MomentCurve {
  std::vector<MomentPoint> points;
};

// Probe the ancilla with coherent states of real amplitude α ∈ [0, 1.2]
// (strictly increasing). Coherent probes are built at the ancilla truncation.
MomentCurve sweep(const std::vector<double>& alphas, const DensityMatrix& rho_ancilla);

// Least-squares fit mean_p = c0 + c1·mean_x + c2·mean_x² over the curve.
// Needs >= 4 points; throws numeric_error on rank deficiency.
struct QuadFit {
  double c0;
  double c1;
  double c2;
  double rms;  // root-mean-square residual
};

QuadFit quad_fit(const MomentCurve& curve);

}  // namespace focklab
