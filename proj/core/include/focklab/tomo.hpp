// tomo.hpp — Homodyne simulation and maximum-likelihood reconstruction.
//
// A homodyne record is a list of (θ, x) pairs: quadrature x̂_θ sampled at
// local-oscillator phase θ. Sampling draws from pr(x|θ) = ⟨x;θ|ρ|x;θ⟩ by
// inverse-CDF on a fixed grid; reconstruction runs the expectation-
// maximization iteration ρ ← N[R(ρ) ρ R(ρ)] over binned projectors.

#pragma once

#include "focklab/fock.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace focklab {

struct QuadratureSample {
  double theta;  // radians
  double x;
};

struct QuadratureRecord {
  std::vector<QuadratureSample> samples;
};

// CSV round-trip, header "theta,x", 9 significant digits. Loading reports the
// first malformed row by line number (io_error).
void save_record_csv(const QuadratureRecord& rec, std::ostream& out);
QuadratureRecord load_record_csv(std::istream& in);

// Draw n_per_phase samples at every phase. Each phase owns an independent
// generator seeded by (seed, phase index), so a parallel map over phases
// would produce the identical record; identical seeds give identical records
// down to the last bit. Grid: [−6, 6] at step 0.005.
QuadratureRecord sample(const DensityMatrix& rho, const std::vector<double>& thetas,
                        int n_per_phase, std::uint64_t seed);

struct TomoConfig {
  int nmax = 10;            // reconstruction-space cutoff
  double bin_width = 0.05;  // histogram bin for the projectors
  int max_iters = 2000;
  double tol = 1e-10;       // stop when the log-likelihood gain drops below
};

struct TomoResult {
  DensityMatrix rho;
  std::vector<double> loglik;  // per-iteration log-likelihood (monotone)
  int iterations = 0;
  bool converged = false;
};

// Needs >= 1e3 samples over >= 6 distinct phases. Throws numeric_error if the
// likelihood ever decreases (numerical breakdown; message carries the
// iteration count).
TomoResult reconstruct_full(const QuadratureRecord& rec, const TomoConfig& cfg);
DensityMatrix reconstruct(const QuadratureRecord& rec, const TomoConfig& cfg);

// ------------------------------ seeding helpers -----------------------------

// splitmix64 step; used to derive independent per-phase seeds.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace focklab
