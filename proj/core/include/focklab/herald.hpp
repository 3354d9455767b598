// herald.hpp — Conditional state preparation: two-mode squeezed vacuum, the
// idler split three ways, each arm displaced and watched by an on/off
// detector; a triple click heralds the signal state.
//
// Register layout: mode 0 = signal, mode 1 = idler arm (carried at the signal
// truncation so it can transport up to nmax_signal photons into the split),
// modes 2 and 3 = split-off arms at the idler truncation.

#pragma once

#include "focklab/fock.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace focklab {

struct HeraldConfig {
  double lambda = 0.1;                     // TMSV parameter, 0 <= λ < 1
  std::array<double, 2> split{0.0, 0.0};   // mixer angles: (1,2) then (1,3)
  std::array<Complex, 3> betas{};          // displacement per idler arm
  Truncation signal{5};
  Truncation idler{2};

  // Angles asin(1/√3), π/4: each idler arm receives exactly one third.
  static HeraldConfig balanced(double lambda, Truncation signal, Truncation idler);
};

// JSON round-trip; schema documented in the README (keys: lambda, split,
// betas as [re, im] pairs, signal_nmax, idler_nmax).
HeraldConfig load_herald_config(std::istream& in);
void save_herald_config(const HeraldConfig& cfg, std::ostream& out);

struct HeraldResult {
  DensityMatrix rho_signal;
  double p_success;
};

// Build TMSV on (0,1), mix (1,2) then (1,3), displace arms 1..3 by betas,
// condition on Π = 1 − |0⟩⟨0| firing at all three arms, trace the arms out.
// Throws numeric_error if p_success < 1e−15.
HeraldResult herald(const HeraldConfig& cfg);

struct HeraldOptions {
  int starts = 8;          // multi-start count for the simplex search
  int max_iters = 400;     // simplex iterations per start
  double radius = 0.5;     // initial scatter of β components
  std::uint64_t seed = 1;  // start-placement seed (deterministic)
};

struct HeraldOptimum {
  HeraldConfig config;   // base config with the winning betas
  double fidelity;       // to the target
  double p_success;
};

// Maximize fidelity(herald(cfg).rho_signal, target) over the three complex
// betas (six real parameters) by multi-start Nelder–Mead. target must be a
// normalized single-mode state supported on span{|0⟩..|3⟩}. Deterministic for
// a fixed seed. Throws numeric_error when every start stays below fidelity
// 0.5 (message carries the best candidate).
HeraldOptimum optimize_betas(const StateVector& target, const HeraldConfig& base,
                             const HeraldOptions& options = {});

}  // namespace focklab
