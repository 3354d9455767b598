// states.cpp — State constructors.

#include "focklab/states.hpp"

#include <cmath>
#include <sstream>

namespace focklab {

namespace {

void require_nmax(const Truncation& t, int need, const char* who) {
  if (t.nmax < need) {
    std::ostringstream os;
    os << who << ": needs nmax >= " << need << ", got " << t.nmax;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

StateVector fock(int n, Truncation t) {
  if (n < 0 || n > t.nmax)
    throw std::invalid_argument("fock: n outside [0, nmax]");
  StateVector psi = StateVector::zero({t.dim()});
  psi.amps(n) = 1.0;
  return psi;
}

StateVector coherent(Complex alpha, Truncation t) {
  const int d = t.dim();
  Vector amps(d);
  // aₙ = αⁿ/√n! before renormalization; exact tail weight from the
  // untruncated normalization e^{−|α|²} Σ |α|^{2n}/n!.
  Complex term = 1.0;
  double captured = 0.0;
  const double a2 = std::norm(alpha);
  double pn = std::exp(-a2);
  for (int n = 0; n < d; ++n) {
    amps(n) = term;
    captured += pn;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
    pn *= a2 / static_cast<double>(n + 1);
  }
  const double lost = 1.0 - captured;
  if (lost > 1e-6) {
    std::ostringstream os;
    os << "coherent: truncated tail weight " << lost << " at nmax=" << t.nmax;
    warn(os.str());
  }
  StateVector psi({d}, std::move(amps));
  return psi.normalize();
}

StateVector one_and_three(Truncation t, bool perp) {
  require_nmax(t, 3, "one_and_three");
  StateVector psi = StateVector::zero({t.dim()});
  const double s5 = std::sqrt(5.0);
  if (!perp) {
    psi.amps(1) = std::sqrt(3.0) / s5;
    psi.amps(3) = std::sqrt(2.0) / s5;
  } else {
    psi.amps(1) = std::sqrt(2.0) / s5;
    psi.amps(3) = -std::sqrt(3.0) / s5;
  }
  return psi;
}

StateVector cubic_state(double chi, Truncation t, CubicMethod method) {
  require_nmax(t, 3, "cubic_state");
  if (method == CubicMethod::analytic) {
    // (1 + iχx̂³)|0⟩ = |0⟩ + iχ·(√15/(2√2))·(√3|1⟩ + √2|3⟩)/√5, normalized.
    StateVector psi = StateVector::zero({t.dim()});
    const Complex c = Complex(0.0, chi) * std::sqrt(15.0) / (2.0 * std::sqrt(2.0));
    const StateVector mix = one_and_three(t);
    psi.amps(0) = 1.0;
    psi.amps += c * mix.amps;
    return psi.normalize();
  }
  const ModeOperator x = quadrature(t, Quad::x);
  const Matrix x3 = x.m * x.m * x.m;
  StateVector psi = fock(0, t);
  psi.amps = psi.amps + Complex(0.0, chi) * (x3 * psi.amps);
  return psi.normalize();
}

ModeOperator squeeze(double r, Truncation t) {
  // exp[(r/2)(â² − â†²)]: var_x of squeeze(r)|0⟩ is e^{−2r}/2.
  const Matrix a = destroy(t).m;
  const Matrix g = 0.5 * r * (a * a - (a * a).adjoint());
  return {{t.dim()}, expm_antihermitian(g), "S"};
}

CubicParams::CubicParams(double chi_in, double chi0_in, double r_in)
    : chi(chi_in), chi0(chi0_in), r(r_in) {
  if (std::abs(chi - chi0 * std::exp(3.0 * r)) > 1e-12 * (1.0 + std::abs(chi)))
    throw std::invalid_argument("CubicParams: chi != chi0 * e^{3r}");
}

CubicParams CubicParams::from_chi(double chi) { return {chi, chi, 0.0}; }

CubicParams CubicParams::from_chi0(double chi0, double r) {
  return {chi0 * std::exp(3.0 * r), chi0, r};
}

StateVector cubic_state(const CubicParams& params, Truncation t, CubicMethod method,
                        bool apply_prefactor) {
  StateVector psi = cubic_state(params.chi, t, method);
  if (apply_prefactor && params.r != 0.0) {
    // The pre-factor stretches x (undoes the e^{3r} boost of χ): squeeze(−r).
    psi = apply(squeeze(-params.r, t), psi);
    psi.normalize();
  }
  return psi;
}

StateVector tmsv(double lambda, Truncation t) {
  if (lambda < 0.0 || lambda >= 1.0)
    throw std::invalid_argument("tmsv: lambda must lie in [0, 1)");
  if (std::pow(lambda, t.nmax) >= 1e-3) {
    std::ostringstream os;
    os << "tmsv: lambda^nmax = " << std::pow(lambda, t.nmax)
       << " >= 1e-3; truncation may bite";
    warn(os.str());
  }
  const int d = t.dim();
  StateVector psi = StateVector::zero({d, d});
  double term = 1.0;
  for (int n = 0; n < d; ++n) {
    psi.amps(n * d + n) = term;
    term *= lambda;
  }
  return psi.normalize();
}

}  // namespace focklab
