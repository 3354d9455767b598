// test_states.cpp — State constructors: amplitudes, moments, dual-route
// consistency of the weak-nonlinearity resource state, squeezing, pair source.

#include <doctest.h>

#include <focklab/channels.hpp>
#include <focklab/fock.hpp>
#include <focklab/states.hpp>

#include "support.hpp"

#include <cmath>
#include <cstdio>

using namespace focklab;

TEST_SUITE("states") {
  TEST_CASE("fock basis vectors") {
    const Truncation t(6);
    CHECK(std::abs(fock(0, t).amps(0) - 1.0) == 0.0);
    CHECK(std::abs(fock(3, t).amps(3) - 1.0) == 0.0);
    CHECK(std::abs(overlap(fock(2, t), fock(3, t))) == 0.0);
    CHECK_THROWS_AS(fock(7, t), std::invalid_argument);
    CHECK_THROWS_AS(fock(-1, t), std::invalid_argument);
  }

  TEST_CASE("coherent states: moments and truncation warning") {
    const Truncation t(20);
    testsupport::WarningCapture warnings;

    const StateVector zero = coherent(0.0, t);
    CHECK(std::abs(zero.amps(0) - 1.0) < 1e-15);

    const StateVector one = coherent(1.0, t);
    const double mean_x = expectation(one, quadrature(t, Quad::x)).real();
    CHECK(std::abs(mean_x - std::sqrt(2.0)) < 1e-6);

    const StateVector half = coherent(0.5, t);
    const double mean_n = expectation(half, number_op(t)).real();
    CHECK(std::abs(mean_n - 0.25) < 1e-6);
    CHECK(warnings.empty());

    coherent(3.0, Truncation(4));  // heavy tail must trip the warning channel
    CHECK(!warnings.empty());
  }

  TEST_CASE("the 1&3 superposition and its orthogonal partner") {
    const Truncation t(5);
    const StateVector s = one_and_three(t);
    CHECK(std::abs(s.amps(0)) == 0.0);
    CHECK(std::abs(s.amps(1) - std::sqrt(3.0 / 5.0)) < 1e-15);
    CHECK(std::abs(s.amps(2)) == 0.0);
    CHECK(std::abs(s.amps(3) - std::sqrt(2.0 / 5.0)) < 1e-15);
    CHECK(std::abs(s.norm() - 1.0) < 1e-15);

    const StateVector perp = one_and_three(t, true);
    CHECK(std::abs(overlap(s, perp)) < 1e-15);
    CHECK(std::abs(perp.norm() - 1.0) < 1e-15);
    CHECK_THROWS_AS(one_and_three(Truncation(2)), std::invalid_argument);
  }

  TEST_CASE("resource state: analytic and operator routes coincide") {
    const Truncation t(8);
    for (const double chi : {0.01, 0.090, 0.3}) {
      const StateVector a = cubic_state(chi, t, CubicMethod::analytic);
      const StateVector b = cubic_state(chi, t, CubicMethod::operator_);
      CHECK(std::abs(overlap(a, b)) >= 1.0 - 1e-12);
    }
  }

  TEST_CASE("resource state amplitudes and photon content") {
    const Truncation t(8);
    const double chi = 0.090;
    const double n2 = 1.0 + 15.0 * chi * chi / 8.0;

    const StateVector vacuum_limit = cubic_state(0.0, t);
    CHECK(std::abs(vacuum_limit.amps(0) - 1.0) < 1e-15);

    for (const CubicMethod method : {CubicMethod::analytic, CubicMethod::operator_}) {
      const StateVector psi = cubic_state(chi, t, method);
      // (1 + iχx³)|0> = |0> + iχ(3|1> + √6|3>)/(2√2), then normalized.
      CHECK(std::abs(psi.amps(0) - 1.0 / std::sqrt(n2)) < 1e-14);
      CHECK(std::abs(psi.amps(1) - Complex(0.0, chi * 3.0 / (2.0 * std::sqrt(2.0) * std::sqrt(n2)))) <
            1e-14);
      CHECK(std::abs(psi.amps(3) -
                     Complex(0.0, chi * std::sqrt(6.0) / (2.0 * std::sqrt(2.0) * std::sqrt(n2)))) <
            1e-14);

      // p2 = p4 = 0 exactly; p1/p3 = 3/2 for any chi > 0.
      CHECK(std::abs(psi.amps(2)) == 0.0);
      CHECK(std::abs(psi.amps(4)) == 0.0);
      const double p1 = std::norm(psi.amps(1)), p3 = std::norm(psi.amps(3));
      CHECK(std::abs(p1 / p3 - 1.5) < 1e-12);
    }
  }

  TEST_CASE("squeezer: identity at r=0, analytic variance, inverse pair") {
    const Truncation t(20);
    const ModeOperator s0 = squeeze(0.0, t);
    CHECK((s0.m - Matrix::Identity(t.dim(), t.dim())).cwiseAbs().maxCoeff() < 1e-14);

    const StateVector sq = apply(squeeze(0.5, t), fock(0, t));
    const ModeOperator x = quadrature(t, Quad::x);
    const ModeOperator x2{{t.dim()}, x.m * x.m, "x^2"};
    const double var = expectation(sq, x2).real() - std::pow(expectation(sq, x).real(), 2);
    CHECK(std::abs(var - std::exp(-1.0) / 2.0) < 1e-4);

    const Matrix both = squeeze(0.5, t).m * squeeze(-0.5, t).m;
    const int guard = 2;
    for (int m = 0; m < t.dim() - guard; ++m)
      for (int n = 0; n < t.dim() - guard; ++n)
        CHECK(std::abs(both(m, n) - (m == n ? 1.0 : 0.0)) < 1e-10);
    CHECK(is_unitary_guarded(squeeze(0.5, t)));
  }

  TEST_CASE("nonlinearity bookkeeping ties chi to chi0 and r") {
    const CubicParams direct = CubicParams::from_chi(0.090);
    CHECK(direct.chi == 0.090);
    CHECK(direct.r == 0.0);

    const CubicParams boosted = CubicParams::from_chi0(0.01, 0.5);
    CHECK(std::abs(boosted.chi - 0.01 * std::exp(1.5)) < 1e-14);
    CHECK_THROWS_AS(CubicParams(0.1, 0.1, 0.3), std::invalid_argument);

    const Truncation t(10);
    const StateVector plain = cubic_state(boosted, t);
    CHECK(std::abs(overlap(plain, cubic_state(boosted.chi, t))) >= 1.0 - 1e-14);

    // The optional pre-factor applies squeeze(−r) after the superposition.
    const StateVector pre = cubic_state(boosted, t, CubicMethod::analytic, true);
    StateVector expect = apply(squeeze(-boosted.r, t), cubic_state(boosted.chi, t));
    expect.normalize();
    CHECK(std::abs(overlap(pre, expect)) >= 1.0 - 1e-12);
  }

  TEST_CASE("two-mode squeezed vacuum") {
    const Truncation t(8);
    testsupport::WarningCapture warnings;

    const StateVector pairless = tmsv(0.0, t);
    CHECK(std::abs(pairless.amps(0) - 1.0) < 1e-15);

    const double lambda = 0.3;
    const StateVector pairs = tmsv(lambda, t);
    CHECK(warnings.empty());

    // Reduced state is thermal: diagonal (1−λ²)λ^{2n} up to truncation tail.
    const DensityMatrix red = partial_trace(to_density(pairs), {0});
    for (int n = 0; n <= t.nmax; ++n) {
      const double expect = (1.0 - lambda * lambda) * std::pow(lambda, 2.0 * n);
      CHECK(std::abs(red.m(n, n).real() - expect) < 1e-8);
    }

    // Symmetric occupation.
    const ModeOperator na = embed(number_op(t), 0, {t.dim(), t.dim()});
    const ModeOperator nb = embed(number_op(t), 1, {t.dim(), t.dim()});
    CHECK(std::abs(expectation(pairs, na) - expectation(pairs, nb)) < 1e-12);

    CHECK_THROWS_AS(tmsv(1.0, t), std::invalid_argument);
    CHECK_THROWS_AS(tmsv(-0.1, t), std::invalid_argument);

    tmsv(0.5, Truncation(9));  // 0.5^9 = 2e−3 >= 1e−3: truncation warning
    CHECK(!warnings.empty());
  }
}
