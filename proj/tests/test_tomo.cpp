// test_tomo.cpp — Homodyne sampling statistics, record round-trips, and the
// expectation-maximization reconstruction loop closed against known states.

#include <doctest.h>

#include <focklab/channels.hpp>
#include <focklab/characterize.hpp>
#include <focklab/fock.hpp>
#include <focklab/states.hpp>
#include <focklab/tomo.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace focklab;

namespace {

std::vector<double> phase_fan(int count) {
  std::vector<double> thetas;
  for (int k = 0; k < count; ++k)
    thetas.push_back(M_PI * k / static_cast<double>(count));
  return thetas;
}

std::vector<double> xs_at_phase(const QuadratureRecord& rec, double theta) {
  std::vector<double> xs;
  for (const QuadratureSample& s : rec.samples)
    if (s.theta == theta) xs.push_back(s.x);
  return xs;
}

DensityMatrix rotated_by(const DensityMatrix& rho, double delta) {
  const int d = rho.total_dim();
  Matrix out(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      out(m, n) = std::exp(Complex(0.0, delta * (m - n))) * rho.m(m, n);
  return DensityMatrix{rho.dims, std::move(out)};
}

}  // namespace

TEST_SUITE("tomo") {
  TEST_CASE("splitmix64 reproduces the reference stream") {
    std::uint64_t state = 0;
    CHECK(splitmix64(state) == 0xE220A8397B1DCDAFull);
    // Derived seeds differ across indices and repeat across calls.
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 3) == derive_seed(42, 3));
  }

  TEST_CASE("vacuum samples carry the vacuum mean and variance") {
    const Truncation t(10);
    const int n = 100000;
    const QuadratureRecord rec = sample(to_density(fock(0, t)), {0.0}, n, 7);
    REQUIRE(rec.samples.size() == static_cast<std::size_t>(n));
    double mean = 0.0;
    for (const QuadratureSample& s : rec.samples) mean += s.x;
    mean /= n;
    double var = 0.0;
    for (const QuadratureSample& s : rec.samples) var += (s.x - mean) * (s.x - mean);
    var /= n;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 0.5) < 0.05 * 0.5);
  }

  TEST_CASE("single photon shows the central dip") {
    const Truncation t(10);
    const int n = 20000;
    const auto frac_near_zero = [&](const DensityMatrix& rho) {
      const QuadratureRecord rec = sample(rho, {0.0}, n, 11);
      int hits = 0;
      for (const QuadratureSample& s : rec.samples)
        if (std::abs(s.x) < 0.3) ++hits;
      return static_cast<double>(hits) / n;
    };
    CHECK(frac_near_zero(to_density(fock(1, t))) <
          0.7 * frac_near_zero(to_density(fock(0, t))));
  }

  TEST_CASE("phase-insensitive states sample identically across phases") {
    const Truncation t(10);
    const DensityMatrix rho = loss(to_density(fock(1, t)), LossParam(0.6));
    const int n = 10000;
    const QuadratureRecord rec = sample(rho, {0.3, 1.1}, n, 5);
    const double d = oracle::ks_statistic(xs_at_phase(rec, 0.3), xs_at_phase(rec, 1.1));
    CHECK(d < 1.358 * std::sqrt(2.0 / n));
  }

  TEST_CASE("sampling is deterministic and accepts phases beyond pi") {
    const Truncation t(6);
    const DensityMatrix rho = to_density(coherent(0.4, t));
    const QuadratureRecord a = sample(rho, {0.0, 4.0}, 500, 99);
    const QuadratureRecord b = sample(rho, {0.0, 4.0}, 500, 99);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].theta == b.samples[i].theta);
      CHECK(a.samples[i].x == b.samples[i].x);
    }
  }

  TEST_CASE("record CSV round-trips byte for byte") {
    const Truncation t(6);
    const QuadratureRecord rec = sample(to_density(coherent(0.5, t)), {0.0, 0.7}, 50, 3);
    std::stringstream first;
    save_record_csv(rec, first);
    std::stringstream input(first.str());
    const QuadratureRecord back = load_record_csv(input);
    std::stringstream second;
    save_record_csv(back, second);
    CHECK(first.str() == second.str());
    REQUIRE(back.samples.size() == rec.samples.size());
  }

  TEST_CASE("record CSV loader reports problems precisely") {
    std::stringstream empty("");
    CHECK_THROWS_AS(load_record_csv(empty), io_error);

    std::stringstream bad_header("x,theta\n0.1,0.2\n");
    CHECK_THROWS_AS(load_record_csv(bad_header), io_error);

    std::stringstream bad_row("theta,x\n0.1,0.2\nnot-a-number,0.3\n");
    bool threw = false;
    try {
      load_record_csv(bad_row);
    } catch (const io_error& e) {
      threw = true;
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK(threw);
  }

  TEST_CASE("reconstruction preconditions") {
    const Truncation t(6);
    const DensityMatrix rho = to_density(fock(0, t));
    CHECK_THROWS_AS(reconstruct(sample(rho, phase_fan(6), 100, 1), TomoConfig{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(reconstruct(sample(rho, {0.0, 0.5}, 1000, 1), TomoConfig{}),
                    std::invalid_argument);
    TomoConfig bad;
    bad.bin_width = 0.0;
    CHECK_THROWS_AS(reconstruct(sample(rho, phase_fan(6), 200, 1), bad),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample(rho, {}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample(tensor(rho, rho), {0.0}, 10, 1), std::invalid_argument);
  }

  TEST_CASE("closed loop on vacuum converges with a monotone likelihood") {
    const Truncation t(10);
    const QuadratureRecord rec = sample(to_density(fock(0, t)), phase_fan(12), 3000, 21);
    const TomoResult res = reconstruct_full(rec, TomoConfig{});
    CHECK(fidelity(res.rho, fock(0, t)) >= 0.99);
    CHECK(res.converged);
    CHECK(res.iterations >= 1);
    for (std::size_t i = 1; i < res.loglik.size(); ++i)
      CHECK(res.loglik[i] >= res.loglik[i - 1]);
  }

  TEST_CASE("closed loop recovers the odd-photon weight of a lossy state") {
    const Truncation t(10);
    const DensityMatrix truth = loss(to_density(cubic_state(0.090, t)), LossParam(0.8));
    const QuadratureRecord rec = sample(truth, phase_fan(12), 5000, 13);
    TomoConfig cfg;
    cfg.max_iters = 800;
    cfg.tol = 1e-9;
    const DensityMatrix est = reconstruct(rec, cfg);
    const std::vector<double> pt = photon_probs(truth);
    const std::vector<double> pe = photon_probs(est);
    CHECK(std::abs((pe[1] + pe[3]) - (pt[1] + pt[3])) < 0.02);
  }

  TEST_CASE("relabeling every phase rotates the reconstruction") {
    const Truncation t(10);
    const double delta = 0.4;
    const DensityMatrix truth = to_density(cubic_state(0.090, t));
    const QuadratureRecord rec = sample(truth, phase_fan(12), 4000, 17);
    TomoConfig cfg;
    cfg.max_iters = 800;
    cfg.tol = 1e-9;
    const DensityMatrix base = reconstruct(rec, cfg);

    QuadratureRecord relabeled = rec;
    for (QuadratureSample& s : relabeled.samples) s.theta += delta;
    const DensityMatrix shifted = reconstruct(relabeled, cfg);
    CHECK(fidelity(shifted, rotated_by(base, delta)) >= 0.99);
  }

  TEST_CASE("more samples do not hurt the reconstruction") {
    const Truncation t(10);
    const DensityMatrix truth = to_density(cubic_state(0.090, t));
    TomoConfig cfg;
    cfg.max_iters = 600;
    cfg.tol = 1e-9;
    std::vector<double> small_f, big_f;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const QuadratureRecord small = sample(truth, phase_fan(12), 834, seed);
      const QuadratureRecord big = sample(truth, phase_fan(12), 16667, seed);
      small_f.push_back(fidelity(reconstruct(small, cfg), truth));
      big_f.push_back(fidelity(reconstruct(big, cfg), truth));
    }
    std::sort(small_f.begin(), small_f.end());
    std::sort(big_f.begin(), big_f.end());
    CHECK(big_f[2] >= small_f[2]);
    CHECK(big_f[2] >= 0.98);
  }
}
