#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "teq/analysis.hpp"
#include "teq/mapping.hpp"
#include "teq/rng.hpp"
#include "teq/txchain.hpp"

using namespace teq;

TEST_CASE("j_function: limits, monotonicity, and a Monte-Carlo cross-check") {
  CHECK(analysis::j_function(0.0) == doctest::Approx(0.0));
  CHECK(analysis::j_function(1e-6) < 1e-6);
  CHECK(analysis::j_function(100.0) == doctest::Approx(1.0).epsilon(1e-9));

  double prev = 0.0;
  for (double s = 0.25; s <= 8.0; s += 0.25) {
    const double cur = analysis::j_function(s);
    CHECK(cur > prev);
    prev = cur;
  }

  // Independent estimate of the same integral: sample L ~ N(sigma^2/2,
  // sigma^2) for the zero bit and average 1 - log2(1 + exp(-L)).
  Rng rng(7);
  for (const double sigma : {1.0, 2.0, 3.0}) {
    double acc = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double l = 0.5 * sigma * sigma + sigma * rng.next_gauss();
      acc += 1.0 - std::log2(1.0 + std::exp(-l));
    }
    CHECK(analysis::j_function(sigma) == doctest::Approx(acc / n).epsilon(0.004));
  }
}

TEST_CASE("j_inverse inverts j_function across the open interval") {
  for (double mi = 0.02; mi < 0.99; mi += 0.04) {
    const double s = analysis::j_inverse(mi);
    CHECK(analysis::j_function(s) == doctest::Approx(mi).epsilon(1e-4));
  }
  CHECK(analysis::j_inverse(0.0) == doctest::Approx(0.0));
}

TEST_CASE("mi_from_llrs: pinned values and clamping") {
  CHECK(analysis::mi_from_llrs({}, {}) == doctest::Approx(0.0));
  CHECK(analysis::mi_from_llrs({0.0, 0.0}, {0, 1}) == doctest::Approx(0.0));

  // Single correct LLR of ln 3: 1 - log2(4/3).
  CHECK(analysis::mi_from_llrs({std::log(3.0)}, {0}) ==
        doctest::Approx(1.0 - std::log2(4.0 / 3.0)).epsilon(1e-12));
  CHECK(analysis::mi_from_llrs({-std::log(3.0)}, {1}) ==
        doctest::Approx(1.0 - std::log2(4.0 / 3.0)).epsilon(1e-12));

  // Confidently right saturates near 1; confidently wrong clamps at 0.
  CHECK(analysis::mi_from_llrs({kLlrClip, -kLlrClip}, {0, 1}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(analysis::mi_from_llrs({-kLlrClip}, {0}) == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)analysis::mi_from_llrs(VecD(3, 0.0), Bits(2, 0)), LengthMismatch);
}

TEST_CASE("generate_prior_llrs: endpoints and measured information content") {
  Rng rng(17);
  Bits bits(200000);
  for (auto& b : bits) b = rng.next_bit();

  const VecD zero = analysis::generate_prior_llrs(0.0, bits, rng);
  for (size_t i = 0; i < 100; ++i) CHECK(zero[i] == 0.0);

  const VecD full = analysis::generate_prior_llrs(1.0, bits, rng);
  for (size_t i = 0; i < 200; ++i) CHECK(full[i] == (bits[i] ? -kLlrClip : kLlrClip));

  for (const double ia : {0.3, 0.5, 0.8}) {
    const VecD la = analysis::generate_prior_llrs(ia, bits, rng);
    for (size_t i = 0; i < 500; ++i) CHECK(std::abs(la[i]) <= kLlrClip);
    CHECK(analysis::mi_from_llrs(la, bits) == doctest::Approx(ia).epsilon(0.02));
  }
}

TEST_CASE("exit_curve: single-tap channel reproduces the J function") {
  // Without ISI the equalizer hands the demapper y with variance kw*noise,
  // independent of the prior, so the BPSK transfer curve is flat at
  // J(sqrt(8/noise)).
  analysis::DetectorSetup s;
  s.receiver = "le-ic";
  s.ch = txchain::channel_preset("awgn");
  s.ch.noise_var = 0.8;
  s.constel = &mapping::constellation("bpsk");
  s.win = equalizer::WindowConfig::defaults(1);
  s.block_symbols = 256;
  s.frames = 60;
  s.seed = 5;

  const VecD grid = {0.0, 0.5, 0.9};
  const auto curve = analysis::exit_curve(s, grid);
  REQUIRE(curve.size() == 3);
  const double want = analysis::j_function(std::sqrt(8.0 / 0.8));
  for (size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve[i].ia == grid[i]);
    CHECK(curve[i].ie == doctest::Approx(want).epsilon(0.02));
  }
}

TEST_CASE("exit_curve: decision feedback dominates linear IC on an ISI channel") {
  analysis::DetectorSetup s;
  s.ch = txchain::channel_preset("proakis-c");
  s.ch.noise_var = 0.2;
  s.constel = &mapping::constellation("bpsk");
  s.win = equalizer::WindowConfig::defaults(5);
  s.block_symbols = 128;
  s.frames = 30;
  s.seed = 11;

  const VecD grid = {0.0, 0.5, 1.0};
  s.receiver = "le-ic";
  const auto le = analysis::exit_curve(s, grid);
  s.receiver = "dfe-ic-app";
  const auto dfe = analysis::exit_curve(s, grid);

  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(le[i].ie > 0.0);
    CHECK(le[i].ie <= 1.0);
    // Paired noise through the shared seed keeps this comparison tight.
    CHECK(dfe[i].ie >= le[i].ie - 0.01);
  }
  // Priors help: the curve rises.
  CHECK(le[2].ie > le[0].ie);
  // With perfect priors both cancel all interference and meet.
  CHECK(dfe[2].ie == doctest::Approx(le[2].ie).epsilon(0.01));
}

TEST_CASE("achievable_rate: hand trapezoid and validation") {
  const std::vector<analysis::ExitPoint> curve = {{0.0, 0.2}, {0.5, 0.4}, {1.0, 0.8}};
  CHECK(analysis::achievable_rate(curve, 2) == doctest::Approx(0.9).epsilon(1e-12));

  const std::vector<analysis::ExitPoint> flat = {{0.0, 1.0}, {1.0, 1.0}};
  CHECK(analysis::achievable_rate(flat, 3) == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)analysis::achievable_rate({{0.0, 0.5}}, 1), ConfigInvalid);
  const std::vector<analysis::ExitPoint> bad = {{0.5, 0.1}, {0.0, 0.2}};
  CHECK_THROWS_AS((void)analysis::achievable_rate(bad, 1), ConfigInvalid);
}

TEST_CASE("mi_trajectory: converging run at a comfortable operating point") {
  analysis::TrajectorySetup s;
  s.det.receiver = "dfe-ic-ep";
  s.det.ch = txchain::channel_preset("proakis-c");
  // Eb/N0 = 7 dB at rate 1/2 BPSK.
  s.det.ch.noise_var = 1.0 / (0.5 * std::pow(10.0, 0.7));
  s.det.constel = &mapping::constellation("bpsk");
  s.det.win = equalizer::WindowConfig::defaults(5);
  s.det.frames = 10;
  s.det.seed = 21;
  s.kb = 512;
  s.turbo_iters = 4;

  const auto traj = analysis::mi_trajectory(s);
  REQUIRE(traj.size() == 5);
  CHECK(traj[0].ia == doctest::Approx(0.0));
  for (const auto& pt : traj) {
    CHECK(pt.ia >= 0.0);
    CHECK(pt.ia <= 1.0);
    CHECK(pt.ie >= 0.0);
    CHECK(pt.ie <= 1.0);
  }
  // The decoder feeds back ever-better priors as the loop converges.
  for (size_t t = 1; t < traj.size(); ++t) CHECK(traj[t].ia >= traj[t - 1].ia - 1e-9);
  CHECK(traj.back().ia > 0.9);
  CHECK(traj.back().ie > traj.front().ie);
}

TEST_CASE("snr_gain: fixed points, dominance, and a dense cross-check") {
  const auto ch = txchain::channel_preset("proakis-c");
  const equalizer::WindowConfig win{6, 10};

  SUBCASE("equal variances give unit gain") {
    const auto rep = analysis::snr_gain(ch, win, 0.4, 0.4, 0.5);
    CHECK(rep.gain == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.xi_dfe == doctest::Approx(rep.xi_le).epsilon(1e-12));
  }

  SUBCASE("vanishing anti-causal uncertainty erases the advantage") {
    const auto rep = analysis::snr_gain(ch, win, 1e-9, 5e-10, 0.5);
    CHECK(rep.gain == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("better causal knowledge never hurts, worse never helps") {
    const auto lo = analysis::snr_gain(ch, win, 0.5, 0.1, 0.5);
    CHECK(lo.gain > 1.0);
    CHECK(lo.xi_dfe > lo.xi_le);
    const auto hi = analysis::snr_gain(ch, win, 0.5, 0.9, 0.5);
    CHECK(hi.gain < 1.0);
    CHECK(hi.xi_dfe < hi.xi_le);
  }

  SUBCASE("matches a dense interior computation") {
    // All interior windows of a time-invariant channel are identical, so one
    // dense solve per layout reproduces the averaged precisions exactly.
    const int L = ch.L;
    const int Npp = win.Np + L - 1;
    const int N = win.N(), W = Npp + win.Nd + 1;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N, W);
    for (int i = 0; i < N; ++i)
      for (int d = 0; d < L; ++d) H(i, i + d) = ch.taps[0][L - 1 - d];

    const double va = 0.5, vc = 0.1, noise = 0.5;
    auto xi_of = [&](bool dfe) {
      Eigen::VectorXd var(W);
      for (int j = 0; j < W; ++j) var(j) = (dfe && j < Npp) ? vc : va;
      Eigen::MatrixXcd sig = H * var.asDiagonal() * H.adjoint();
      sig += noise * Eigen::MatrixXcd::Identity(N, N);
      const Eigen::VectorXcd h = H.col(Npp);
      return std::real(h.dot(Eigen::VectorXcd(sig.ldlt().solve(h))));
    };
    const double xl = xi_of(false), xd = xi_of(true);
    const auto rep = analysis::snr_gain(ch, win, va, vc, noise);
    CHECK(rep.xi_le == doctest::Approx(xl).epsilon(1e-9));
    CHECK(rep.xi_dfe == doctest::Approx(xd).epsilon(1e-9));
    CHECK(rep.gain == doctest::Approx((1.0 / xl - va) / (1.0 / xd - va)).epsilon(1e-9));
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS((void)analysis::snr_gain(ch, win, 0.5, 0.1, 0.0), ConfigInvalid);
    CHECK_THROWS_AS((void)analysis::snr_gain(ch, win, -0.1, 0.1, 0.5), ConfigInvalid);
  }
}

TEST_CASE("exit_curve: identical seeds give identical curves") {
  analysis::DetectorSetup s;
  s.receiver = "dfe-ic-ep";
  s.ch = txchain::channel_preset("proakis-c");
  s.ch.noise_var = 0.3;
  s.constel = &mapping::constellation("qpsk");
  s.win = equalizer::WindowConfig::defaults(5);
  s.block_symbols = 64;
  s.frames = 5;
  s.seed = 33;
  const VecD grid = {0.2, 0.7};
  const auto a = analysis::exit_curve(s, grid);
  const auto b = analysis::exit_curve(s, grid);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].ie == b[i].ie);
}
