// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line
// with its measured margin; the process exits nonzero if any check fails.
// Tolerances are fixed here, not configurable.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "equalizer_oracle.hpp"
#include "oracles.hpp"
#include "teq/analysis.hpp"
#include "teq/decoder.hpp"
#include "teq/equalizer.hpp"
#include "teq/harness.hpp"
#include "teq/mapping.hpp"
#include "teq/numerics.hpp"
#include "teq/rng.hpp"
#include "teq/txchain.hpp"

#ifndef ACCEPT_CONFIG_DIR
#define ACCEPT_CONFIG_DIR "configs"
#endif

namespace {

using namespace teq;
using oracles::OracleFrame;
using oracles::OracleOut;
using oracles::OPol;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Sliding/rank-1 Cholesky filters vs dense refactorization.

numerics::WindowedCovSpec random_band_spec(Rng& rng, int n, int band) {
  numerics::WindowedCovSpec sp;
  const int w = n + band - 1;
  sp.H = MatC(n, w);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < i + band; ++j) sp.H(i, j) = rng.next_cgauss(1.0);
  sp.var.resize(w);
  for (auto& v : sp.var) v = 0.05 + rng.next_unit();
  sp.noise = 0.4;
  return sp;
}

numerics::WindowedCovSpec shift_spec(Rng& rng, const numerics::WindowedCovSpec& sp, int band) {
  numerics::WindowedCovSpec out;
  const int n = sp.H.rows;
  const int w = sp.H.cols;
  out.H = MatC(n, w);
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j + 1 < w; ++j) out.H(i, j) = sp.H(i + 1, j + 1);
  for (int j = n - 1; j < n - 1 + band; ++j) out.H(n - 1, j) = rng.next_cgauss(1.0);
  out.var.assign(sp.var.begin() + 1, sp.var.end());
  out.var.push_back(0.05 + rng.next_unit());
  out.noise = sp.noise;
  return out;
}

Outcome check_sliding_cholesky() {
  const int n = 32, band = 6;
  const int steps = 1200;
  Rng rng(411);

  auto spec = random_band_spec(rng, n, band);
  auto fac = numerics::chol_init(spec);
  const int target = spec.H.cols / 2;

  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int s = 0; s < steps; ++s) {
    auto next = shift_spec(rng, spec, band);
    numerics::chol_slide_le_inplace(fac, spec, next);
    spec = std::move(next);

    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.H.cols)));
    const double nv = 0.05 + 1.15 * rng.next_unit();
    VecC col(n);
    for (int i = 0; i < n; ++i) col[i] = spec.H(i, j);
    numerics::chol_rank1_dfe_inplace(fac, spec.var[j], nv, col);
    spec.var[j] = nv;

    VecC h(n);
    for (int i = 0; i < n; ++i) h[i] = spec.H(i, target);
    const VecC sol_b = numerics::chol_solve(fac, h);
    const VecC sol_d = oracles::dense_solve(spec, h);
    double xi_b = 0.0, xi_d = 0.0;
    for (int i = 0; i < n; ++i) {
      xi_b += std::real(std::conj(h[i]) * sol_b[i]);
      xi_d += std::real(std::conj(h[i]) * sol_d[i]);
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num = std::max(num, std::abs(sol_b[i] / xi_b - sol_d[i] / xi_d));
      den = std::max(den, std::abs(sol_d[i] / xi_d));
    }
    worst = std::max(worst, num / std::max(den, 1e-30));
    worst = std::max(worst, std::abs(xi_b - xi_d) / xi_d);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-8 && secs < 10.0,
          fmt("%d steps, worst filter error %.2e, %.1f s", steps, worst, secs)};
}

// ---------------------------------------------------------------------------
// 2. Every receiver variant vs the dense straight-line reference.

struct TwinErr {
  double fir = 0.0;
  double post = 0.0;
  double ext = 0.0;
  int neg_mismatch = 0;

  void fold(const equalizer::EqResult& got, const OracleOut& want, int q, int M) {
    for (size_t k = 0; k < want.fir.size(); ++k) {
      fir = std::max(fir, std::abs(got.fir[k].xe - want.fir[k].xe) /
                              std::max(1.0, std::abs(want.fir[k].xe)));
      fir = std::max(fir,
                     std::abs(got.fir[k].ve - want.fir[k].ve) / std::max(1.0, want.fir[k].ve));
      for (int m = 0; m < M; ++m)
        post = std::max(post, std::abs(got.post[k][m] - want.post[k][m]));
      for (int j = 0; j < q; ++j)
        ext = std::max(ext, std::abs(got.ext_llrs[k][j] - want.ext[k][j]));
    }
    if (got.neg_var.size() != want.neg.size())
      ++neg_mismatch;
    else
      for (size_t i = 0; i < want.neg.size(); ++i)
        if (got.neg_var[i] != want.neg[i]) ++neg_mismatch;
  }
};

Outcome check_receiver_twins() {
  const char* names[] = {"bpsk", "qpsk", "8psk", "16qam"};
  Rng rng(20260816);
  TwinErr err;

  const auto t0 = std::chrono::steady_clock::now();
  for (int fi = 0; fi < 100; ++fi) {
    const auto& c = mapping::constellation(names[fi % 4]);
    const int L = 1 + static_cast<int>(rng.next_below(5));
    const int K = 8 + static_cast<int>(rng.next_below(57));
    const int Np = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(L) + 2));
    const int Nd = static_cast<int>(rng.next_below(2 * static_cast<std::uint64_t>(L) + 1));
    const double noise = 0.25 + 0.5 * rng.next_unit();

    const OracleFrame o = oracles::random_frame(rng, K, L, Np, Nd, noise, c);
    const txchain::ChannelModel ch = oracles::model_of(o);
    equalizer::EqFrame fr;
    fr.y = &o.y;
    fr.ch = &ch;
    fr.constel = &c;
    fr.prior_llrs = &o.la;
    fr.win = {Np, Nd};

    err.fold(equalizer::run_le_ic(fr), oracles::oracle_si_le(o, 0, 0.0), c.q, c.M);
    err.fold(equalizer::run_si_le_ic(fr, {2, 0.4}), oracles::oracle_si_le(o, 2, 0.4), c.q, c.M);
    err.fold(equalizer::run_dfe_ic_ep(fr, {0, 0.0}), oracles::oracle_dfe(o, OPol::Ep, 0, 0.0),
             c.q, c.M);
    err.fold(equalizer::run_dfe_ic_ep(fr, {2, 0.3}), oracles::oracle_dfe(o, OPol::Ep, 2, 0.3),
             c.q, c.M);
    err.fold(equalizer::run_dfe_ic_app(fr), oracles::oracle_dfe(o, OPol::App, 0, 0.0), c.q, c.M);
    err.fold(equalizer::run_dfe_ic_papp(fr), oracles::oracle_dfe(o, OPol::Papp, 0, 0.0), c.q,
             c.M);
    err.fold(equalizer::run_dfe_ic_happ(fr), oracles::oracle_dfe(o, OPol::Happ, 0, 0.0), c.q,
             c.M);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = err.fir <= 1e-9 && err.post <= 1e-9 && err.ext <= 1e-7 &&
                  err.neg_mismatch == 0 && secs < 60.0;
  return {ok, fmt("100 frames x 7 receivers, worst fir %.2e, pmf %.2e, llr %.2e, %.1f s",
                  err.fir, err.post, err.ext, secs)};
}

// ---------------------------------------------------------------------------
// 3. Trellis decoder vs exhaustive codeword marginalization.

Outcome check_decoder_brute_force() {
  const auto trellis = decoder::make_trellis(7, 5);
  Rng rng(77);
  double worst = 0.0;
  int info_mismatch = 0;

  for (int t = 0; t < 100; ++t) {
    const int kb = 2 + static_cast<int>(rng.next_below(11));
    const int n = 2 * (kb + trellis.memory);
    VecD llrs(n);
    for (auto& l : llrs) l = 6.0 * rng.next_gauss();

    const auto got = decoder::bcjr_decode(llrs, trellis);
    const auto want = oracles::bcjr_reference(llrs, 7, 5);
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(got.extrinsic[j] - want.extrinsic[j]));
    for (int i = 0; i < kb; ++i)
      if (got.info[i] != want.info[i]) ++info_mismatch;
  }
  return {worst <= 1e-6 && info_mismatch == 0,
          fmt("100 blocks, worst extrinsic gap %.2e, %d decision mismatches", worst,
              info_mismatch)};
}

// ---------------------------------------------------------------------------
// 4. Uncoded BPSK over AWGN vs the closed-form error rate.

Outcome check_awgn_closed_form() {
  const auto cfg = harness::parse_config(R"({
    "receiver": "le-ic",
    "constellation": "bpsk",
    "channel": "awgn",
    "coded": false,
    "kb": 256,
    "ebn0_db": [6.0],
    "turbo_iters": 0,
    "stop": {"min_frames": 2000, "min_frame_errors": 1000000000, "max_frames": 2000},
    "seed": 7
  })");
  const auto rows = harness::run_ber_campaign(cfg);
  const double ber = rows.at(0).ber;

  const double esn0 = std::pow(10.0, 0.6);
  const double p = 0.5 * std::erfc(std::sqrt(2.0 * esn0) / std::sqrt(2.0));
  const double n_bits = 2000.0 * 256.0;
  const double se = std::sqrt(p * (1.0 - p) / n_bits);
  const double dev = std::abs(ber - p) / se;
  return {p >= 1e-4 && dev <= 3.0,
          fmt("ber %.3e vs theory %.3e (%.2f standard errors)", ber, p, dev)};
}

// ---------------------------------------------------------------------------
// 5. Coded BER ordering at 7 dB and the waterfall threshold gap.

harness::BerRow final_iter_row(const std::string& receiver, double ebn0, long frames) {
  auto cfg = harness::parse_config(R"({
    "constellation": "bpsk",
    "channel": "proakis-c",
    "kb": 2048,
    "generators": [7, 5],
    "turbo_iters": 7,
    "seed": 1,
    "threads": 1
  })");
  cfg.receiver = receiver;
  cfg.ebn0_db = {ebn0};
  cfg.stop = {frames, 1000000000L, frames};
  const auto rows = harness::run_ber_campaign(cfg);
  return rows.back();
}

double bler_threshold(const std::string& receiver, long frames) {
  for (double e = 4.5; e <= 7.01; e += 0.25)
    if (final_iter_row(receiver, e, frames).bler <= 0.1) return e;
  return 7.25;
}

Outcome check_coded_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  const long frames = 200;

  const double ep = final_iter_row("dfe-ic-ep", 7.0, frames).ber;
  const double app = final_iter_row("dfe-ic-app", 7.0, frames).ber;
  const double le = final_iter_row("le-ic", 7.0, frames).ber;
  const double mfb = final_iter_row("mfb", 7.0, frames).ber;

  const double thr_ep = bler_threshold("dfe-ic-ep", frames);
  const double thr_app = bler_threshold("dfe-ic-app", frames);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const bool order_ok = ep <= app && app <= le;
  // Counting allowance so a handful of residual bit errors against a clean
  // genie run cannot flip the verdict.
  const bool mfb_ok = ep <= 2.0 * mfb + 5.0 / (static_cast<double>(frames) * 2048.0);
  const bool gap_ok = thr_app - thr_ep >= 0.25;
  return {order_ok && mfb_ok && gap_ok && secs <= 1800.0,
          fmt("7 dB ber ep %.1e / app %.1e / le %.1e / mfb %.1e; thresholds ep %.2f, app %.2f dB; "
              "%.0f s",
              ep, app, le, mfb, thr_ep, thr_app, secs)};
}

// ---------------------------------------------------------------------------
// 6. Transfer-curve dominance of decision feedback over linear IC.

Outcome check_exit_dominance() {
  const auto cfg = harness::parse_config(R"({
    "receivers": ["le-ic", "dfe-ic-app"],
    "constellation": "bpsk",
    "channel": "proakis-c",
    "ebn0_db": [7.0],
    "exit_frames": 2000,
    "block_symbols": 256,
    "seed": 1
  })");
  const auto rows = harness::run_exit_curves(cfg);
  if (rows.size() != 22) return {false, fmt("expected 22 rows, got %zu", rows.size())};

  double worst_gap = 1.0;
  for (int i = 0; i < 11; ++i) {
    const double le = rows[i].ie;
    const double app = rows[11 + i].ie;
    worst_gap = std::min(worst_gap, app - le);
  }
  return {worst_gap >= -0.01, fmt("11 grid points, min(dfe - le) = %+.4f", worst_gap)};
}

// ---------------------------------------------------------------------------
// 7. Decision-feedback SNR gain: sign law and direct variance ratio.

Outcome check_snr_gain_law() {
  const auto ch = txchain::channel_preset("proakis-c");
  const equalizer::WindowConfig win{6, 10};

  int violations = 0, tested = 0;
  for (const double noise : {0.1, 0.5, 1.0})
    for (int i = 1; i <= 20; ++i)
      for (int j = 1; j <= 20; ++j) {
        const double va = i / 20.0, vc = j / 20.0;
        const auto g = analysis::snr_gain(ch, win, va, vc, noise);
        if (std::abs(g.xi_dfe - g.xi_le) < 1e-12) continue;
        ++tested;
        if ((g.gain >= 1.0) != (g.xi_dfe >= g.xi_le)) ++violations;
      }

  // Direct check: average the per-position extrinsic variance of dense
  // window solves over a long frame and compare the LE/DFE ratio with the
  // closed-form gain. kw = 1 matches the plain-noise diagonal convention.
  const double va = 0.5, vc = 0.1;
  double worst_rel = 0.0;
  for (const double noise : {0.1, 0.5, 1.0}) {
    OracleFrame o;
    o.taps = ch.taps[0];
    o.K = 400;
    o.Np = win.Np;
    o.Nd = win.Nd;
    o.noise_var = noise;
    o.c = &mapping::constellation("qpsk");
    const oracles::OracleCtx ctx(o);

    double sum_le = 0.0, sum_dfe = 0.0;
    for (int k = 0; k < o.K; ++k) {
      const Eigen::MatrixXcd H = ctx.window(k);
      Eigen::VectorXd vle = Eigen::VectorXd::Zero(ctx.W);
      Eigen::VectorXd vdfe = Eigen::VectorXd::Zero(ctx.W);
      for (int j = 0; j < ctx.W; ++j) {
        const int sy = k - ctx.Npp + j;
        if (sy < 0 || sy >= o.K) continue;
        vle(j) = va;
        vdfe(j) = j < ctx.Npp ? vc : va;
      }
      Eigen::VectorXcd f;
      double xi = 0.0;
      ctx.filter(H, vle, f, xi);
      sum_le += 1.0 / xi - va;
      ctx.filter(H, vdfe, f, xi);
      sum_dfe += 1.0 / xi - va;
    }
    const double ratio = sum_le / sum_dfe;
    const double gain = analysis::snr_gain(ch, win, va, vc, noise).gain;
    worst_rel = std::max(worst_rel, std::abs(gain - ratio) / ratio);
  }
  return {violations == 0 && worst_rel <= 0.02,
          fmt("%d grid points, %d sign violations; gain vs measured ratio off by %.2f%%", tested,
              violations, 100.0 * worst_rel)};
}

// ---------------------------------------------------------------------------
// 8. Analytic complexity ratios.

Outcome check_complexity_ratios() {
  using numerics::flop_count;
  using numerics::FlopReceiver;
  const int K = 2048, M = 2;

  double worst_lech = 0.0;
  for (const int L : {10, 16, 32, 64}) {
    const int N = 3 * L + 2;
    const double r = flop_count(FlopReceiver::LeIcChol, L, N, M, K) /
                     flop_count(FlopReceiver::LeIcTuchler, L, N, M, K);
    worst_lech = std::max(worst_lech, r);
  }

  double worst_dfe = 0.0;
  for (const int L : {64, 128}) {
    const int N = 3 * L + 2;
    const double r = flop_count(FlopReceiver::DfeIcChol, L, N, M, K) /
                     flop_count(FlopReceiver::LeIcChol, L, N, M, K);
    worst_dfe = std::max(worst_dfe, r);
  }
  return {worst_lech <= 0.7 && worst_dfe <= 1.10,
          fmt("factorized/baseline <= %.3f, feedback overhead <= %.3f", worst_lech, worst_dfe)};
}

// ---------------------------------------------------------------------------
// 9. Shipped campaign configs parse and the overnight run is complete.

Outcome check_repro_configs() {
  const std::string dir = ACCEPT_CONFIG_DIR;
  const auto wf = harness::load_config(dir + "/waterfall-overnight.json");
  (void)harness::load_config(dir + "/exit-7db.json");
  (void)harness::load_config(dir + "/quick-check.json");

  const bool ok = wf.receiver == "dfe-ic-ep" && wf.constellation == "bpsk" &&
                  wf.channel_name == "proakis-c" && wf.kb == 2048 && wf.turbo_iters == 7 &&
                  wf.ebn0_db.size() >= 20 && wf.ebn0_db.front() == 0.0 &&
                  wf.ebn0_db.back() == 7.0 && wf.stop.max_frames >= 100000;
  return {ok, fmt("waterfall sweep %zu points, up to %ld frames/point", wf.ebn0_db.size(),
                  wf.stop.max_frames)};
}

}  // namespace

int main() {
  struct Check {
    const char* name;
    std::function<Outcome()> fn;
  };
  const Check checks[] = {
      {"sliding/rank-1 factor filters vs dense solves", check_sliding_cholesky},
      {"receiver variants vs dense reference", check_receiver_twins},
      {"trellis decoder vs exhaustive marginalization", check_decoder_brute_force},
      {"uncoded AWGN error rate vs closed form", check_awgn_closed_form},
      {"coded 7 dB ordering and threshold gap", check_coded_ordering},
      {"transfer-curve dominance of decision feedback", check_exit_dominance},
      {"SNR-gain sign law and variance ratio", check_snr_gain_law},
      {"complexity ratios", check_complexity_ratios},
      {"shipped campaign configs", check_repro_configs},
  };

  bool all = true;
  int idx = 0;
  for (const auto& c : checks) {
    ++idx;
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%d/9] %-48s %s  (%s)\n", idx, c.name, out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    std::fflush(stdout);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
