#include "teq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "teq/numerics.hpp"
#include "teq/turbo.hpp"

namespace teq::analysis {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kSigmaMax = 60.0;

// log2(1 + e^t), stable both directions.
double log2_1p_exp(double t) {
  if (t > 0.0) return (t + std::log1p(std::exp(-t))) / kLn2;
  return std::log1p(std::exp(t)) / kLn2;
}

}  // namespace

double j_function(double sigma) {
  if (sigma <= 0.0) return 0.0;
  if (sigma >= kSigmaMax) return 1.0;
  // Simpson over +/- 12 sigma around the conditional mean.
  const double mu = 0.5 * sigma * sigma;
  const int n = 2000;  // intervals (even)
  const double a = mu - 12.0 * sigma;
  const double b = mu + 12.0 * sigma;
  const double h = (b - a) / n;
  const double inv = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  auto f = [&](double l) {
    const double z = (l - mu) / sigma;
    return inv * std::exp(-0.5 * z * z) * log2_1p_exp(-l);
  };
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  const double loss = acc * h / 3.0;
  return std::clamp(1.0 - loss, 0.0, 1.0);
}

double j_inverse(double mi) {
  if (mi <= 0.0) return 0.0;
  if (mi >= 1.0) return kSigmaMax;
  double lo = 0.0, hi = kSigmaMax;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (j_function(mid) < mi ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double mi_from_llrs(const VecD& llrs, const Bits& bits) {
  if (llrs.size() != bits.size()) throw LengthMismatch("mi_from_llrs: stream sizes differ");
  if (llrs.empty()) return 0.0;
  double loss = 0.0;
  for (size_t i = 0; i < llrs.size(); ++i)
    loss += log2_1p_exp(-(1.0 - 2.0 * bits[i]) * llrs[i]);
  return std::clamp(1.0 - loss / static_cast<double>(llrs.size()), 0.0, 1.0);
}

VecD generate_prior_llrs(double ia, const Bits& bits, Rng& rng) {
  VecD out(bits.size(), 0.0);
  if (ia <= 0.0) return out;
  if (ia >= 1.0) {
    for (size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] ? -kLlrClip : kLlrClip;
    return out;
  }
  const double sigma = j_inverse(ia);
  const double mu = 0.5 * sigma * sigma;
  for (size_t i = 0; i < bits.size(); ++i) {
    const double s = bits[i] ? -1.0 : 1.0;
    out[i] = clip_llr(s * mu + sigma * rng.next_gauss());
  }
  return out;
}

std::vector<ExitPoint> exit_curve(const DetectorSetup& s, const VecD& ia_grid) {
  if (s.constel == nullptr) throw ConfigInvalid("exit_curve: constellation not set");
  const auto& c = *s.constel;
  std::vector<ExitPoint> curve;
  curve.reserve(ia_grid.size());
  for (size_t pt = 0; pt < ia_grid.size(); ++pt) {
    const double ia = ia_grid[pt];
    double loss = 0.0;
    std::int64_t nbits = 0;
    for (int fidx = 0; fidx < s.frames; ++fidx) {
      Rng rng = Rng::for_frame(s.seed, pt, static_cast<std::uint64_t>(fidx));
      Bits bits(static_cast<size_t>(s.block_symbols) * c.q);
      for (auto& b : bits) b = rng.next_bit();
      const VecC x = txchain::map_bits(bits, c);
      const VecC y = txchain::apply_channel(x, s.ch, rng);
      const VecD la_flat = generate_prior_llrs(ia, bits, rng);
      const auto la = mapping::chunk_llrs(la_flat, c.q);

      equalizer::EqFrame fr;
      fr.y = &y;
      fr.ch = &s.ch;
      fr.constel = s.constel;
      fr.prior_llrs = &la;
      fr.win = s.win;
      const equalizer::EqResult res = equalizer::run_receiver(s.receiver, fr, s.sched);

      for (int k = 0; k < s.block_symbols; ++k)
        for (int j = 0; j < c.q; ++j) {
          const double lt = (1.0 - 2.0 * bits[static_cast<size_t>(k) * c.q + j]) * res.ext_llrs[k][j];
          loss += log2_1p_exp(-lt);
          ++nbits;
        }
    }
    const double ie = std::clamp(1.0 - loss / static_cast<double>(nbits), 0.0, 1.0);
    curve.push_back({ia, ie});
  }
  return curve;
}

double achievable_rate(const std::vector<ExitPoint>& curve, int q) {
  if (curve.size() < 2) throw ConfigInvalid("achievable_rate: need at least two curve points");
  double area = 0.0;
  for (size_t i = 1; i < curve.size(); ++i) {
    const double dia = curve[i].ia - curve[i - 1].ia;
    if (dia < 0.0) throw ConfigInvalid("achievable_rate: grid must be ascending");
    area += 0.5 * dia * (curve[i].ie + curve[i - 1].ie);
  }
  return q * area;
}

std::vector<ExitPoint> mi_trajectory(const TrajectorySetup& s) {
  turbo::TurboConfig cfg;
  cfg.constel = s.det.constel;
  cfg.ch = s.det.ch;
  cfg.win = s.det.win;
  cfg.receiver = s.det.receiver;
  cfg.kb = s.kb;
  cfg.g_fb = s.g_fb;
  cfg.g_ff = s.g_ff;
  cfg.turbo_iters = s.turbo_iters;
  cfg.self_iters = {s.det.sched.self_iters};
  cfg.betas = {s.det.sched.beta};

  const int iters = s.turbo_iters + 1;
  VecD loss_a(iters, 0.0), loss_e(iters, 0.0);
  std::int64_t nbits = 0;
  for (int fidx = 0; fidx < s.det.frames; ++fidx) {
    Rng rng = Rng::for_frame(s.det.seed, 0, static_cast<std::uint64_t>(fidx));
    const turbo::FrameRun run = turbo::run_turbo_frame(cfg, rng);
    for (int t = 0; t < iters; ++t) {
      const auto& rec = run.iters[t];
      for (size_t i = 0; i < run.coded_il.size(); ++i) {
        if (run.pad_mask[i]) continue;
        const double sgn = 1.0 - 2.0 * run.coded_il[i];
        loss_a[t] += log2_1p_exp(-sgn * rec.prior_flat[i]);
        loss_e[t] += log2_1p_exp(-sgn * rec.ext_flat[i]);
        if (t == 0) ++nbits;
      }
    }
  }
  std::vector<ExitPoint> traj(iters);
  for (int t = 0; t < iters; ++t) {
    traj[t].ia = std::clamp(1.0 - loss_a[t] / static_cast<double>(nbits), 0.0, 1.0);
    traj[t].ie = std::clamp(1.0 - loss_e[t] / static_cast<double>(nbits), 0.0, 1.0);
  }
  return traj;
}

SnrGainReport snr_gain(const txchain::ChannelModel& ch, const equalizer::WindowConfig& win,
                       double va, double vc, double noise_var) {
  if (!(noise_var > 0.0)) throw ConfigInvalid("snr_gain: noise variance must be positive");
  if (va < 0.0 || vc < 0.0) throw ConfigInvalid("snr_gain: negative variance");
  const int L = ch.L;
  const int npp = win.Np + L - 1;
  const int W = npp + win.Nd + 1;
  const int K = W + 8;  // a handful of fully interior positions

  auto avg_xi = [&](bool dfe) {
    double acc = 0.0;
    int cnt = 0;
    for (int k = npp; k + win.Nd < K; ++k) {
      numerics::WindowedCovSpec sp;
      sp.H = txchain::window_channel(ch, K, k, win.Np, win.Nd);
      sp.noise = noise_var;
      sp.var.assign(W, va);
      if (dfe)
        for (int j = 0; j < npp; ++j) sp.var[j] = vc;
      const numerics::CholFactor f = numerics::chol_init(sp);
      VecC h(win.N(), cplx(0.0));
      for (int i = std::max(0, npp - L + 1); i <= std::min(win.N() - 1, npp); ++i)
        h[i] = sp.H(i, npp);
      const VecC sol = numerics::chol_solve(f, h);
      double xi = 0.0;
      for (int i = 0; i < win.N(); ++i) xi += std::real(std::conj(h[i]) * sol[i]);
      acc += xi;
      ++cnt;
    }
    return acc / cnt;
  };

  SnrGainReport rep;
  rep.xi_le = avg_xi(false);
  rep.xi_dfe = avg_xi(true);
  rep.gain = (rep.xi_dfe / rep.xi_le) * (1.0 - va * rep.xi_le) / (1.0 - va * rep.xi_dfe);
  return rep;
}

}  // namespace teq::analysis
