#include "teq/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace teq::decoder {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Exact Jacobian logarithm: ln(e^a + e^b).
inline double maxstar(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

Trellis make_trellis(int g_fb, int g_ff) {
  if (g_fb < 2) throw ConfigInvalid("make_trellis: feedback generator must have memory");
  const int nu = std::bit_width(static_cast<unsigned>(g_fb)) - 1;
  const int mask = (1 << nu) - 1;
  if (g_ff <= 0 || g_ff > ((1 << (nu + 1)) - 1))
    throw ConfigInvalid("make_trellis: feedforward generator out of range");
  const int fb_taps = g_fb & mask;
  const int ff_taps = g_ff & mask;
  const int ff_d0 = (g_ff >> nu) & 1;

  Trellis t;
  t.memory = nu;
  t.num_states = 1 << nu;
  t.next_state.resize(t.num_states);
  t.parity.resize(t.num_states);
  t.term_input.resize(t.num_states);
  for (int s = 0; s < t.num_states; ++s) {
    const int fb = std::popcount(static_cast<unsigned>(s & fb_taps)) & 1;
    t.term_input[s] = fb;
    for (int d = 0; d < 2; ++d) {
      const int a = d ^ fb;
      t.parity[s][d] = (ff_d0 & a) ^ (std::popcount(static_cast<unsigned>(s & ff_taps)) & 1);
      t.next_state[s][d] = (a << (nu - 1)) | (s >> 1);
    }
  }
  return t;
}

DecodeResult bcjr_decode(const VecD& coded_llrs, const Trellis& trellis) {
  if (coded_llrs.size() % 2 != 0)
    throw LengthMismatch("bcjr_decode: odd number of coded-bit LLRs");
  const int steps = static_cast<int>(coded_llrs.size()) / 2;
  const int kb = steps - trellis.memory;
  if (kb < 1) throw LengthMismatch("bcjr_decode: block shorter than the tail");
  const int S = trellis.num_states;

  VecD ld(steps), lp(steps);
  for (int t = 0; t < steps; ++t) {
    ld[t] = clip_llr(coded_llrs[2 * t]);
    lp[t] = clip_llr(coded_llrs[2 * t + 1]);
  }

  // alpha[t][s]: forward metric entering step t; beta likewise backward.
  std::vector<VecD> alpha(steps + 1, VecD(S, kNegInf));
  std::vector<VecD> beta(steps + 1, VecD(S, kNegInf));
  alpha[0][0] = 0.0;
  beta[steps][0] = 0.0;

  auto branch = [&](int t, int d, int p) { return -d * ld[t] - p * lp[t]; };
  auto input_allowed = [&](int t, int s, int d) {
    return t < kb || d == trellis.term_input[s];
  };

  for (int t = 0; t < steps; ++t) {
    double mx = kNegInf;
    for (int s = 0; s < S; ++s) {
      if (alpha[t][s] == kNegInf) continue;
      for (int d = 0; d < 2; ++d) {
        if (!input_allowed(t, s, d)) continue;
        const int ns = trellis.next_state[s][d];
        const double m = alpha[t][s] + branch(t, d, trellis.parity[s][d]);
        alpha[t + 1][ns] = maxstar(alpha[t + 1][ns], m);
      }
    }
    for (int s = 0; s < S; ++s) mx = std::max(mx, alpha[t + 1][s]);
    for (int s = 0; s < S; ++s)
      if (alpha[t + 1][s] != kNegInf) alpha[t + 1][s] -= mx;
  }

  for (int t = steps - 1; t >= 0; --t) {
    double mx = kNegInf;
    for (int s = 0; s < S; ++s) {
      for (int d = 0; d < 2; ++d) {
        if (!input_allowed(t, s, d)) continue;
        const int ns = trellis.next_state[s][d];
        if (beta[t + 1][ns] == kNegInf) continue;
        const double m = beta[t + 1][ns] + branch(t, d, trellis.parity[s][d]);
        beta[t][s] = maxstar(beta[t][s], m);
      }
    }
    for (int s = 0; s < S; ++s) mx = std::max(mx, beta[t][s]);
    for (int s = 0; s < S; ++s)
      if (beta[t][s] != kNegInf) beta[t][s] -= mx;
  }

  DecodeResult res;
  res.extrinsic.resize(coded_llrs.size());
  res.info.resize(kb);
  for (int t = 0; t < steps; ++t) {
    double sys[2] = {kNegInf, kNegInf};
    double par[2] = {kNegInf, kNegInf};
    for (int s = 0; s < S; ++s) {
      if (alpha[t][s] == kNegInf) continue;
      for (int d = 0; d < 2; ++d) {
        if (!input_allowed(t, s, d)) continue;
        const int ns = trellis.next_state[s][d];
        if (beta[t + 1][ns] == kNegInf) continue;
        const int p = trellis.parity[s][d];
        const double m = alpha[t][s] + branch(t, d, p) + beta[t + 1][ns];
        sys[d] = maxstar(sys[d], m);
        par[p] = maxstar(par[p], m);
      }
    }
    const double post_d = sys[0] - sys[1];
    const double post_p = par[0] - par[1];
    res.extrinsic[2 * t] = clip_llr(post_d - ld[t]);
    res.extrinsic[2 * t + 1] = clip_llr(post_p - lp[t]);
    if (t < kb) res.info[t] = post_d >= 0.0 ? 0 : 1;
  }
  return res;
}

}  // namespace teq::decoder
