// Transmitter and channel: recursive systematic convolutional encoding with
// termination, seeded random interleaving, bit-to-symbol mapping, and
// propagation through an L-tap (optionally time-varying) filter with complex
// AWGN. Also builds the sliding observation-window channel matrices the
// equalizer consumes.
#ifndef TEQ_TXCHAIN_HPP
#define TEQ_TXCHAIN_HPP

#include <string>
#include <vector>

#include "teq/common.hpp"
#include "teq/mapping.hpp"
#include "teq/rng.hpp"

namespace teq::txchain {

struct ChannelModel {
  // One tap vector for a static channel, or one per received sample
  // (K + L - 1 of them) when time_varying is set.
  std::vector<VecC> taps;
  int L = 0;
  double noise_var = 0.0;
  bool time_varying = false;

  const VecC& taps_at(int obs) const { return taps[time_varying ? obs : 0]; }
};

// "proakis-c" = [1,2,3,2,1]/sqrt(19), "awgn" = [1]. Noise variance is left at
// zero; callers set it from the operating point.
ChannelModel channel_preset(const std::string& name);

// Plain-text tap file: one "re im" pair per line, blank lines and lines
// starting with '#' skipped.
ChannelModel load_taps(const std::string& path);

// Terminated RSC encoder, rate 1/2, output interleaved [d0 p0 d1 p1 ...].
// Generators are octal with the highest bit as the D^0 coefficient; the
// feedback word g_fb also fixes the memory order. Tail inputs equal the
// feedback value so the final state is zero; tail pairs are part of the
// output.
Bits rsc_encode(const Bits& info, int g_fb = 7, int g_ff = 5);

struct Interleaver {
  std::vector<int> perm;
};

Interleaver make_interleaver(int n, Rng& rng);

template <class V>
V interleave(const V& in, const Interleaver& ilv) {
  if (in.size() != ilv.perm.size()) throw LengthMismatch("interleave: size != permutation");
  V out(in.size());
  for (size_t i = 0; i < in.size(); ++i) out[i] = in[ilv.perm[i]];
  return out;
}

template <class V>
V deinterleave(const V& in, const Interleaver& ilv) {
  if (in.size() != ilv.perm.size()) throw LengthMismatch("deinterleave: size != permutation");
  V out(in.size());
  for (size_t i = 0; i < in.size(); ++i) out[ilv.perm[i]] = in[i];
  return out;
}

// Groups of q bits, MSB first, to constellation points.
VecC map_bits(const Bits& bits, const mapping::Constellation& c);

// y_o = sum_l h_{o,l} x_{o-l} + w_o for o in [0, K+L-1), symbols outside the
// block treated as zero. Noise is circularly symmetric with total variance
// noise_var.
VecC apply_channel(const VecC& x, const ChannelModel& ch, Rng& rng);

// N x (Np' + Nd + 1) sub-block of the full convolution matrix centered on
// symbol k, with Np' = Np + L - 1: rows are observations k-Np .. k+Nd,
// columns symbols k-Np' .. k+Nd. Entries referencing observations or symbols
// outside the block are zero. K is the transmitted block length.
MatC window_channel(const ChannelModel& ch, int K, int k, int Np, int Nd);

}  // namespace teq::txchain

#endif
