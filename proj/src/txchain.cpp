#include "teq/txchain.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace teq::txchain {

ChannelModel channel_preset(const std::string& name) {
  ChannelModel ch;
  if (name == "proakis-c") {
    const double s = 1.0 / std::sqrt(19.0);
    ch.taps = {{cplx(1 * s), cplx(2 * s), cplx(3 * s), cplx(2 * s), cplx(1 * s)}};
    ch.L = 5;
    return ch;
  }
  if (name == "awgn") {
    ch.taps = {{cplx(1.0)}};
    ch.L = 1;
    return ch;
  }
  throw ConfigInvalid("unknown channel preset: " + name);
}

ChannelModel load_taps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open tap file: " + path);
  VecC taps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double re = 0.0, im = 0.0;
    if (!(ss >> re >> im))
      throw ConfigInvalid("tap file " + path + " line " + std::to_string(lineno) +
                          ": expected \"re im\"");
    taps.emplace_back(re, im);
  }
  if (taps.empty()) throw ConfigInvalid("tap file " + path + " has no taps");
  ChannelModel ch;
  ch.L = static_cast<int>(taps.size());
  ch.taps = {std::move(taps)};
  return ch;
}

Bits rsc_encode(const Bits& info, int g_fb, int g_ff) {
  if (g_fb < 2) throw ConfigInvalid("rsc_encode: feedback generator must have memory");
  const int nu = std::bit_width(static_cast<unsigned>(g_fb)) - 1;
  const int mask = (1 << nu) - 1;
  if (g_ff <= 0 || g_ff > ((1 << (nu + 1)) - 1))
    throw ConfigInvalid("rsc_encode: feedforward generator out of range");
  const int fb_taps = g_fb & mask;
  const int ff_taps = g_ff & mask;
  const int ff_d0 = (g_ff >> nu) & 1;

  Bits out;
  out.reserve(2 * (info.size() + nu));
  int state = 0;
  auto step = [&](int d) {
    const int a = d ^ (std::popcount(static_cast<unsigned>(state & fb_taps)) & 1);
    const int p = (ff_d0 & a) ^ (std::popcount(static_cast<unsigned>(state & ff_taps)) & 1);
    out.push_back(static_cast<std::uint8_t>(d));
    out.push_back(static_cast<std::uint8_t>(p));
    state = (a << (nu - 1)) | (state >> 1);
  };
  for (std::uint8_t d : info) step(d & 1);
  for (int t = 0; t < nu; ++t)
    step(std::popcount(static_cast<unsigned>(state & fb_taps)) & 1);
  return out;
}

Interleaver make_interleaver(int n, Rng& rng) {
  Interleaver ilv;
  ilv.perm.resize(n);
  for (int i = 0; i < n; ++i) ilv.perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(i) + 1));
    std::swap(ilv.perm[i], ilv.perm[j]);
  }
  return ilv;
}

VecC map_bits(const Bits& bits, const mapping::Constellation& c) {
  if (bits.size() % c.q != 0) throw LengthMismatch("map_bits: length not a multiple of q");
  VecC x(bits.size() / c.q);
  for (size_t k = 0; k < x.size(); ++k) {
    int label = 0;
    for (int j = 0; j < c.q; ++j) label = (label << 1) | (bits[k * c.q + j] & 1);
    x[k] = c.points[label];
  }
  return x;
}

VecC apply_channel(const VecC& x, const ChannelModel& ch, Rng& rng) {
  const int K = static_cast<int>(x.size());
  const int n_obs = K + ch.L - 1;
  if (ch.time_varying && static_cast<int>(ch.taps.size()) < n_obs)
    throw DimensionMismatch("apply_channel: time-varying model needs one tap vector per sample");
  VecC y(n_obs);
  for (int o = 0; o < n_obs; ++o) {
    const VecC& h = ch.taps_at(o);
    if (static_cast<int>(h.size()) != ch.L)
      throw DimensionMismatch("apply_channel: tap vector length != L");
    cplx acc = 0.0;
    const int l_lo = std::max(0, o - K + 1);
    const int l_hi = std::min(ch.L - 1, o);
    for (int l = l_lo; l <= l_hi; ++l) acc += h[l] * x[o - l];
    if (ch.noise_var > 0.0) acc += rng.next_cgauss(ch.noise_var);
    y[o] = acc;
  }
  return y;
}

MatC window_channel(const ChannelModel& ch, int K, int k, int Np, int Nd) {
  if (Np < 0 || Nd < 0 || K <= 0 || k < 0 || k >= K)
    throw DimensionMismatch("window_channel: bad window placement");
  if (ch.time_varying && static_cast<int>(ch.taps.size()) < K + ch.L - 1)
    throw DimensionMismatch("window_channel: time-varying model needs one tap vector per sample");
  const int npp = Np + ch.L - 1;
  const int N = Np + Nd + 1;
  const int W = npp + Nd + 1;
  MatC H(N, W);
  for (int i = 0; i < N; ++i) {
    const int o = k - Np + i;
    if (o < 0 || o > K + ch.L - 2) continue;
    const VecC& h = ch.taps_at(o);
    for (int j = 0; j < W; ++j) {
      const int s = k - npp + j;
      if (s < 0 || s >= K) continue;
      const int l = o - s;
      if (l >= 0 && l < ch.L) H(i, j) = h[l];
    }
  }
  return H;
}

}  // namespace teq::txchain
