#include "teq/turbo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace teq::turbo {

namespace {

int memory_of(int g_fb) {
  if (g_fb < 2) throw ConfigInvalid("turbo: feedback generator must have memory");
  return std::bit_width(static_cast<unsigned>(g_fb)) - 1;
}

template <class T>
T at_or_last(const std::vector<T>& v, int i, T fallback) {
  if (v.empty()) return fallback;
  return v[std::min<size_t>(i, v.size() - 1)];
}

// Genie receiver: perfect interference cancellation leaves each symbol on an
// isolated matched-filter branch.
equalizer::EqResult run_mfb(const TurboConfig& cfg, const VecC& x, const VecC& genie_obs,
                            const VecD& genie_var, const std::vector<VecD>& la) {
  const auto& c = *cfg.constel;
  const int K = static_cast<int>(x.size());
  equalizer::EqResult res;
  res.fir.resize(K);
  res.post.resize(K);
  res.ext_llrs.resize(K);
  for (int k = 0; k < K; ++k) {
    res.fir[k] = {genie_obs[k], genie_var[k]};
    res.post[k] = mapping::posterior_pmf(mapping::prior_pmf(la[k], c),
                                         {genie_obs[k], genie_var[k]}, c);
    res.ext_llrs[k] = mapping::extrinsic_llrs(res.post[k], la[k], c);
  }
  return res;
}

}  // namespace

int frame_symbols(const TurboConfig& cfg) {
  const int q = cfg.constel->q;
  if (!cfg.coded) {
    if (cfg.kb % q != 0) throw ConfigInvalid("turbo: uncoded bit count must be a multiple of q");
    return cfg.kb / q;
  }
  const int kc = 2 * (cfg.kb + memory_of(cfg.g_fb));
  return (kc + q - 1) / q;
}

FrameRun run_turbo_frame(const TurboConfig& cfg, Rng& rng) {
  if (cfg.constel == nullptr) throw ConfigInvalid("turbo: constellation not set");
  if (cfg.kb < 1) throw ConfigInvalid("turbo: kb must be positive");
  if (cfg.turbo_iters < 0) throw ConfigInvalid("turbo: negative iteration count");
  if (!cfg.coded && cfg.turbo_iters != 0)
    throw ConfigInvalid("turbo: uncoded mode has no decoder to iterate with");
  const auto& c = *cfg.constel;
  const int q = c.q;
  const int K = frame_symbols(cfg);
  const int nbits = K * q;

  FrameRun run;
  run.pad_mask.assign(nbits, 0);

  int kc = 0;
  txchain::Interleaver ilv;
  if (cfg.coded) {
    run.info.resize(cfg.kb);
    for (auto& b : run.info) b = rng.next_bit();
    const Bits coded = txchain::rsc_encode(run.info, cfg.g_fb, cfg.g_ff);
    kc = static_cast<int>(coded.size());
    Bits padded = coded;
    padded.resize(nbits, 0);
    Bits padpos(nbits, 0);
    for (int i = kc; i < nbits; ++i) padpos[i] = 1;
    ilv = txchain::make_interleaver(nbits, rng);
    run.coded_il = txchain::interleave(padded, ilv);
    run.pad_mask = txchain::interleave(padpos, ilv);
  } else {
    run.info.resize(nbits);
    for (auto& b : run.info) b = rng.next_bit();
    run.coded_il = run.info;
  }

  const VecC x = txchain::map_bits(run.coded_il, c);
  const VecC y = txchain::apply_channel(x, cfg.ch, rng);

  const bool mfb = cfg.receiver == "mfb";
  VecC genie_obs;
  VecD genie_var;
  if (mfb) {
    genie_obs.resize(K);
    genie_var.resize(K);
    for (int k = 0; k < K; ++k) {
      double e = 0.0;
      for (int l = 0; l < cfg.ch.L; ++l) e += std::norm(cfg.ch.taps_at(k + l)[l]);
      genie_obs[k] = x[k] + rng.next_cgauss(cfg.ch.noise_var / e);
      genie_var[k] = c.kw * cfg.ch.noise_var / e;
    }
  }

  const decoder::Trellis trellis =
      cfg.coded ? decoder::make_trellis(cfg.g_fb, cfg.g_ff) : decoder::Trellis{};

  VecD prior_flat(nbits, 0.0);
  if (cfg.coded)
    for (int i = 0; i < nbits; ++i)
      if (run.pad_mask[i]) prior_flat[i] = kLlrClip;

  run.iters.reserve(cfg.turbo_iters + 1);
  for (int iter = 0; iter <= cfg.turbo_iters; ++iter) {
    const auto la = mapping::chunk_llrs(prior_flat, q);
    equalizer::EqResult eq;
    if (mfb) {
      eq = run_mfb(cfg, x, genie_obs, genie_var, la);
    } else {
      equalizer::EqFrame fr;
      fr.y = &y;
      fr.ch = &cfg.ch;
      fr.constel = cfg.constel;
      fr.prior_llrs = &la;
      fr.win = cfg.win;
      const equalizer::EpSchedule sched{at_or_last(cfg.self_iters, iter, 0),
                                        at_or_last(cfg.betas, iter, 0.0)};
      eq = equalizer::run_receiver(cfg.receiver, fr, sched);
    }

    IterRecord rec;
    rec.prior_flat = prior_flat;
    rec.ext_flat = mapping::flatten_llrs(eq.ext_llrs);

    if (cfg.coded) {
      VecD dec_in = txchain::deinterleave(rec.ext_flat, ilv);
      dec_in.resize(kc);
      const decoder::DecodeResult dec = decoder::bcjr_decode(dec_in, trellis);
      for (int i = 0; i < cfg.kb; ++i)
        if (dec.info[i] != run.info[i]) ++rec.bit_errors;
      rec.frame_error = rec.bit_errors > 0;
      if (iter < cfg.turbo_iters) {
        VecD padded(nbits, kLlrClip);
        std::copy(dec.extrinsic.begin(), dec.extrinsic.end(), padded.begin());
        prior_flat = txchain::interleave(padded, ilv);
      }
    } else {
      for (int k = 0; k < K; ++k) {
        const int label = mapping::hard_decide(eq.post[k]);
        for (int j = 0; j < q; ++j)
          if (mapping::label_bit(label, j, q) != run.coded_il[k * q + j]) ++rec.bit_errors;
      }
      rec.frame_error = rec.bit_errors > 0;
    }
    run.iters.push_back(std::move(rec));
  }
  return run;
}

}  // namespace teq::turbo
