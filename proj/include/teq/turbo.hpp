// One full receive chain over a single frame: encode, interleave, map,
// propagate, then iterate equalizer and decoder, recording per-iteration
// LLR streams and decisions. Both the BER campaign engine and the mutual-
// information trajectory analysis consume these records.
#ifndef TEQ_TURBO_HPP
#define TEQ_TURBO_HPP

#include <string>
#include <vector>

#include "teq/decoder.hpp"
#include "teq/equalizer.hpp"
#include "teq/mapping.hpp"
#include "teq/rng.hpp"
#include "teq/txchain.hpp"

namespace teq::turbo {

struct TurboConfig {
  const mapping::Constellation* constel = nullptr;
  txchain::ChannelModel ch;  // noise_var must be set
  equalizer::WindowConfig win;
  std::string receiver;  // equalizer variant, or "mfb" for the genie bound
  bool coded = true;
  int kb = 2048;  // info bits (coded) or raw bits on the channel (uncoded)
  int g_fb = 7;
  int g_ff = 5;
  int turbo_iters = 0;            // extra decoder passes beyond iteration 0
  std::vector<int> self_iters;    // per-iteration; last entry repeats
  std::vector<double> betas;      // per-iteration damping; last entry repeats
};

struct IterRecord {
  VecD prior_flat;  // symbol-domain prior LLRs fed to the equalizer
  VecD ext_flat;    // symbol-domain extrinsic LLRs out of the equalizer
  int bit_errors = 0;
  bool frame_error = false;
};

struct FrameRun {
  Bits info;      // what error counts are measured against
  Bits coded_il;  // transmitted bits in symbol order (pads included)
  Bits pad_mask;  // 1 where the symbol-domain position is alignment padding
  std::vector<IterRecord> iters;  // turbo_iters + 1 records
};

// Symbol count for one frame under this config.
int frame_symbols(const TurboConfig& cfg);

FrameRun run_turbo_frame(const TurboConfig& cfg, Rng& rng);

}  // namespace teq::turbo

#endif
