// Soft-input soft-output decoder for terminated recursive systematic
// convolutional codes: exact log-domain forward/backward (max*) recursions
// over the code trellis.
#ifndef TEQ_DECODER_HPP
#define TEQ_DECODER_HPP

#include <array>
#include <vector>

#include "teq/common.hpp"

namespace teq::decoder {

struct Trellis {
  int num_states = 0;
  // Indexed [state][input bit].
  std::vector<std::array<int, 2>> next_state;
  std::vector<std::array<int, 2>> parity;
  // Input that drives the feedback sum to zero, per state; the tail section
  // of a terminated block is constrained to these transitions.
  std::vector<int> term_input;
  int memory = 0;
};

// Generators are octal, highest bit = D^0 coefficient, matching the encoder.
Trellis make_trellis(int g_fb = 7, int g_ff = 5);

struct DecodeResult {
  VecD extrinsic;  // one per coded bit, clipped
  Bits info;       // hard decisions on the systematic section
};

// coded_llrs carries one LLR (ln P[bit=0]/P[bit=1]) per coded bit in
// transmission order [d0 p0 d1 p1 ...], tail included. Extrinsic output is
// posterior minus prior per coded bit.
DecodeResult bcjr_decode(const VecD& coded_llrs, const Trellis& trellis);

}  // namespace teq::decoder

#endif
