// Soft symbol mapper/demapper: constellations with fixed Gray labelings,
// prior/posterior PMFs, moment projection, and the Gaussian message algebra
// (division, damping) used by the expectation-propagation feedback loop.
//
// LLR convention everywhere: L = ln P[bit=0] / P[bit=1]. Bits within a
// symbol label are MSB-first: bit j of label m is (m >> (q-1-j)) & 1.
#ifndef TEQ_MAPPING_HPP
#define TEQ_MAPPING_HPP

#include <optional>
#include <string>

#include "teq/common.hpp"

namespace teq::mapping {

struct Constellation {
  std::string name;
  int q = 0;        // bits per symbol
  int M = 0;        // 2^q
  double kw = 1.0;  // 1/2 when the signal has one real degree of freedom
  VecC points;      // indexed by label word
};

// Shipped labelings (zero mean, unit average power):
//   bpsk   {0 -> +1, 1 -> -1}
//   qpsk   Gray, (1-2*b0 + j(1-2*b1))/sqrt(2)
//   8psk   Gray counterclockwise on the unit circle
//   16qam  per-axis Gray, levels {-3,-1,+1,+3}/sqrt(10)
const Constellation& constellation(const std::string& name);

inline int label_bit(int label, int j, int q) { return (label >> (q - 1 - j)) & 1; }

// Gaussian message with an infinite-variance sentinel for "no information".
struct GaussianMsg {
  cplx mean = 0.0;
  double var = kInfVar;
};

// P(alpha) proportional to prod_j exp(-bit_j(alpha) * La_j), inputs clipped
// to +/- kLlrClip. Always returns a normalized PMF.
VecD prior_pmf(const VecD& la, const Constellation& c);

// D(alpha) proportional to exp(-kw |alpha - x_e|^2 / v_e) * prior(alpha).
// v_e = +inf returns the prior unchanged; v_e = 0 is the point-mass limit.
VecD posterior_pmf(const VecD& prior, const GaussianMsg& ext, const Constellation& c);

GaussianMsg pmf_moments(const VecD& p, const Constellation& c);

// Extrinsic feedback by Gaussian division of the moment-matched posterior by
// the equalizer message: v* = v_e*gamma/(v_e - gamma), x* = (mu*v_e -
// x_e*gamma)/(v_e - gamma). Returns nullopt (the NegVariance marker) when
// gamma >= v_e.
std::optional<GaussianMsg> gaussian_divide(const GaussianMsg& post, const GaussianMsg& ext);

// Precision-domain convex combination: 1/v = (1-beta)/v_new + beta/v_prev,
// mean weighted by the same precisions. beta=0 keeps `fresh`, beta=1 keeps
// `prev`; a zero-variance side dominates.
GaussianMsg damp(const GaussianMsg& fresh, const GaussianMsg& prev, double beta);

// L_e(j) = ln sum_{bit_j=0} D - ln sum_{bit_j=1} D - La_j, clipped.
VecD extrinsic_llrs(const VecD& post, const VecD& la, const Constellation& c);

// argmax with ties broken toward the lowest label.
int hard_decide(const VecD& p);

// Reshape between a flat bit-LLR stream and per-symbol blocks of q.
std::vector<VecD> chunk_llrs(const VecD& flat, int q);
VecD flatten_llrs(const std::vector<VecD>& blocks);

}  // namespace teq::mapping

#endif
