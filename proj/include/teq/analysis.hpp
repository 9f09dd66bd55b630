// Mutual-information instrumentation: EXIT transfer curves for the
// equalizer-demapper block, measured turbo trajectories, area-theorem
// achievable rates, and the closed-form post-equalization SNR gain of
// decision feedback over linear IC.
#ifndef TEQ_ANALYSIS_HPP
#define TEQ_ANALYSIS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "teq/common.hpp"
#include "teq/equalizer.hpp"
#include "teq/rng.hpp"
#include "teq/txchain.hpp"

namespace teq::analysis {

// J(sigma): mutual information between a bit and a Gaussian-consistent LLR
// L ~ N((1-2d) sigma^2/2, sigma^2). Inverted by bisection.
double j_function(double sigma);
double j_inverse(double mi);

// Time-average estimator: I = 1 - mean(log2(1 + exp(-(1-2d) L))).
double mi_from_llrs(const VecD& llrs, const Bits& bits);

// Gaussian-consistent synthetic priors with mi_from_llrs(out, bits) == ia in
// expectation, clipped like every other LLR in the receiver.
VecD generate_prior_llrs(double ia, const Bits& bits, Rng& rng);

struct ExitPoint {
  double ia = 0.0;
  double ie = 0.0;
};

struct DetectorSetup {
  std::string receiver = "le-ic";
  txchain::ChannelModel ch;  // noise_var must be set
  const mapping::Constellation* constel = nullptr;
  equalizer::WindowConfig win;
  equalizer::EpSchedule sched;
  int block_symbols = 256;
  int frames = 2000;
  std::uint64_t seed = 1;
};

// One equalize-demap pass per grid point over random iid coded bits.
std::vector<ExitPoint> exit_curve(const DetectorSetup& s, const VecD& ia_grid);

// q times the trapezoidal area under I_E(I_A).
double achievable_rate(const std::vector<ExitPoint>& curve, int q);

struct TrajectorySetup {
  DetectorSetup det;
  int kb = 2048;
  int g_fb = 7;
  int g_ff = 5;
  int turbo_iters = 7;
};

// Measured (I_A, I_E) of the equalizer across an actual turbo run, averaged
// over frames; entry t is the state at turbo iteration t.
std::vector<ExitPoint> mi_trajectory(const TrajectorySetup& s);

struct SnrGainReport {
  double xi_le = 0.0;
  double xi_dfe = 0.0;
  double gain = 0.0;
};

// Post-equalization SNR ratio of decision feedback over linear IC under
// homogeneous prior variances: anti-causal window entries at va, causal
// entries at vc (DFE) or va (LE). noise_var lands directly on the covariance
// diagonal. xi values are averaged over interior window positions.
SnrGainReport snr_gain(const txchain::ChannelModel& ch, const equalizer::WindowConfig& win,
                       double va, double vc, double noise_var);

}  // namespace teq::analysis

#endif
