// Sliding-window MMSE equalization with soft interference cancellation, and
// the receiver variants built on it:
//
//   run_le_ic       linear IC, priors at every window position
//   run_si_le_ic    self-iterated LE-IC, parallel feedback schedule
//   run_dfe_ic_ep   serial decision feedback with expectation-propagation
//                   extrinsics (optionally self-iterated, with damping)
//   run_dfe_ic_app  serial feedback from posterior moments
//   run_dfe_ic_papp posterior means with perfect-decision (zero) variances
//   run_dfe_ic_happ PAPP plus decision-error variance compensation and
//                   ambiguous-LLR zeroing
//
// All variants share one filter pipeline: per symbol, the banded Cholesky
// factor of the window covariance is advanced by one slide (plus one variance
// exchange for the decision-feedback family), solved for the MMSE filter,
// and the unbiased extrinsic estimate is formed. A dense fresh-solve engine
// with identical semantics is selectable for cross-checking.
#ifndef TEQ_EQUALIZER_HPP
#define TEQ_EQUALIZER_HPP

#include <string>
#include <vector>

#include "teq/common.hpp"
#include "teq/mapping.hpp"
#include "teq/numerics.hpp"
#include "teq/txchain.hpp"

namespace teq::equalizer {

struct WindowConfig {
  int Np = 0;  // pre-cursor observations
  int Nd = 0;  // post-cursor observations

  int N() const { return Np + Nd + 1; }

  // N = 3L+2 with Nd = 2L.
  static WindowConfig defaults(int L) { return {L + 1, 2 * L}; }
};

// Unbiased extrinsic symbol estimate: x_k ~ CN(xe, ve) as seen by the
// demapper.
struct FirOutput {
  cplx xe = 0.0;
  double ve = 0.0;
};

struct EpSchedule {
  int self_iters = 0;  // extra equalize-demap passes beyond the first
  double beta = 0.0;   // damping toward the previous pass's feedback
};

// One equalization call = one turbo iteration's work on a received block.
struct EqFrame {
  const VecC* y = nullptr;                        // K+L-1 received samples
  const txchain::ChannelModel* ch = nullptr;
  const mapping::Constellation* constel = nullptr;
  const std::vector<VecD>* prior_llrs = nullptr;  // K blocks of q LLRs
  WindowConfig win;
  bool direct_engine = false;  // dense reference engine instead of the banded one
};

struct EqResult {
  std::vector<FirOutput> fir;   // final-pass extrinsic estimates
  std::vector<VecD> post;       // final-pass posterior PMFs
  std::vector<VecD> ext_llrs;   // extrinsic bit LLRs per symbol
  std::vector<int> neg_var;     // symbols whose EP division failed on the final pass
};

EqResult run_le_ic(const EqFrame& fr);
EqResult run_si_le_ic(const EqFrame& fr, const EpSchedule& sched);
EqResult run_dfe_ic_ep(const EqFrame& fr, const EpSchedule& sched);
EqResult run_dfe_ic_app(const EqFrame& fr);
EqResult run_dfe_ic_papp(const EqFrame& fr);
EqResult run_dfe_ic_happ(const EqFrame& fr);

// Dispatch by configured name: le-ic | si-le-ic | dfe-ic-ep | si-dfe-ic-ep |
// dfe-ic-app | dfe-ic-papp | dfe-ic-happ. The non-si spellings ignore
// sched.self_iters; throws ConfigInvalid on an unknown name.
EqResult run_receiver(const std::string& name, const EqFrame& fr, const EpSchedule& sched);

}  // namespace teq::equalizer

#endif
