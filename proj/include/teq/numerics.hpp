// Banded complex Cholesky engine for sliding-window MMSE covariances.
//
// The covariance tracked here is Sigma = noise*I + H*diag(var)*H^H where H is
// a banded window slice of the channel convolution matrix. Sigma is Hermitian
// banded with bandwidth equal to the channel memory, and the factor stays
// banded through every update below, so each call costs O(N*band).
//
// Provided updates:
//   chol_init       direct banded factorization
//   chol_slide_le   advance the window one symbol (append newest observation
//                   row, retire the oldest, rank-1 Givens repair)
//   chol_rank1_dfe  exchange one symbol's variance in place (trigonometric
//                   update or hyperbolic downdate, depending on the sign)
//   chol_solve      banded forward/backward substitution
//
// flop_count gives the analytic complexity model used by the reporting tool;
// OpCounter instruments the live arithmetic for cross-checking the model.
#ifndef TEQ_NUMERICS_HPP
#define TEQ_NUMERICS_HPP

#include "teq/common.hpp"

namespace teq::numerics {

struct WindowedCovSpec {
  MatC H;            // N x W window channel slice, row i supported on columns [i, i+L-1]
  VecD var;          // symbol variances, length W, entries >= 0
  double noise = 0;  // k_w * sigma_w^2, added on the diagonal
};

struct CholFactor {
  MatC L;        // lower triangular, real positive diagonal
  int band = 1;  // structural lower bandwidth: L(i,j) == 0 whenever i-j >= band

  int n() const { return L.rows; }
};

// Thread-local instrumentation of real additions/multiplications performed by
// the engine (and by the FIR pipeline built on it). One FLOP = 2 real ops.
struct OpCounter {
  double real_muls = 0;
  double real_adds = 0;

  double flops() const { return 0.5 * (real_muls + real_adds); }
};

void set_op_counter(OpCounter* counter);  // nullptr disables
void count_ops(double muls, double adds);

CholFactor chol_init(const WindowedCovSpec& spec);

CholFactor chol_slide_le(const CholFactor& prev, const WindowedCovSpec& prev_spec,
                         const WindowedCovSpec& next_spec);

CholFactor chol_rank1_dfe(const CholFactor& prev, double old_var, double new_var,
                          const VecC& channel_column);

VecC chol_solve(const CholFactor& factor, const VecC& rhs);

// In-place cores used by the per-frame filter engines (the value-returning
// wrappers above copy first).
void chol_slide_le_inplace(CholFactor& f, const WindowedCovSpec& prev_spec,
                           const WindowedCovSpec& next_spec);
void chol_rank1_dfe_inplace(CholFactor& f, double old_var, double new_var,
                            const VecC& channel_column);

enum class FlopReceiver { LeIcTuchler, LeIcChol, DfeIcChol, Map };

// Analytic FLOPs per block of K symbols (initial setup + K per-symbol steps;
// K = 0 gives the setup cost alone). N is the window row count, L the channel
// memory, M the constellation order. The window lookahead is taken at its
// default N_d = min(2L, N-1). Counting conventions: one complex MAC = 8 real
// ops, one Givens rotation element pair = 20 real ops, band sparsity
// exploited everywhere; the rank-1 variance exchange is counted over the
// channel column support. The prior-art baseline (recomputed inverse, rank-1
// inverse updates) is counted at 4N^3/3 complex MACs once plus 2N^2 complex
// MACs per slide. MAP is counted as K*M^L trellis branches at 32 real ops per
// branch covering both recursion directions and completion.
double flop_count(FlopReceiver receiver, int L, int N, int M, int K);

}  // namespace teq::numerics

#endif
