// Shared scalar types, a small dense complex matrix, and the error taxonomy
// used across the turbo-equalization library.
#ifndef TEQ_COMMON_HPP
#define TEQ_COMMON_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace teq {

using cplx = std::complex<double>;
using VecC = std::vector<cplx>;
using VecD = std::vector<double>;
using Bits = std::vector<std::uint8_t>;

// LLRs exchanged anywhere in the receiver saturate at +/- kLlrClip.
inline constexpr double kLlrClip = 30.0;
// Probability floor applied to PMF entries before normalization.
inline constexpr double kPmfFloor = 1e-300;
// Floor for extrinsic variances coming out of the FIR stage.
inline constexpr double kVarFloor = 1e-12;
// Sentinel for "no observation": an infinite-variance Gaussian extrinsic.
inline constexpr double kInfVar = std::numeric_limits<double>::infinity();

inline double clip_llr(double v) {
  if (v > kLlrClip) return kLlrClip;
  if (v < -kLlrClip) return -kLlrClip;
  return v;
}

// Row-major dense complex matrix. Shapes here are window-sized (tens of rows),
// so plain indexed storage beats anything fancier.
struct MatC {
  int rows = 0;
  int cols = 0;
  VecC a;

  MatC() = default;
  MatC(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LengthMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DowndateNotPD : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneratePmf : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace teq

#endif
