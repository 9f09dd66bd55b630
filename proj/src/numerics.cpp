#include "teq/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace teq::numerics {

namespace {

// Downdate pivot guard: pivot^2 - |w_l|^2 < eps * pivot^2 means the removal
// would leave the factor numerically indefinite.
constexpr double kDowndateEps = 1e-12;

thread_local OpCounter* g_counter = nullptr;

inline bool is_zero(const cplx& z) { return z.real() == 0.0 && z.imag() == 0.0; }

// Rank-one rotation sweep shared by the slide repair (trigonometric) and the
// variance exchange (trigonometric or hyperbolic). Rotations act on the
// factor column and the workspace vector u simultaneously: the u update reads
// the pre-rotation column, which is what makes the pair of recurrences an
// exact Givens/hyperbolic rotation.
//   update:   col' = c*col + s*u,  u' = c*u - conj(s)*col_old
//   downdate: col' = c*col - s*u,  u' = c*u - conj(s)*col_old
void rank1_rotate(CholFactor& f, VecC& u, bool update) {
  const int n = f.n();
  int last = -1;
  int first = n;
  for (int i = 0; i < n; ++i) {
    if (!is_zero(u[i])) {
      if (first == n) first = i;
      last = i;
    }
  }
  if (last < 0) return;

  for (int l = first; l < n; ++l) {
    if (is_zero(u[l])) {
      if (l > last) break;
      continue;
    }
    const double a = f.L(l, l).real();
    const double b2 = std::norm(u[l]);
    double r;
    if (update) {
      r = std::sqrt(a * a + b2);
    } else {
      const double r2 = a * a - b2;
      if (r2 < kDowndateEps * a * a)
        throw DowndateNotPD("rank-1 downdate drove a pivot nonpositive");
      r = std::sqrt(r2);
    }
    const double c = a / r;
    const cplx s = std::conj(u[l]) / r;
    count_ops(7, 2);

    f.L(l, l) = r;
    u[l] = 0;

    const int colend = std::min(n - 1, l + f.band - 1);
    const int end = std::max(colend, last);
    if (end > colend) f.band = std::max(f.band, end - l + 1);
    for (int m = l + 1; m <= end; ++m) {
      const cplx t = f.L(m, l);
      if (update)
        f.L(m, l) = c * t + s * u[m];
      else
        f.L(m, l) = c * t - s * u[m];
      u[m] = c * u[m] - std::conj(s) * t;
    }
    if (end > l) count_ops(12.0 * (end - l), 8.0 * (end - l));
    if (end > last) last = end;
  }
}

}  // namespace

void set_op_counter(OpCounter* counter) { g_counter = counter; }

void count_ops(double muls, double adds) {
  if (g_counter) {
    g_counter->real_muls += muls;
    g_counter->real_adds += adds;
  }
}

CholFactor chol_init(const WindowedCovSpec& spec) {
  const int n = spec.H.rows;
  const int w = spec.H.cols;
  if (n <= 0) throw DimensionMismatch("chol_init: empty window");
  if (static_cast<int>(spec.var.size()) != w)
    throw DimensionMismatch("chol_init: variance length does not match window columns");
  if (spec.noise < 0.0) throw NotPositiveDefinite("chol_init: negative noise variance");
  for (double v : spec.var)
    if (v < 0.0) throw NotPositiveDefinite("chol_init: negative symbol variance");

  // Row supports determine the structural bandwidth of Sigma.
  std::vector<int> lo(n, w), hi(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < w; ++j) {
      if (!is_zero(spec.H(i, j))) {
        if (lo[i] == w) lo[i] = j;
        hi[i] = j;
      }
    }
  }
  int band = 1;
  for (int i = 0; i < n; ++i) {
    if (hi[i] < 0) continue;
    for (int j = 0; j < i; ++j) {
      if (hi[j] < 0) continue;
      if (lo[i] <= hi[j] && lo[j] <= hi[i] && i - j + 1 > band) band = i - j + 1;
    }
  }

  CholFactor f;
  f.L = MatC(n, n);
  f.band = band;

  // Lower triangle of Sigma = noise*I + H diag(var) H^H within the band.
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - band + 1); j <= i; ++j) {
      cplx acc = 0;
      if (hi[i] >= 0 && hi[j] >= 0) {
        const int mlo = std::max(lo[i], lo[j]);
        const int mhi = std::min(hi[i], hi[j]);
        for (int m = mlo; m <= mhi; ++m)
          acc += spec.H(i, m) * spec.var[m] * std::conj(spec.H(j, m));
        if (mhi >= mlo) count_ops(6.0 * (mhi - mlo + 1), 4.0 * (mhi - mlo + 1));
      }
      if (i == j) {
        acc += spec.noise;
        count_ops(0, 1);
      }
      f.L(i, j) = acc;
    }
  }

  // In-place banded factorization.
  for (int j = 0; j < n; ++j) {
    const int start = std::max(0, j - band + 1);
    double piv = f.L(j, j).real();
    for (int m = start; m < j; ++m) piv -= std::norm(f.L(j, m));
    if (j > start) count_ops(2.0 * (j - start), 2.0 * (j - start));
    if (!(piv > 0.0)) throw NotPositiveDefinite("chol_init: nonpositive pivot");
    const double d = std::sqrt(piv);
    count_ops(1, 0);
    f.L(j, j) = d;
    const int iend = std::min(n - 1, j + band - 1);
    for (int i = j + 1; i <= iend; ++i) {
      cplx acc = f.L(i, j);
      const int ms = std::max(0, i - band + 1);
      for (int m = ms; m < j; ++m) acc -= f.L(i, m) * std::conj(f.L(j, m));
      if (j > ms) count_ops(4.0 * (j - ms), 4.0 * (j - ms));
      f.L(i, j) = acc / d;
      count_ops(2, 0);
    }
  }
  return f;
}

void chol_slide_le_inplace(CholFactor& f, const WindowedCovSpec& prev_spec,
                           const WindowedCovSpec& next_spec) {
  const int n = f.n();
  const int w = prev_spec.H.cols;
  if (prev_spec.H.rows != n || next_spec.H.rows != n || next_spec.H.cols != w)
    throw DimensionMismatch("chol_slide_le: window shapes disagree with the factor");
  if (static_cast<int>(prev_spec.var.size()) != w ||
      static_cast<int>(next_spec.var.size()) != w)
    throw DimensionMismatch("chol_slide_le: variance lengths disagree");
  const int b = f.band;
  const int taps = w - n + 1;

  // Newest observation row, re-indexed to the previous window's symbol grid:
  // one zero in front, and the trailing coefficient peels off as the newest
  // symbol's entry. h1[j] = row[j-1], h2 = row[w-1].
  int j0 = w, j1 = -1;
  VecC t(w, 0);  // var_prev .* conj(h1)
  for (int j = 1; j < w; ++j) {
    const cplx hj = next_spec.H(n - 1, j - 1);
    if (is_zero(hj)) continue;
    t[j] = prev_spec.var[j] * std::conj(hj);
    if (j0 == w) j0 = j;
    j1 = j;
  }
  if (j1 >= j0) count_ops(2.0 * (j1 - j0 + 1), 0);
  const cplx h2 = next_spec.H(n - 1, w - 1);

  // w = H_prev (var .* h1); rows are supported on [i, i+taps-1].
  VecC wv(n, 0);
  int w_first = n, w_last = -1;
  if (j1 >= j0) {
    for (int i = std::max(0, j0 - taps + 1); i < n; ++i) {
      const int mlo = std::max(i, j0);
      const int mhi = std::min(i + taps - 1, j1);
      if (mhi < mlo) continue;
      cplx acc = 0;
      for (int m = mlo; m <= mhi; ++m) acc += prev_spec.H(i, m) * t[m];
      count_ops(4.0 * (mhi - mlo + 1), 4.0 * (mhi - mlo + 1));
      wv[i] = acc;
      if (!is_zero(acc)) {
        if (w_first == n) w_first = i;
        w_last = i;
      }
    }
  }

  // Forward substitution L z = w on the live range, accumulating ||z||^2.
  VecC z(n, 0);
  double znorm = 0;
  if (w_last >= w_first) {
    for (int i = w_first; i < n; ++i) {
      cplx acc = wv[i];
      const int ms = std::max(w_first, i - b + 1);
      for (int m = ms; m < i; ++m) acc -= f.L(i, m) * z[m];
      if (i > ms) count_ops(4.0 * (i - ms), 4.0 * (i - ms));
      z[i] = acc / f.L(i, i).real();
      znorm += std::norm(z[i]);
      count_ops(4, 1);
    }
  }

  // New trailing pivot: l22^2 = h1^H V h1 + v_new |h2|^2 - ||z||^2 + noise.
  double hvh = 0;
  for (int j = j0; j <= j1; ++j)
    hvh += prev_spec.var[j] * std::norm(next_spec.H(n - 1, j - 1));
  if (j1 >= j0) count_ops(3.0 * (j1 - j0 + 1), 2.0 * (j1 - j0 + 1));
  const double vnew = next_spec.var[w - 1];
  const double l22sq = next_spec.noise + hvh + vnew * std::norm(h2) - znorm;
  count_ops(3, 4);
  if (!(l22sq > 0.0))
    throw NotPositiveDefinite("chol_slide_le: window update lost definiteness");
  const double l22 = std::sqrt(l22sq);
  count_ops(1, 0);

  // Retire the oldest symbol: shift the factor up-left, append the new last
  // row [l12^H, l22], and keep the dropped column's tail for the rank-1
  // repair. Shifting column-by-column only reads entries not yet overwritten.
  VecC u(n, 0);
  for (int i = 0; i + 1 < n; ++i) u[i] = f.L(i + 1, 0);
  u[n - 1] = std::conj(z[0]);  // zero unless the band spans the whole window
  for (int j = 0; j + 1 < n; ++j) {
    const int iend = std::min(n - 2, j + b - 1);
    for (int i = j; i <= iend; ++i) f.L(i, j) = f.L(i + 1, j + 1);
  }
  for (int m = 0; m + 1 < n; ++m) f.L(n - 1, m) = std::conj(z[m + 1]);
  f.L(n - 1, n - 1) = l22;
  if (w_last >= w_first)
    f.band = std::max(f.band, std::min(n, n - w_first + 1));

  rank1_rotate(f, u, /*update=*/true);
}

CholFactor chol_slide_le(const CholFactor& prev, const WindowedCovSpec& prev_spec,
                         const WindowedCovSpec& next_spec) {
  CholFactor f = prev;
  chol_slide_le_inplace(f, prev_spec, next_spec);
  return f;
}

void chol_rank1_dfe_inplace(CholFactor& f, double old_var, double new_var,
                            const VecC& channel_column) {
  const int n = f.n();
  if (static_cast<int>(channel_column.size()) != n)
    throw DimensionMismatch("chol_rank1_dfe: column length does not match factor");
  if (old_var < 0.0 || new_var < 0.0)
    throw NotPositiveDefinite("chol_rank1_dfe: negative variance");
  const double dv = new_var - old_var;
  if (dv == 0.0) return;

  const double scale = std::sqrt(std::fabs(dv));
  count_ops(1, 1);
  VecC u(n, 0);
  int nz = 0;
  for (int i = 0; i < n; ++i) {
    if (is_zero(channel_column[i])) continue;
    u[i] = scale * channel_column[i];
    ++nz;
  }
  count_ops(2.0 * nz, 0);
  rank1_rotate(f, u, /*update=*/dv > 0.0);
}

CholFactor chol_rank1_dfe(const CholFactor& prev, double old_var, double new_var,
                          const VecC& channel_column) {
  CholFactor f = prev;
  chol_rank1_dfe_inplace(f, old_var, new_var, channel_column);
  return f;
}

VecC chol_solve(const CholFactor& factor, const VecC& rhs) {
  const int n = factor.n();
  if (static_cast<int>(rhs.size()) != n)
    throw DimensionMismatch("chol_solve: rhs length does not match factor");
  const int b = factor.band;

  int i0 = 0;
  while (i0 < n && is_zero(rhs[i0])) ++i0;

  VecC y(n, 0);
  for (int i = i0; i < n; ++i) {
    cplx acc = rhs[i];
    const int ms = std::max(i0, i - b + 1);
    for (int m = ms; m < i; ++m) acc -= factor.L(i, m) * y[m];
    if (i > ms) count_ops(4.0 * (i - ms), 4.0 * (i - ms));
    y[i] = acc / factor.L(i, i).real();
    count_ops(2, 0);
  }

  VecC x(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    cplx acc = y[i];
    const int mend = std::min(n - 1, i + b - 1);
    for (int m = i + 1; m <= mend; ++m) acc -= std::conj(factor.L(m, i)) * x[m];
    if (mend > i) count_ops(4.0 * (mend - i), 4.0 * (mend - i));
    x[i] = acc / factor.L(i, i).real();
    count_ops(2, 0);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Analytic complexity model. The per-call counts below mirror the loop trip
// counts of the routines above for the canonical interior window (row i of
// the window slice supported on [i, i+L-1], bandwidth L), accumulated in real
// additions and multiplications and converted to FLOPs at the end.

namespace {

struct ModelOps {
  double m = 0, a = 0;

  void mac(double k) { m += 4 * k; a += 4 * k; }           // complex multiply-accumulate
  void rot(double pairs) { m += 12 * pairs; a += 8 * pairs; }
  void raw(double muls, double adds) { m += muls; a += adds; }
  double real() const { return m + a; }
};

// Triangular-solve trip count: sum over d = 0..len-1 of min(d, b-1).
double tri_trips(int len, int b) {
  if (len <= 0) return 0;
  const int full = len - (b - 1);
  if (full <= 0) return 0.5 * len * (len - 1);
  return 0.5 * (b - 1) * (b - 2) + static_cast<double>(full) * (b - 1);
}

ModelOps model_init(int N, int L) {
  ModelOps c;
  const int b = std::min(L, N);
  for (int i = 0; i < N; ++i) {
    for (int j = std::max(0, i - b + 1); j <= i; ++j) {
      c.raw(6.0 * (L - (i - j)), 4.0 * (L - (i - j)));
      if (i == j) c.raw(0, 1);
    }
  }
  for (int j = 0; j < N; ++j) {
    const int start = std::max(0, j - b + 1);
    if (j > start) c.raw(2.0 * (j - start), 2.0 * (j - start));
    c.raw(1, 0);
    const int iend = std::min(N - 1, j + b - 1);
    for (int i = j + 1; i <= iend; ++i) {
      const int ms = std::max(0, i - b + 1);
      if (j > ms) c.mac(j - ms);
      c.raw(2, 0);
    }
  }
  return c;
}

ModelOps model_slide(int N, int L) {
  ModelOps c;
  const int b = std::min(L, N);
  c.raw(2.0 * (L - 1), 0);                        // var .* h1
  c.mac(0.5 * L * (L - 1));                       // w = H (var .* h1)
  c.mac(0.5 * (L - 1) * (L - 2));                 // forward substitution
  c.raw(4.0 * (L - 1), 1.0 * (L - 1));            // divides + ||z||^2
  c.raw(3.0 * (L - 1), 2.0 * (L - 1));            // h1^H V h1
  c.raw(4, 4);                                    // l22 assembly + sqrt
  c.raw(7.0 * N, 2.0 * N);                        // rotation coefficients
  c.rot((b - 1.0) * (N - b + 1) + 0.5 * (b - 1) * (b - 2));
  return c;
}

ModelOps model_solve(int N, int L, int first_nz) {
  ModelOps c;
  const int b = std::min(L, N);
  c.mac(tri_trips(N - first_nz, b));              // forward
  c.raw(2.0 * (N - first_nz), 0);
  c.mac(tri_trips(N, b));                         // backward
  c.raw(2.0 * N, 0);
  return c;
}

// xi = h^H t over the target column support, f = t / xi.
ModelOps model_xi_f(int N, int L) {
  ModelOps c;
  c.mac(L);
  c.raw(2.0 * N + 1, 0);
  return c;
}

// Plain interference cancellation: x_e = xbar_k + f^H (y - H xbar).
ModelOps model_ic_le(int N, int L) {
  ModelOps c;
  c.mac(static_cast<double>(N) * L);              // H xbar
  c.raw(0, 2.0 * N);                              // y - H xbar
  c.mac(N);                                       // f^H (...)
  c.raw(1, 3);                                    // + xbar_k, v_e = 1/xi - vbar
  return c;
}

// Split-path cancellation used by the decision-feedback variants:
// x_e = xbar_a[0] + f^H y - g_c^H xbar_c - g_a^H xbar_a with g = H^H f.
ModelOps model_ic_dfe(int N, int L) {
  ModelOps c;
  const int w = N + L - 1;
  c.mac(static_cast<double>(N) * L);              // g = H^H f
  c.mac(N);                                       // f^H y
  c.mac(w);                                       // the two split dots
  c.raw(1, 7);                                    // combine + v_e
  return c;
}

// Variance exchange counted over the channel column support only.
ModelOps model_rank1(int L) {
  ModelOps c;
  c.raw(2.0 * L + 1, 1);                          // scaled column
  c.raw(7.0 * L, 2.0 * L);                        // rotation coefficients
  c.rot(0.5 * L * (L + 1));
  return c;
}

}  // namespace

double flop_count(FlopReceiver receiver, int L, int N, int M, int K) {
  if (L < 1 || N < 1 || M < 2 || K < 0)
    throw DimensionMismatch("flop_count: parameters out of range");
  const int nd = std::min(2 * L, N - 1);
  const int np = N - 1 - nd;

  ModelOps total;
  switch (receiver) {
    case FlopReceiver::LeIcChol: {
      total = model_init(N, L);
      if (K > 0) {
        ModelOps per = model_solve(N, L, np);
        ModelOps xf = model_xi_f(N, L);
        ModelOps ic = model_ic_le(N, L);
        ModelOps sl = model_slide(N, L);
        total.raw((K - 1) * sl.m + K * (per.m + xf.m + ic.m),
                  (K - 1) * sl.a + K * (per.a + xf.a + ic.a));
      }
      break;
    }
    case FlopReceiver::DfeIcChol: {
      total = model_init(N, L);
      if (K > 0) {
        ModelOps per = model_solve(N, L, np);
        ModelOps xf = model_xi_f(N, L);
        ModelOps ic = model_ic_dfe(N, L);
        ModelOps sl = model_slide(N, L);
        ModelOps r1 = model_rank1(L);
        total.raw((K - 1) * (sl.m + r1.m) + K * (per.m + xf.m + ic.m),
                  (K - 1) * (sl.a + r1.a) + K * (per.a + xf.a + ic.a));
      }
      break;
    }
    case FlopReceiver::LeIcTuchler: {
      // Prior-art baseline: one full initial inverse, a rank-structured
      // inverse update per slide, and a dense-inverse product against the
      // sparse target column each symbol. Complex MACs throughout.
      total.mac(4.0 / 3.0 * N * N * N);
      if (K > 0) {
        ModelOps upd;
        upd.mac(2.0 * N * N);                     // per-slide inverse update
        ModelOps per;
        per.mac(static_cast<double>(N) * L);      // Sigma^{-1} h
        ModelOps xf = model_xi_f(N, L);
        ModelOps ic = model_ic_le(N, L);
        total.raw((K - 1) * upd.m + K * (per.m + xf.m + ic.m),
                  (K - 1) * upd.a + K * (per.a + xf.a + ic.a));
      }
      break;
    }
    case FlopReceiver::Map: {
      const double branches = std::pow(static_cast<double>(M), L);
      total.raw(8.0 * L * branches, 0);           // metric tables
      if (K > 0) total.raw(20.0 * K * branches, 12.0 * K * branches);
      break;
    }
  }

  return 0.5 * total.real();
}

}  // namespace teq::numerics
