#include "teq/equalizer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace teq::equalizer {

namespace {

using mapping::GaussianMsg;
using numerics::count_ops;
using numerics::WindowedCovSpec;

// Ceiling on feedback variances entering the window covariance. A symbol this
// uncertain is indistinguishable from "no information", and unbounded values
// would degrade the conditioning of every later solve.
constexpr double kMaxFeedbackVar = 1e4;

class FilterEngine {
 public:
  virtual ~FilterEngine() = default;
  virtual void start(const WindowedCovSpec& spec) = 0;
  virtual void slide(const WindowedCovSpec& prev, const WindowedCovSpec& next) = 0;
  virtual void swap_var(double old_var, double new_var, const VecC& column) = 0;
  virtual VecC solve(const VecC& rhs) = 0;
};

class CholeskyEngine final : public FilterEngine {
 public:
  void start(const WindowedCovSpec& spec) override { f_ = numerics::chol_init(spec); }
  void slide(const WindowedCovSpec& prev, const WindowedCovSpec& next) override {
    numerics::chol_slide_le_inplace(f_, prev, next);
  }
  void swap_var(double old_var, double new_var, const VecC& column) override {
    numerics::chol_rank1_dfe_inplace(f_, old_var, new_var, column);
  }
  VecC solve(const VecC& rhs) override { return numerics::chol_solve(f_, rhs); }

 private:
  numerics::CholFactor f_;
};

// Reference engine: materializes the covariance densely and solves it fresh
// on every call, sharing no code with the banded update path.
class DirectEngine final : public FilterEngine {
 public:
  void start(const WindowedCovSpec& spec) override { build(spec); }
  void slide(const WindowedCovSpec&, const WindowedCovSpec& next) override { build(next); }
  void swap_var(double old_var, double new_var, const VecC& column) override {
    const double dv = new_var - old_var;
    const int n = static_cast<int>(sigma_.rows());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sigma_(i, j) += dv * column[i] * std::conj(column[j]);
  }
  VecC solve(const VecC& rhs) override {
    const int n = static_cast<int>(sigma_.rows());
    Eigen::VectorXcd b(n);
    for (int i = 0; i < n; ++i) b(i) = rhs[i];
    Eigen::VectorXcd x = sigma_.llt().solve(b);
    VecC out(n);
    for (int i = 0; i < n; ++i) out[i] = x(i);
    return out;
  }

 private:
  void build(const WindowedCovSpec& spec) {
    const int n = spec.H.rows;
    const int w = spec.H.cols;
    sigma_ = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) sigma_(i, i) = spec.noise;
    for (int j = 0; j < w; ++j) {
      if (spec.var[j] == 0.0) continue;
      for (int i1 = 0; i1 < n; ++i1) {
        const cplx a = spec.H(i1, j);
        if (a == cplx(0.0)) continue;
        for (int i2 = 0; i2 < n; ++i2) sigma_(i1, i2) += spec.var[j] * a * std::conj(spec.H(i2, j));
      }
    }
  }

  Eigen::MatrixXcd sigma_;
};

std::unique_ptr<FilterEngine> make_engine(bool direct) {
  if (direct) return std::make_unique<DirectEngine>();
  return std::make_unique<CholeskyEngine>();
}

// Per-symbol Gaussian statistics over the block.
struct Stats {
  VecC mean;
  VecD var;

  explicit Stats(int K) : mean(K, cplx(0.0)), var(K, 0.0) {}

  GaussianMsg at(int k) const { return {mean[k], var[k]}; }
  void set(int k, const GaussianMsg& g) {
    mean[k] = g.mean;
    var[k] = g.var;
  }
};

struct FrameCtx {
  const EqFrame& fr;
  const mapping::Constellation& c;
  int K = 0;
  int L = 0;
  int N = 0;
  int W = 0;
  int Npp = 0;     // window column of the target symbol
  double noise = 0;  // k_w * sigma_w^2

  explicit FrameCtx(const EqFrame& f) : fr(f), c(*f.constel) {
    L = f.ch->L;
    K = static_cast<int>(f.y->size()) - L + 1;
    if (K < 1) throw DimensionMismatch("equalizer: received block shorter than the channel");
    if (f.prior_llrs == nullptr || static_cast<int>(f.prior_llrs->size()) != K)
      throw DimensionMismatch("equalizer: need one prior LLR block per symbol");
    if (f.win.Np < 0 || f.win.Nd < 0) throw DimensionMismatch("equalizer: negative window");
    N = f.win.N();
    Npp = f.win.Np + L - 1;
    W = Npp + f.win.Nd + 1;
    if (!(f.ch->noise_var > 0.0)) throw ConfigInvalid("equalizer: noise variance must be positive");
    noise = c.kw * f.ch->noise_var;
  }

  int symbol_of(int k, int j) const { return k - Npp + j; }

  // Window variance layout: symbols at or below `boundary` read the feedback
  // stats, the rest the base stats; out-of-block symbols are known zeros.
  WindowedCovSpec spec(int k, const Stats& base, const Stats& fb, int boundary) const {
    WindowedCovSpec sp;
    sp.H = txchain::window_channel(*fr.ch, K, k, fr.win.Np, fr.win.Nd);
    sp.noise = noise;
    sp.var.assign(W, 0.0);
    for (int j = 0; j < W; ++j) {
      const int s = symbol_of(k, j);
      if (s < 0 || s >= K) continue;
      sp.var[j] = s <= boundary ? fb.var[s] : base.var[s];
    }
    return sp;
  }

  VecC window_means(int k, const Stats& base, const Stats& fb, int boundary) const {
    VecC xbar(W, cplx(0.0));
    for (int j = 0; j < W; ++j) {
      const int s = symbol_of(k, j);
      if (s < 0 || s >= K) continue;
      xbar[j] = s <= boundary ? fb.mean[s] : base.mean[s];
    }
    return xbar;
  }

  VecC window_obs(int k) const {
    VecC yw(N, cplx(0.0));
    const int n_obs = K + L - 1;
    for (int i = 0; i < N; ++i) {
      const int o = k - fr.win.Np + i;
      if (o >= 0 && o < n_obs) yw[i] = (*fr.y)[o];
    }
    return yw;
  }

  VecC column(const WindowedCovSpec& sp, int j) const {
    VecC col(N, cplx(0.0));
    const int lo = std::max(0, j - L + 1);
    const int hi = std::min(N - 1, j);
    for (int i = lo; i <= hi; ++i) col[i] = sp.H(i, j);
    return col;
  }
};

struct FilterTaps {
  VecC f;     // Sigma^{-1} h / xi
  double xi;  // h^H Sigma^{-1} h
};

FilterTaps filter_at(const FrameCtx& ctx, FilterEngine& eng, const WindowedCovSpec& sp) {
  const VecC h = ctx.column(sp, ctx.Npp);
  VecC sol = eng.solve(h);
  double xi = 0.0;
  const int lo = std::max(0, ctx.Npp - ctx.L + 1);
  const int hi = std::min(ctx.N - 1, ctx.Npp);
  for (int i = lo; i <= hi; ++i)
    xi += std::real(std::conj(h[i]) * sol[i]);
  count_ops(4.0 * (hi - lo + 1), 4.0 * (hi - lo + 1));
  if (!(xi > 0.0)) throw NotPositiveDefinite("equalizer: nonpositive filter precision");
  const double inv = 1.0 / xi;
  for (cplx& v : sol) v *= inv;
  count_ops(2.0 * ctx.N + 1.0, 0.0);
  return {std::move(sol), xi};
}

// Plain interference cancellation: xe = xbar_k + f^H (y - H xbar).
FirOutput ic_le(const FrameCtx& ctx, const WindowedCovSpec& sp, const VecC& yw, const VecC& xbar,
                const FilterTaps& taps) {
  double nnz = 0;
  VecC r = yw;
  for (int i = 0; i < ctx.N; ++i) {
    cplx acc = 0.0;
    const int jhi = std::min(i + ctx.L - 1, ctx.W - 1);
    for (int j = i; j <= jhi; ++j) acc += sp.H(i, j) * xbar[j];
    nnz += jhi - i + 1;
    r[i] -= acc;
  }
  count_ops(4.0 * nnz, 4.0 * nnz + 2.0 * ctx.N);
  cplx dot = 0.0;
  for (int i = 0; i < ctx.N; ++i) dot += std::conj(taps.f[i]) * r[i];
  count_ops(4.0 * ctx.N, 4.0 * ctx.N);
  FirOutput out;
  out.xe = xbar[ctx.Npp] + dot;
  out.ve = std::max(1.0 / taps.xi - sp.var[ctx.Npp], kVarFloor);
  count_ops(1.0, 3.0);
  return out;
}

// Split-filter interference cancellation used by the decision-feedback
// family: xe = xbar_a(k) + f^H y - g^H xbar with g = H^H f, the causal and
// anti-causal halves of g applied to their own mean vectors. `target_var` is
// the anti-causal variance of the symbol under estimation.
struct IcSplit {
  FirOutput fir;
  VecC g;  // length W
};

IcSplit ic_dfe(const FrameCtx& ctx, const WindowedCovSpec& sp, const VecC& yw, const VecC& xbar,
               cplx target_mean, double target_var, const FilterTaps& taps) {
  IcSplit out;
  out.g.assign(ctx.W, cplx(0.0));
  double nnz = 0;
  for (int j = 0; j < ctx.W; ++j) {
    const int lo = std::max(0, j - ctx.L + 1);
    const int hi = std::min(ctx.N - 1, j);
    cplx acc = 0.0;
    for (int i = lo; i <= hi; ++i) acc += std::conj(sp.H(i, j)) * taps.f[i];
    nnz += std::max(0, hi - lo + 1);
    out.g[j] = acc;
  }
  count_ops(4.0 * nnz, 4.0 * nnz);
  cplx fy = 0.0;
  for (int i = 0; i < ctx.N; ++i) fy += std::conj(taps.f[i]) * yw[i];
  count_ops(4.0 * ctx.N, 4.0 * ctx.N);
  cplx ic = 0.0;
  for (int j = 0; j < ctx.W; ++j) ic += std::conj(out.g[j]) * xbar[j];
  count_ops(4.0 * ctx.W, 4.0 * ctx.W);
  out.fir.xe = target_mean + fy - ic;
  out.fir.ve = std::max(1.0 / taps.xi - target_var, kVarFloor);
  count_ops(1.0, 7.0);
  return out;
}

Stats prior_stats(const FrameCtx& ctx, const std::vector<VecD>& prior_pmfs) {
  Stats st(ctx.K);
  for (int k = 0; k < ctx.K; ++k)
    st.set(k, mapping::pmf_moments(prior_pmfs[k], ctx.c));
  return st;
}

std::vector<VecD> prior_pmfs_of(const FrameCtx& ctx) {
  std::vector<VecD> P(ctx.K);
  for (int k = 0; k < ctx.K; ++k)
    P[k] = mapping::prior_pmf((*ctx.fr.prior_llrs)[k], ctx.c);
  return P;
}

GaussianMsg capped(GaussianMsg g) {
  g.var = std::min(g.var, kMaxFeedbackVar);
  return g;
}

enum class DfePolicy { Ep, App, Papp, Happ };

EqResult run_dfe(const EqFrame& fr, DfePolicy pol, const EpSchedule& sched) {
  const FrameCtx ctx(fr);
  const auto P = prior_pmfs_of(ctx);
  const Stats pstats = prior_stats(ctx, P);

  const int passes = pol == DfePolicy::Ep ? sched.self_iters + 1 : 1;
  const double beta = pol == DfePolicy::Ep ? sched.beta : 0.0;

  EqResult res;
  res.fir.resize(ctx.K);
  res.post.resize(ctx.K);
  res.ext_llrs.resize(ctx.K);

  // Posterior variances of already-detected symbols, for HAPP's estimate of
  // the decision-error contribution.
  VecD gamma_c(ctx.K, 0.0);

  auto engine = make_engine(fr.direct_engine);
  Stats gen_prev = pstats;

  for (int s = 0; s < passes; ++s) {
    Stats gen_next = gen_prev;
    std::vector<int> ierr;
    WindowedCovSpec cur;

    for (int k = 0; k < ctx.K; ++k) {
      WindowedCovSpec next = ctx.spec(k, gen_prev, gen_next, k - 2);
      if (k == 0)
        engine->start(next);
      else
        engine->slide(cur, next);
      cur = std::move(next);

      if (k >= 1 && ctx.Npp >= 1 && gen_next.var[k - 1] != gen_prev.var[k - 1]) {
        engine->swap_var(gen_prev.var[k - 1], gen_next.var[k - 1], ctx.column(cur, ctx.Npp - 1));
        cur.var[ctx.Npp - 1] = gen_next.var[k - 1];
      }

      const FilterTaps taps = filter_at(ctx, *engine, cur);
      const VecC yw = ctx.window_obs(k);
      const VecC xbar = ctx.window_means(k, gen_prev, gen_next, k - 1);
      IcSplit step =
          ic_dfe(ctx, cur, yw, xbar, gen_prev.mean[k], gen_prev.var[k], taps);

      double ve_used = step.fir.ve;
      if (pol == DfePolicy::Happ) {
        double infl = 0.0;
        for (int j = 0; j < ctx.Npp; ++j) {
          const int sy = ctx.symbol_of(k, j);
          if (sy < 0) continue;
          infl += std::norm(step.g[j]) * gamma_c[sy];
        }
        count_ops(3.0 * ctx.Npp, 2.0 * ctx.Npp);
        ve_used += infl;
      }

      const GaussianMsg ext{step.fir.xe, ve_used};
      VecD post = mapping::posterior_pmf(P[k], ext, ctx.c);
      const GaussianMsg mom = mapping::pmf_moments(post, ctx.c);

      switch (pol) {
        case DfePolicy::Ep: {
          const auto div = mapping::gaussian_divide(mom, ext);
          if (!div) {
            gen_next.set(k, mom);
            ierr.push_back(k);
          } else {
            gen_next.set(k, capped(mapping::damp(*div, gen_prev.at(k), beta)));
          }
          break;
        }
        case DfePolicy::App:
          gen_next.set(k, mom);
          break;
        case DfePolicy::Papp:
        case DfePolicy::Happ:
          gen_next.set(k, {mom.mean, 0.0});
          gamma_c[k] = mom.var;
          break;
      }

      res.fir[k] = {step.fir.xe, ve_used};
      if (pol == DfePolicy::Happ) {
        const VecD post_plain = mapping::posterior_pmf(P[k], {step.fir.xe, step.fir.ve}, ctx.c);
        const VecD le_plain = mapping::extrinsic_llrs(post_plain, (*fr.prior_llrs)[k], ctx.c);
        VecD le = mapping::extrinsic_llrs(post, (*fr.prior_llrs)[k], ctx.c);
        for (int j = 0; j < ctx.c.q; ++j)
          if (le_plain[j] * le[j] < 0.0) le[j] = 0.0;
        res.ext_llrs[k] = std::move(le);
      } else {
        res.ext_llrs[k] = mapping::extrinsic_llrs(post, (*fr.prior_llrs)[k], ctx.c);
      }
      res.post[k] = std::move(post);
    }

    if (pol == DfePolicy::Ep)
      for (int k : ierr) gen_next.set(k, gen_prev.at(k));
    res.neg_var = std::move(ierr);
    gen_prev = std::move(gen_next);
  }
  return res;
}

}  // namespace

EqResult run_si_le_ic(const EqFrame& fr, const EpSchedule& sched) {
  const FrameCtx ctx(fr);
  const auto P = prior_pmfs_of(ctx);
  const Stats pstats = prior_stats(ctx, P);

  EqResult res;
  res.fir.resize(ctx.K);
  res.post.resize(ctx.K);
  res.ext_llrs.resize(ctx.K);

  auto engine = make_engine(fr.direct_engine);
  Stats curst = pstats;

  for (int s = 0; s <= sched.self_iters; ++s) {
    WindowedCovSpec cur;
    for (int k = 0; k < ctx.K; ++k) {
      WindowedCovSpec next = ctx.spec(k, curst, curst, -1);
      if (k == 0)
        engine->start(next);
      else
        engine->slide(cur, next);
      cur = std::move(next);

      const FilterTaps taps = filter_at(ctx, *engine, cur);
      const VecC yw = ctx.window_obs(k);
      const VecC xbar = ctx.window_means(k, curst, curst, -1);
      res.fir[k] = ic_le(ctx, cur, yw, xbar, taps);
      res.post[k] = mapping::posterior_pmf(P[k], {res.fir[k].xe, res.fir[k].ve}, ctx.c);
    }

    if (s < sched.self_iters) {
      Stats nextst = curst;
      for (int k = 0; k < ctx.K; ++k) {
        const GaussianMsg mom = mapping::pmf_moments(res.post[k], ctx.c);
        const auto div = mapping::gaussian_divide(mom, {res.fir[k].xe, res.fir[k].ve});
        if (div) nextst.set(k, capped(mapping::damp(*div, curst.at(k), sched.beta)));
      }
      curst = std::move(nextst);
    }
  }

  for (int k = 0; k < ctx.K; ++k)
    res.ext_llrs[k] = mapping::extrinsic_llrs(res.post[k], (*fr.prior_llrs)[k], ctx.c);
  return res;
}

EqResult run_le_ic(const EqFrame& fr) { return run_si_le_ic(fr, {0, 0.0}); }

EqResult run_dfe_ic_ep(const EqFrame& fr, const EpSchedule& sched) {
  return run_dfe(fr, DfePolicy::Ep, sched);
}

EqResult run_dfe_ic_app(const EqFrame& fr) { return run_dfe(fr, DfePolicy::App, {0, 0.0}); }

EqResult run_dfe_ic_papp(const EqFrame& fr) { return run_dfe(fr, DfePolicy::Papp, {0, 0.0}); }

EqResult run_dfe_ic_happ(const EqFrame& fr) { return run_dfe(fr, DfePolicy::Happ, {0, 0.0}); }

EqResult run_receiver(const std::string& name, const EqFrame& fr, const EpSchedule& sched) {
  if (name == "le-ic") return run_le_ic(fr);
  if (name == "si-le-ic") return run_si_le_ic(fr, sched);
  if (name == "dfe-ic-ep") return run_dfe_ic_ep(fr, {0, sched.beta});
  if (name == "si-dfe-ic-ep") return run_dfe_ic_ep(fr, sched);
  if (name == "dfe-ic-app") return run_dfe_ic_app(fr);
  if (name == "dfe-ic-papp") return run_dfe_ic_papp(fr);
  if (name == "dfe-ic-happ") return run_dfe_ic_happ(fr);
  throw ConfigInvalid("unknown receiver: " + name);
}

}  // namespace teq::equalizer
