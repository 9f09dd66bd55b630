#include "teq/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace teq::mapping {

namespace {

Constellation make_bpsk() {
  Constellation c;
  c.name = "bpsk";
  c.q = 1;
  c.M = 2;
  c.kw = 0.5;
  c.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
  return c;
}

Constellation make_qpsk() {
  Constellation c;
  c.name = "qpsk";
  c.q = 2;
  c.M = 4;
  c.kw = 1.0;
  c.points.resize(4);
  const double s = 1.0 / std::sqrt(2.0);
  for (int m = 0; m < 4; ++m) {
    const int b0 = (m >> 1) & 1;
    const int b1 = m & 1;
    c.points[m] = cplx((1 - 2 * b0) * s, (1 - 2 * b1) * s);
  }
  return c;
}

Constellation make_8psk() {
  Constellation c;
  c.name = "8psk";
  c.q = 3;
  c.M = 8;
  c.kw = 1.0;
  c.points.resize(8);
  for (int m = 0; m < 8; ++m) {
    const int label = m ^ (m >> 1);
    const double phi = 2.0 * std::numbers::pi * m / 8.0;
    c.points[label] = cplx(std::cos(phi), std::sin(phi));
  }
  return c;
}

Constellation make_16qam() {
  Constellation c;
  c.name = "16qam";
  c.q = 4;
  c.M = 16;
  c.kw = 1.0;
  c.points.resize(16);
  // Two-bit Gray code per axis: 00 01 11 10 sweep -3 -1 +1 +3.
  auto level = [](int b_hi, int b_lo) {
    const int idx = (b_hi << 1) | b_lo;
    switch (idx) {
      case 0: return -3.0;
      case 1: return -1.0;
      case 3: return 1.0;
      default: return 3.0;  // case 2
    }
  };
  const double s = 1.0 / std::sqrt(10.0);
  for (int m = 0; m < 16; ++m) {
    const int b0 = (m >> 3) & 1, b1 = (m >> 2) & 1, b2 = (m >> 1) & 1, b3 = m & 1;
    c.points[m] = cplx(level(b0, b1) * s, level(b2, b3) * s);
  }
  return c;
}

}  // namespace

const Constellation& constellation(const std::string& name) {
  static const Constellation bpsk = make_bpsk();
  static const Constellation qpsk = make_qpsk();
  static const Constellation psk8 = make_8psk();
  static const Constellation qam16 = make_16qam();
  if (name == "bpsk") return bpsk;
  if (name == "qpsk") return qpsk;
  if (name == "8psk") return psk8;
  if (name == "16qam") return qam16;
  throw ConfigInvalid("unknown constellation: " + name);
}

VecD prior_pmf(const VecD& la, const Constellation& c) {
  if (static_cast<int>(la.size()) != c.q)
    throw LengthMismatch("prior_pmf: need one LLR per bit of the label");
  VecD logp(c.M, 0.0);
  for (int m = 0; m < c.M; ++m) {
    double acc = 0.0;
    for (int j = 0; j < c.q; ++j) acc -= label_bit(m, j, c.q) * clip_llr(la[j]);
    logp[m] = acc;
  }
  const double mx = *std::max_element(logp.begin(), logp.end());
  VecD p(c.M);
  double sum = 0.0;
  for (int m = 0; m < c.M; ++m) {
    p[m] = std::max(std::exp(logp[m] - mx), kPmfFloor);
    sum += p[m];
  }
  if (!(sum > 0.0)) throw DegeneratePmf("prior_pmf: mass vanished");
  for (double& v : p) v /= sum;
  return p;
}

VecD posterior_pmf(const VecD& prior, const GaussianMsg& ext, const Constellation& c) {
  if (static_cast<int>(prior.size()) != c.M)
    throw LengthMismatch("posterior_pmf: prior size != constellation order");
  if (std::isinf(ext.var)) return prior;
  if (ext.var < 0.0) throw DegeneratePmf("posterior_pmf: negative observation variance");
  if (ext.var == 0.0) {
    // Point-mass limit: all probability on the nearest constellation point.
    int best = 0;
    double bestd = std::norm(c.points[0] - ext.mean);
    for (int m = 1; m < c.M; ++m) {
      const double d = std::norm(c.points[m] - ext.mean);
      if (d < bestd) {
        bestd = d;
        best = m;
      }
    }
    VecD p(c.M, 0.0);
    p[best] = 1.0;
    return p;
  }
  VecD logp(c.M);
  for (int m = 0; m < c.M; ++m)
    logp[m] = -c.kw * std::norm(c.points[m] - ext.mean) / ext.var + std::log(prior[m]);
  const double mx = *std::max_element(logp.begin(), logp.end());
  VecD p(c.M);
  double sum = 0.0;
  for (int m = 0; m < c.M; ++m) {
    p[m] = std::max(std::exp(logp[m] - mx), kPmfFloor);
    sum += p[m];
  }
  if (!(sum > 0.0)) throw DegeneratePmf("posterior_pmf: mass vanished");
  for (double& v : p) v /= sum;
  return p;
}

GaussianMsg pmf_moments(const VecD& p, const Constellation& c) {
  if (static_cast<int>(p.size()) != c.M)
    throw LengthMismatch("pmf_moments: pmf size != constellation order");
  cplx mu = 0.0;
  double e2 = 0.0;
  for (int m = 0; m < c.M; ++m) {
    mu += p[m] * c.points[m];
    e2 += p[m] * std::norm(c.points[m]);
  }
  GaussianMsg g;
  g.mean = mu;
  g.var = std::max(e2 - std::norm(mu), 0.0);
  return g;
}

std::optional<GaussianMsg> gaussian_divide(const GaussianMsg& post, const GaussianMsg& ext) {
  if (std::isinf(ext.var)) return post;
  const double v = ext.var;
  const double g = post.var;
  if (!(g < v)) return std::nullopt;
  GaussianMsg out;
  out.var = v * g / (v - g);
  out.mean = (post.mean * v - ext.mean * g) / (v - g);
  return out;
}

GaussianMsg damp(const GaussianMsg& fresh, const GaussianMsg& prev, double beta) {
  if (beta <= 0.0) return fresh;
  if (beta >= 1.0) return prev;
  if (fresh.var == 0.0) return fresh;
  if (prev.var == 0.0) return prev;
  const double wn = std::isinf(fresh.var) ? 0.0 : (1.0 - beta) / fresh.var;
  const double wp = std::isinf(prev.var) ? 0.0 : beta / prev.var;
  const double wsum = wn + wp;
  if (wsum == 0.0) return fresh;
  GaussianMsg out;
  out.var = 1.0 / wsum;
  out.mean = (wn * fresh.mean + wp * prev.mean) / wsum;
  return out;
}

VecD extrinsic_llrs(const VecD& post, const VecD& la, const Constellation& c) {
  if (static_cast<int>(post.size()) != c.M)
    throw LengthMismatch("extrinsic_llrs: pmf size != constellation order");
  if (static_cast<int>(la.size()) != c.q)
    throw LengthMismatch("extrinsic_llrs: need one prior LLR per bit");
  VecD le(c.q);
  for (int j = 0; j < c.q; ++j) {
    double s0 = 0.0, s1 = 0.0;
    for (int m = 0; m < c.M; ++m) {
      if (label_bit(m, j, c.q))
        s1 += post[m];
      else
        s0 += post[m];
    }
    s0 = std::max(s0, kPmfFloor);
    s1 = std::max(s1, kPmfFloor);
    le[j] = clip_llr(std::log(s0) - std::log(s1) - clip_llr(la[j]));
  }
  return le;
}

int hard_decide(const VecD& p) {
  int best = 0;
  for (int m = 1; m < static_cast<int>(p.size()); ++m)
    if (p[m] > p[best]) best = m;
  return best;
}

std::vector<VecD> chunk_llrs(const VecD& flat, int q) {
  if (q < 1 || flat.size() % q != 0) throw LengthMismatch("chunk_llrs: length not a multiple of q");
  std::vector<VecD> out(flat.size() / q);
  for (size_t k = 0; k < out.size(); ++k)
    out[k].assign(flat.begin() + k * q, flat.begin() + (k + 1) * q);
  return out;
}

VecD flatten_llrs(const std::vector<VecD>& blocks) {
  VecD out;
  if (blocks.empty()) return out;
  out.reserve(blocks.size() * blocks.front().size());
  for (const VecD& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace teq::mapping
