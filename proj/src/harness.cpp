#include "teq/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "teq/numerics.hpp"
#include "teq/turbo.hpp"

namespace teq::harness {

namespace {

using nlohmann::json;

const std::set<std::string> kReceiverNames = {
    "le-ic",      "si-le-ic",    "dfe-ic-ep",   "si-dfe-ic-ep",
    "dfe-ic-app", "dfe-ic-papp", "dfe-ic-happ", "mfb"};

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigInvalid("config field '" + field + "': " + why);
}

long get_long(const json& j, const std::string& field, long def, long lo, long hi) {
  if (!j.contains(field)) return def;
  if (!j[field].is_number_integer()) bad(field, "expected an integer");
  const long v = j[field].get<long>();
  if (v < lo || v > hi) bad(field, "out of range");
  return v;
}

std::string get_str(const json& j, const std::string& field, const std::string& def) {
  if (!j.contains(field)) return def;
  if (!j[field].is_string()) bad(field, "expected a string");
  return j[field].get<std::string>();
}

void check_keys(const json& j, const std::string& scope, const std::set<std::string>& allowed) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigInvalid("config: unknown field '" +
                          (scope.empty() ? item.key() : scope + "." + item.key()) + "'");
}

VecD parse_sweep(const json& j) {
  if (!j.contains("ebn0_db")) return {7.0};
  const json& e = j["ebn0_db"];
  VecD out;
  if (e.is_array()) {
    for (const auto& v : e) {
      if (!v.is_number()) bad("ebn0_db", "expected numbers");
      out.push_back(v.get<double>());
    }
  } else if (e.is_object()) {
    check_keys(e, "ebn0_db", {"start", "stop", "step"});
    if (!e.contains("start") || !e.contains("stop")) bad("ebn0_db", "needs start and stop");
    const double start = e["start"].get<double>();
    const double stop = e["stop"].get<double>();
    const double step = e.contains("step") ? e["step"].get<double>() : 1.0;
    if (!(step > 0.0)) bad("ebn0_db.step", "must be positive");
    if (stop < start) bad("ebn0_db", "stop below start");
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
  } else if (e.is_number()) {
    out.push_back(e.get<double>());
  } else {
    bad("ebn0_db", "expected a number, array, or {start, stop, step}");
  }
  if (out.empty()) bad("ebn0_db", "sweep is empty");
  return out;
}

template <class T>
std::vector<T> parse_scalar_or_list(const json& j, const std::string& field, double lo, double hi) {
  std::vector<T> out;
  if (!j.contains(field)) return out;
  const json& e = j[field];
  auto push = [&](const json& v) {
    if (!v.is_number()) bad(field, "expected numbers");
    const double d = v.get<double>();
    if (!(d >= lo && d <= hi)) bad(field, "value out of range");
    out.push_back(static_cast<T>(d));
  };
  if (e.is_array())
    for (const auto& v : e) push(v);
  else
    push(e);
  return out;
}

std::vector<std::string> parse_receiver_list(const json& e, const std::string& field,
                                             const std::set<std::string>& valid) {
  std::vector<std::string> out;
  if (!e.is_array()) bad(field, "expected an array of receiver names");
  for (const auto& v : e) {
    if (!v.is_string()) bad(field, "expected strings");
    const std::string name = v.get<std::string>();
    if (!valid.count(name)) bad(field, "unknown receiver '" + name + "'");
    out.push_back(name);
  }
  return out;
}

turbo::TurboConfig turbo_config_of(const CampaignConfig& cfg) {
  turbo::TurboConfig tc;
  tc.constel = &mapping::constellation(cfg.constellation);
  tc.ch = cfg.ch;
  tc.win = cfg.win ? *cfg.win : equalizer::WindowConfig::defaults(cfg.ch.L);
  tc.receiver = cfg.receiver;
  tc.coded = cfg.coded;
  tc.kb = cfg.kb;
  tc.g_fb = cfg.g_fb;
  tc.g_ff = cfg.g_ff;
  tc.turbo_iters = cfg.turbo_iters;
  tc.self_iters = cfg.self_iters;
  tc.betas = cfg.betas;
  return tc;
}

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.12g", v);
  return b;
}

}  // namespace

CampaignConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigInvalid("config: top level must be an object");
  check_keys(j, "",
             {"receiver",    "receivers", "constellation", "channel",       "taps_file",
              "kb",          "coded",     "generators",    "ebn0_db",       "turbo_iters",
              "self_iters",  "beta",      "window",        "stop",          "seed",
              "threads",     "ia_grid",   "exit_frames",   "block_symbols", "trajectory",
              "flops"});

  CampaignConfig cfg;
  cfg.receiver = get_str(j, "receiver", cfg.receiver);
  if (!kReceiverNames.count(cfg.receiver)) bad("receiver", "unknown receiver '" + cfg.receiver + "'");
  if (j.contains("receivers")) cfg.receivers = parse_receiver_list(j["receivers"], "receivers", kReceiverNames);

  cfg.constellation = get_str(j, "constellation", cfg.constellation);
  mapping::constellation(cfg.constellation);  // validates the name

  if (j.contains("taps_file")) {
    if (j.contains("channel")) bad("channel", "give either a preset or taps_file, not both");
    cfg.channel_name = get_str(j, "taps_file", "");
    cfg.ch = txchain::load_taps(cfg.channel_name);
  } else {
    cfg.channel_name = get_str(j, "channel", cfg.channel_name);
    cfg.ch = txchain::channel_preset(cfg.channel_name);
  }

  cfg.kb = static_cast<int>(get_long(j, "kb", cfg.kb, 1, 1 << 24));
  if (j.contains("coded")) {
    if (!j["coded"].is_boolean()) bad("coded", "expected a boolean");
    cfg.coded = j["coded"].get<bool>();
  }
  if (j.contains("generators")) {
    const json& g = j["generators"];
    if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() || !g[1].is_number_integer())
      bad("generators", "expected [feedback, feedforward] octal integers");
    cfg.g_fb = g[0].get<int>();
    cfg.g_ff = g[1].get<int>();
    if (cfg.g_fb < 2) bad("generators", "feedback generator must have memory");
  }

  cfg.ebn0_db = parse_sweep(j);
  cfg.turbo_iters = static_cast<int>(get_long(j, "turbo_iters", cfg.turbo_iters, 0, 1000));
  cfg.self_iters = parse_scalar_or_list<int>(j, "self_iters", 0, 1000);
  cfg.betas = parse_scalar_or_list<double>(j, "beta", 0.0, 1.0);

  if (j.contains("window")) {
    const json& w = j["window"];
    if (!w.is_object()) bad("window", "expected an object");
    check_keys(w, "window", {"n", "np", "nd"});
    const int nd = static_cast<int>(get_long(w, "nd", 2 * cfg.ch.L, 0, 4096));
    int np;
    if (w.contains("np")) {
      np = static_cast<int>(get_long(w, "np", 0, 0, 4096));
      if (w.contains("n")) bad("window", "give either n or np, not both");
    } else {
      const int n = static_cast<int>(get_long(w, "n", 3 * cfg.ch.L + 2, 1, 8192));
      np = n - nd - 1;
      if (np < 0) bad("window.n", "smaller than nd + 1");
    }
    cfg.win = equalizer::WindowConfig{np, nd};
  }

  if (j.contains("stop")) {
    const json& s = j["stop"];
    if (!s.is_object()) bad("stop", "expected an object");
    check_keys(s, "stop", {"min_frames", "min_frame_errors", "max_frames"});
    cfg.stop.min_frames = get_long(s, "min_frames", cfg.stop.min_frames, 1, 1L << 40);
    cfg.stop.min_frame_errors = get_long(s, "min_frame_errors", cfg.stop.min_frame_errors, 0, 1L << 40);
    cfg.stop.max_frames = get_long(s, "max_frames", cfg.stop.max_frames, 1, 1L << 40);
    if (cfg.stop.max_frames < cfg.stop.min_frames) bad("stop.max_frames", "below min_frames");
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) bad("seed", "expected an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.threads = static_cast<int>(get_long(j, "threads", cfg.threads, 1, 1024));

  if (j.contains("ia_grid")) {
    const json& g = j["ia_grid"];
    if (g.is_number_integer()) {
      const int n = g.get<int>();
      if (n < 2) bad("ia_grid", "need at least two points");
      for (int i = 0; i < n; ++i) cfg.ia_grid.push_back(static_cast<double>(i) / (n - 1));
    } else if (g.is_array()) {
      double prev = -1.0;
      for (const auto& v : g) {
        if (!v.is_number()) bad("ia_grid", "expected numbers");
        const double d = v.get<double>();
        if (d < 0.0 || d > 1.0 || d < prev) bad("ia_grid", "points must ascend within [0,1]");
        cfg.ia_grid.push_back(d);
        prev = d;
      }
      // an explicitly empty grid is allowed and yields an empty report
    } else {
      bad("ia_grid", "expected a point count or an array");
    }
  } else {
    for (int i = 0; i < 11; ++i) cfg.ia_grid.push_back(i / 10.0);
  }
  cfg.exit_frames = static_cast<int>(get_long(j, "exit_frames", cfg.exit_frames, 1, 1 << 24));
  cfg.block_symbols = static_cast<int>(get_long(j, "block_symbols", cfg.block_symbols, 8, 1 << 20));
  if (j.contains("trajectory")) {
    if (!j["trajectory"].is_boolean()) bad("trajectory", "expected a boolean");
    cfg.trajectory = j["trajectory"].get<bool>();
  }

  if (j.contains("flops")) {
    const json& f = j["flops"];
    if (!f.is_object()) bad("flops", "expected an object");
    check_keys(f, "flops", {"l", "k", "receivers"});
    if (f.contains("l")) {
      cfg.flop_l.clear();
      if (!f["l"].is_array()) bad("flops.l", "expected an array");
      for (const auto& v : f["l"]) {
        if (!v.is_number_integer() || v.get<int>() < 1) bad("flops.l", "expected positive integers");
        cfg.flop_l.push_back(v.get<int>());
      }
      if (cfg.flop_l.empty()) bad("flops.l", "empty");
    }
    cfg.flop_k = static_cast<int>(get_long(f, "k", cfg.flop_k, 1, 1 << 24));
    if (f.contains("receivers"))
      cfg.flop_receivers = parse_receiver_list(
          f["receivers"], "flops.receivers", {"le-ic-tuchler", "le-ic-chol", "dfe-ic-chol", "map"});
    if (cfg.flop_receivers.empty()) bad("flops.receivers", "empty");
  }
  return cfg;
}

CampaignConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

double noise_variance(const CampaignConfig& cfg, double ebn0_db) {
  const auto& c = mapping::constellation(cfg.constellation);
  double hnorm = 0.0;
  for (const cplx& t : cfg.ch.taps_at(0)) hnorm += std::norm(t);
  double rc = 1.0;
  if (cfg.coded) {
    const int kc = 2 * (cfg.kb + (std::bit_width(static_cast<unsigned>(cfg.g_fb)) - 1));
    rc = static_cast<double>(cfg.kb) / kc;
  }
  return hnorm / (c.q * rc * std::pow(10.0, ebn0_db / 10.0));
}

namespace {

struct FrameTally {
  std::vector<long> bit_errors;
  std::vector<long> frame_errors;
};

FrameTally run_point(const CampaignConfig& cfg, const turbo::TurboConfig& tc, int point,
                     long* frames_out) {
  const int iters = cfg.turbo_iters + 1;
  FrameTally tally{std::vector<long>(iters, 0), std::vector<long>(iters, 0)};
  long frames = 0;

  auto one_frame = [&](long fidx) {
    Rng rng = Rng::for_frame(cfg.seed, static_cast<std::uint64_t>(point),
                             static_cast<std::uint64_t>(fidx));
    return turbo::run_turbo_frame(tc, rng);
  };

  while (frames < cfg.stop.max_frames) {
    if (frames >= cfg.stop.min_frames &&
        tally.frame_errors[iters - 1] >= cfg.stop.min_frame_errors)
      break;
    const int batch = static_cast<int>(std::min<long>(64, cfg.stop.max_frames - frames));
    std::vector<turbo::FrameRun> results(batch);
    if (cfg.threads <= 1) {
      for (int i = 0; i < batch; ++i) results[i] = one_frame(frames + i);
    } else {
      std::atomic<int> next{0};
      auto work = [&]() {
        for (int i = next.fetch_add(1); i < batch; i = next.fetch_add(1))
          results[i] = one_frame(frames + i);
      };
      std::vector<std::thread> pool;
      const int nt = std::min(cfg.threads, batch);
      pool.reserve(nt);
      for (int t = 0; t < nt; ++t) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    for (const auto& run : results)
      for (int t = 0; t < iters; ++t) {
        tally.bit_errors[t] += run.iters[t].bit_errors;
        tally.frame_errors[t] += run.iters[t].frame_error ? 1 : 0;
      }
    frames += batch;
  }
  *frames_out = frames;
  return tally;
}

}  // namespace

std::vector<BerRow> run_ber_campaign(const CampaignConfig& cfg) {
  if (cfg.receivers.size() > 1)
    throw ConfigInvalid("config field 'receivers': ber campaigns take a single receiver");
  turbo::TurboConfig tc = turbo_config_of(cfg);
  if (!cfg.receivers.empty()) tc.receiver = cfg.receivers.front();

  const long denom_bits = cfg.kb;
  std::vector<BerRow> rows;
  for (size_t p = 0; p < cfg.ebn0_db.size(); ++p) {
    tc.ch.noise_var = noise_variance(cfg, cfg.ebn0_db[p]);
    long frames = 0;
    const FrameTally tally = run_point(cfg, tc, static_cast<int>(p), &frames);
    for (int t = 0; t <= cfg.turbo_iters; ++t) {
      BerRow row;
      row.ebn0_db = cfg.ebn0_db[p];
      row.iter = t;
      row.frames = frames;
      row.ber = static_cast<double>(tally.bit_errors[t]) / (static_cast<double>(denom_bits) * frames);
      row.bler = static_cast<double>(tally.frame_errors[t]) / static_cast<double>(frames);
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

std::vector<std::string> campaign_receivers(const CampaignConfig& cfg) {
  if (!cfg.receivers.empty()) return cfg.receivers;
  return {cfg.receiver};
}

analysis::DetectorSetup detector_of(const CampaignConfig& cfg, const std::string& receiver,
                                    double ebn0) {
  analysis::DetectorSetup det;
  det.receiver = receiver;
  det.ch = cfg.ch;
  det.ch.noise_var = noise_variance(cfg, ebn0);
  det.constel = &mapping::constellation(cfg.constellation);
  det.win = cfg.win ? *cfg.win : equalizer::WindowConfig::defaults(cfg.ch.L);
  det.sched.self_iters = cfg.self_iters.empty() ? 0 : cfg.self_iters.front();
  det.sched.beta = cfg.betas.empty() ? 0.0 : cfg.betas.front();
  det.block_symbols = cfg.block_symbols;
  det.frames = cfg.exit_frames;
  det.seed = cfg.seed;
  return det;
}

}  // namespace

std::vector<ExitRow> run_exit_curves(const CampaignConfig& cfg) {
  const std::vector<std::string> names = campaign_receivers(cfg);
  if (std::find(names.begin(), names.end(), "mfb") != names.end())
    throw ConfigInvalid("config field 'receivers': mfb has no transfer curve");
  const VecD& grid = cfg.ia_grid;
  std::vector<ExitRow> rows;
  for (const std::string& name : names)
    for (double ebn0 : cfg.ebn0_db) {
      const auto curve = analysis::exit_curve(detector_of(cfg, name, ebn0), grid);
      for (const auto& pt : curve) rows.push_back({name, ebn0, pt.ia, pt.ie});
    }
  return rows;
}

std::vector<TrajRow> run_trajectories(const CampaignConfig& cfg) {
  if (cfg.ebn0_db.size() != 1)
    throw ConfigInvalid("config field 'ebn0_db': trajectories need a single operating point");
  std::vector<TrajRow> rows;
  for (const std::string& name : campaign_receivers(cfg)) {
    if (name == "mfb") throw ConfigInvalid("config field 'receivers': mfb has no trajectory");
    analysis::TrajectorySetup ts;
    ts.det = detector_of(cfg, name, cfg.ebn0_db.front());
    ts.kb = cfg.kb;
    ts.g_fb = cfg.g_fb;
    ts.g_ff = cfg.g_ff;
    ts.turbo_iters = cfg.turbo_iters;
    const auto traj = analysis::mi_trajectory(ts);
    for (size_t t = 0; t < traj.size(); ++t)
      rows.push_back({name, static_cast<int>(t), traj[t].ia, traj[t].ie});
  }
  return rows;
}

std::vector<RateRow> run_rate_report(const CampaignConfig& cfg) {
  const VecD& grid = cfg.ia_grid;
  const int q = mapping::constellation(cfg.constellation).q;
  std::vector<RateRow> rows;
  for (const std::string& name : campaign_receivers(cfg)) {
    if (name == "mfb") throw ConfigInvalid("config field 'receivers': mfb has no transfer curve");
    for (double ebn0 : cfg.ebn0_db) {
      const auto curve = analysis::exit_curve(detector_of(cfg, name, ebn0), grid);
      rows.push_back({name, ebn0, analysis::achievable_rate(curve, q)});
    }
  }
  return rows;
}

std::vector<FlopRow> run_flop_report(const CampaignConfig& cfg) {
  using numerics::FlopReceiver;
  auto enum_of = [](const std::string& name) {
    if (name == "le-ic-tuchler") return FlopReceiver::LeIcTuchler;
    if (name == "le-ic-chol") return FlopReceiver::LeIcChol;
    if (name == "dfe-ic-chol") return FlopReceiver::DfeIcChol;
    return FlopReceiver::Map;
  };
  const int M = mapping::constellation(cfg.constellation).M;
  std::vector<FlopRow> rows;
  for (int L : cfg.flop_l) {
    const int N = cfg.win ? cfg.win->N() : 3 * L + 2;
    double baseline = 0.0;
    for (size_t r = 0; r < cfg.flop_receivers.size(); ++r) {
      const double total = numerics::flop_count(enum_of(cfg.flop_receivers[r]), L, N, M, cfg.flop_k);
      const double per_symbol = total / cfg.flop_k;
      if (r == 0) baseline = per_symbol;
      rows.push_back({cfg.flop_receivers[r], L, M, per_symbol, per_symbol / baseline});
    }
  }
  return rows;
}

std::string ber_csv(const std::vector<BerRow>& rows) {
  std::string out = "# teq-csv v1 ber\nebn0_db,iter,ber,bler,frames\n";
  for (const auto& r : rows)
    out += fmt(r.ebn0_db) + "," + std::to_string(r.iter) + "," + fmt(r.ber) + "," + fmt(r.bler) +
           "," + std::to_string(r.frames) + "\n";
  return out;
}

std::string exit_csv(const std::vector<ExitRow>& rows) {
  std::string out = "# teq-csv v1 exit\nreceiver,ebn0_db,i_a,i_e\n";
  for (const auto& r : rows)
    out += r.receiver + "," + fmt(r.ebn0_db) + "," + fmt(r.ia) + "," + fmt(r.ie) + "\n";
  return out;
}

std::string trajectory_csv(const std::vector<TrajRow>& rows) {
  std::string out = "# teq-csv v1 trajectory\nreceiver,iter,i_a,i_e\n";
  for (const auto& r : rows)
    out += r.receiver + "," + std::to_string(r.iter) + "," + fmt(r.ia) + "," + fmt(r.ie) + "\n";
  return out;
}

std::string rate_csv(const std::vector<RateRow>& rows) {
  std::string out = "# teq-csv v1 rate\nreceiver,ebn0_db,rate_bits\n";
  for (const auto& r : rows)
    out += r.receiver + "," + fmt(r.ebn0_db) + "," + fmt(r.rate) + "\n";
  return out;
}

std::string flops_csv(const std::vector<FlopRow>& rows) {
  std::string out = "# teq-csv v1 flops\nreceiver,l,m,flops_per_symbol,ratio\n";
  for (const auto& r : rows)
    out += r.receiver + "," + std::to_string(r.L) + "," + std::to_string(r.M) + "," +
           fmt(r.flops_per_symbol) + "," + fmt(r.ratio) + "\n";
  return out;
}

int selftest() {
  int failures = 0;
  auto check = [&](const char* label, bool ok) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", label);
    if (!ok) ++failures;
  };

  {
    const Bits zero(16, 0);
    const Bits cw = txchain::rsc_encode(zero);
    check("rsc all-zero codeword", std::all_of(cw.begin(), cw.end(), [](auto b) { return b == 0; }));
  }
  {
    Rng rng(11);
    const auto ilv = txchain::make_interleaver(97, rng);
    VecD v(97);
    for (int i = 0; i < 97; ++i) v[i] = i * 0.25;
    check("interleaver round trip", txchain::deinterleave(txchain::interleave(v, ilv), ilv) == v);
  }
  {
    Rng rng(12);
    Bits info(24);
    for (auto& b : info) b = rng.next_bit();
    const Bits cw = txchain::rsc_encode(info);
    VecD llrs(cw.size());
    for (size_t i = 0; i < cw.size(); ++i) llrs[i] = cw[i] ? -25.0 : 25.0;
    const auto dec = decoder::bcjr_decode(llrs, decoder::make_trellis());
    check("bcjr noiseless decode", dec.info == info);
  }
  {
    Rng rng(13);
    txchain::ChannelModel ch;
    ch.L = 3;
    VecC taps(3);
    double e = 0.0;
    for (auto& t : taps) {
      t = rng.next_cgauss(1.0);
      e += std::norm(t);
    }
    for (auto& t : taps) t /= std::sqrt(e);
    ch.taps = {taps};
    ch.noise_var = 0.1;
    const auto& c = mapping::constellation("qpsk");
    const int K = 12;
    Bits bits(K * c.q);
    for (auto& b : bits) b = rng.next_bit();
    const VecC x = txchain::map_bits(bits, c);
    const VecC y = txchain::apply_channel(x, ch, rng);
    std::vector<VecD> la(K, VecD(c.q));
    for (auto& blk : la)
      for (auto& v : blk) v = rng.next_gauss();
    equalizer::EqFrame fr;
    fr.y = &y;
    fr.ch = &ch;
    fr.constel = &c;
    fr.prior_llrs = &la;
    fr.win = equalizer::WindowConfig::defaults(ch.L);
    const auto fast = equalizer::run_le_ic(fr);
    fr.direct_engine = true;
    const auto ref = equalizer::run_le_ic(fr);
    double worst = 0.0;
    for (int k = 0; k < K; ++k) {
      worst = std::max(worst, std::abs(fast.fir[k].xe - ref.fir[k].xe) /
                                  std::max(1.0, std::abs(ref.fir[k].xe)));
      worst = std::max(worst, std::abs(fast.fir[k].ve - ref.fir[k].ve) / ref.fir[k].ve);
    }
    check("le-ic banded vs direct", worst < 1e-9);
  }
  check("j-function inversion", std::abs(analysis::j_function(analysis::j_inverse(0.5)) - 0.5) < 1e-4);
  {
    CampaignConfig cfg = parse_config(
        R"({"receiver":"le-ic","constellation":"bpsk","channel":"awgn","kb":64,"coded":false,)"
        R"("ebn0_db":[4],"stop":{"min_frames":1,"min_frame_errors":1,"max_frames":8}})");
    const std::string a = ber_csv(run_ber_campaign(cfg));
    const std::string b = ber_csv(run_ber_campaign(cfg));
    check("ber campaign determinism", !a.empty() && a == b);
  }
  return failures;
}

}  // namespace teq::harness
