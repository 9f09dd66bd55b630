// Campaign engine behind the CLI: JSON config parsing, seeded Monte Carlo
// BER/BLER sweeps with reproducible parallelism, EXIT/trajectory/rate
// campaigns, analytic FLOP reports, and versioned CSV emission.
#ifndef TEQ_HARNESS_HPP
#define TEQ_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teq/analysis.hpp"
#include "teq/equalizer.hpp"
#include "teq/txchain.hpp"

namespace teq::harness {

struct StopRule {
  long min_frames = 1;
  long min_frame_errors = 100;
  long max_frames = 10000;
};

struct CampaignConfig {
  std::string receiver = "dfe-ic-ep";
  std::vector<std::string> receivers;  // multi-receiver campaigns (exit, rate)
  std::string constellation = "bpsk";
  std::string channel_name = "proakis-c";
  txchain::ChannelModel ch;  // taps resolved at parse time; noise set per point
  int kb = 2048;
  bool coded = true;
  int g_fb = 7;
  int g_ff = 5;
  VecD ebn0_db = {7.0};
  int turbo_iters = 0;
  std::vector<int> self_iters;  // per turbo iteration, last entry repeats
  std::vector<double> betas;
  std::optional<equalizer::WindowConfig> win;  // defaults to N=3L+2, Nd=2L
  StopRule stop;
  std::uint64_t seed = 1;
  int threads = 1;

  // exit / rate campaigns
  VecD ia_grid;  // parser default: 11 uniform points; empty yields an empty report
  int exit_frames = 2000;
  int block_symbols = 256;
  bool trajectory = false;

  // flop report
  std::vector<int> flop_l = {4, 8, 16, 32, 64};
  int flop_k = 2048;
  std::vector<std::string> flop_receivers = {"le-ic-tuchler", "le-ic-chol", "dfe-ic-chol", "map"};
};

// Throws ConfigInvalid naming the offending field.
CampaignConfig parse_config(const std::string& json_text);
CampaignConfig load_config(const std::string& path);

// sigma_w^2 for a sweep point under this config's rate and constellation.
double noise_variance(const CampaignConfig& cfg, double ebn0_db);

struct BerRow {
  double ebn0_db = 0.0;
  int iter = 0;
  double ber = 0.0;
  double bler = 0.0;
  long frames = 0;
};
std::vector<BerRow> run_ber_campaign(const CampaignConfig& cfg);

struct ExitRow {
  std::string receiver;
  double ebn0_db = 0.0;
  double ia = 0.0;
  double ie = 0.0;
};
std::vector<ExitRow> run_exit_curves(const CampaignConfig& cfg);

struct TrajRow {
  std::string receiver;
  int iter = 0;
  double ia = 0.0;
  double ie = 0.0;
};
std::vector<TrajRow> run_trajectories(const CampaignConfig& cfg);

struct RateRow {
  std::string receiver;
  double ebn0_db = 0.0;
  double rate = 0.0;  // bits per channel use
};
std::vector<RateRow> run_rate_report(const CampaignConfig& cfg);

struct FlopRow {
  std::string receiver;
  int L = 0;
  int M = 0;
  double flops_per_symbol = 0.0;
  double ratio = 0.0;  // against the first configured receiver
};
std::vector<FlopRow> run_flop_report(const CampaignConfig& cfg);

std::string ber_csv(const std::vector<BerRow>& rows);
std::string exit_csv(const std::vector<ExitRow>& rows);
std::string trajectory_csv(const std::vector<TrajRow>& rows);
std::string rate_csv(const std::vector<RateRow>& rows);
std::string flops_csv(const std::vector<FlopRow>& rows);

// Fast internal consistency checks; returns 0 when everything passes and
// prints one line per check.
int selftest();

}  // namespace teq::harness

#endif
