// turboeq: link-level turbo equalization simulator.
//
// Subcommands: ber, exit, rate, flops, selftest. Campaign parameters come
// from a JSON config (--config) with individual flag overrides; results go
// to --out or stdout as versioned CSV. Exit codes: 0 success, 2 bad config,
// 3 numerical failure.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teq/common.hpp"
#include "teq/harness.hpp"

namespace {

using teq::ConfigInvalid;

std::vector<double> parse_ebn0_arg(const std::string& s) {
  std::vector<double> out;
  const auto colon = s.find(':');
  try {
    if (colon != std::string::npos) {
      const auto colon2 = s.find(':', colon + 1);
      if (colon2 == std::string::npos) throw ConfigInvalid("--ebn0 range needs start:stop:step");
      const double start = std::stod(s.substr(0, colon));
      const double stop = std::stod(s.substr(colon + 1, colon2 - colon - 1));
      const double step = std::stod(s.substr(colon2 + 1));
      if (!(step > 0.0) || stop < start) throw ConfigInvalid("--ebn0 range is empty");
      for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    } else {
      size_t pos = 0;
      while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto piece = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(std::stod(piece));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
  } catch (const std::logic_error&) {
    throw ConfigInvalid("--ebn0: expected numbers as a,b,c or start:stop:step");
  }
  if (out.empty()) throw ConfigInvalid("--ebn0: empty sweep");
  return out;
}

template <class T>
std::vector<T> parse_list_arg(const std::string& s, const char* flag) {
  std::vector<T> out;
  size_t pos = 0;
  try {
    while (pos <= s.size()) {
      const auto comma = s.find(',', pos);
      const auto piece = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      out.push_back(static_cast<T>(std::stod(piece)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  } catch (const std::logic_error&) {
    throw ConfigInvalid(std::string(flag) + ": expected a comma-separated number list");
  }
  return out;
}

void emit(const std::string& csv, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigInvalid("cannot open output file: " + out_path);
  out << csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"link-level turbo equalization simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, receiver, ebn0_arg, self_iters_arg, beta_arg;
  std::uint64_t seed = 0;
  int iters = 0, threads = 0;
  app.add_option("--config", config_path, "JSON campaign config");
  app.add_option("--seed", seed, "master seed override");
  app.add_option("--receiver", receiver, "receiver name override");
  app.add_option("--ebn0", ebn0_arg, "Eb/N0 sweep override: a,b,c or start:stop:step (dB)");
  app.add_option("--iters", iters, "turbo iteration count override");
  app.add_option("--self-iters", self_iters_arg, "per-iteration self-iteration counts");
  app.add_option("--beta", beta_arg, "per-iteration damping factors");
  app.add_option("--threads", threads, "worker thread count override");
  app.add_option("--out", out_path, "output CSV path (default stdout)");

  auto* ber = app.add_subcommand("ber", "Monte Carlo BER/BLER sweep");
  auto* exitc = app.add_subcommand("exit", "EXIT transfer curves (or trajectories)");
  auto* rate = app.add_subcommand("rate", "area-theorem achievable rates");
  auto* flops = app.add_subcommand("flops", "analytic complexity report");
  auto* self = app.add_subcommand("selftest", "internal consistency checks");
  for (auto* sc : {ber, exitc, rate, flops, self}) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*self) return teq::harness::selftest() == 0 ? 0 : 3;

    teq::harness::CampaignConfig cfg =
        config_path.empty() ? teq::harness::parse_config("{}") : teq::harness::load_config(config_path);
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--receiver")) {
      cfg.receiver = receiver;
      cfg.receivers.clear();
    }
    if (app.count("--ebn0")) cfg.ebn0_db = parse_ebn0_arg(ebn0_arg);
    if (app.count("--iters")) {
      if (iters < 0) throw ConfigInvalid("--iters: must be nonnegative");
      cfg.turbo_iters = iters;
    }
    if (app.count("--self-iters")) cfg.self_iters = parse_list_arg<int>(self_iters_arg, "--self-iters");
    if (app.count("--beta")) cfg.betas = parse_list_arg<double>(beta_arg, "--beta");
    if (app.count("--threads")) {
      if (threads < 1) throw ConfigInvalid("--threads: must be positive");
      cfg.threads = threads;
    }

    std::string csv;
    if (*ber) {
      csv = teq::harness::ber_csv(teq::harness::run_ber_campaign(cfg));
    } else if (*exitc) {
      csv = cfg.trajectory
                ? teq::harness::trajectory_csv(teq::harness::run_trajectories(cfg))
                : teq::harness::exit_csv(teq::harness::run_exit_curves(cfg));
    } else if (*rate) {
      csv = teq::harness::rate_csv(teq::harness::run_rate_report(cfg));
    } else {
      csv = teq::harness::flops_csv(teq::harness::run_flop_report(cfg));
    }
    emit(csv, out_path);
  } catch (const ConfigInvalid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
