// Generates the bundled CICIDS2017-style sample: 78 flow features plus a
// Label column, half benign and half attack traffic (a mix of flood, scan
// and ddos signatures), with a handful of dirty rows (Infinity/NaN/empty
// cells) matching the artifacts of real flow exporters.
//
// The feature distributions are synthetic but shaped like the real corpus:
// heavy-tailed timing columns, near-constant protocol columns, redundant
// size/rate columns driven by shared latent factors, and always-zero bulk
// columns.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowids/rng.hpp"

using flowids::Rng;

namespace {

constexpr int kNumFeatures = 78;

const char* kFeatureNames[kNumFeatures] = {
    "Destination Port", "Flow Duration", "Total Fwd Packets",
    "Total Backward Packets", "Total Length of Fwd Packets",
    "Total Length of Bwd Packets", "Fwd Packet Length Max",
    "Fwd Packet Length Min", "Fwd Packet Length Mean", "Fwd Packet Length Std",
    "Bwd Packet Length Max", "Bwd Packet Length Min", "Bwd Packet Length Mean",
    "Bwd Packet Length Std", "Flow Bytes/s", "Flow Packets/s", "Flow IAT Mean",
    "Flow IAT Std", "Flow IAT Max", "Flow IAT Min", "Fwd IAT Total",
    "Fwd IAT Mean", "Fwd IAT Std", "Fwd IAT Max", "Fwd IAT Min", "Bwd IAT Total",
    "Bwd IAT Mean", "Bwd IAT Std", "Bwd IAT Max", "Bwd IAT Min", "Fwd PSH Flags",
    "Bwd PSH Flags", "Fwd URG Flags", "Bwd URG Flags", "Fwd Header Length",
    "Bwd Header Length", "Fwd Packets/s", "Bwd Packets/s", "Min Packet Length",
    "Max Packet Length", "Packet Length Mean", "Packet Length Std",
    "Packet Length Variance", "FIN Flag Count", "SYN Flag Count",
    "RST Flag Count", "PSH Flag Count", "ACK Flag Count", "URG Flag Count",
    "CWE Flag Count", "ECE Flag Count", "Down/Up Ratio", "Average Packet Size",
    "Avg Fwd Segment Size", "Avg Bwd Segment Size", "Fwd Header Length.1",
    "Fwd Avg Bytes/Bulk", "Fwd Avg Packets/Bulk", "Fwd Avg Bulk Rate",
    "Bwd Avg Bytes/Bulk", "Bwd Avg Packets/Bulk", "Bwd Avg Bulk Rate",
    "Subflow Fwd Packets", "Subflow Fwd Bytes", "Subflow Bwd Packets",
    "Subflow Bwd Bytes", "Init_Win_bytes_forward", "Init_Win_bytes_backward",
    "act_data_pkt_fwd", "min_seg_size_forward", "Active Mean", "Active Std",
    "Active Max", "Active Min", "Idle Mean", "Idle Std", "Idle Max", "Idle Min"};

enum TrafficKind { kBenign = 0, kFlood = 1, kScan = 2, kDdos = 3 };

const char* label_for(int kind) {
  switch (kind) {
    case kFlood: return "DoS Hulk";
    case kScan: return "PortScan";
    case kDdos: return "DDoS";
    default: return "BENIGN";
  }
}

struct Row {
  std::array<double, kNumFeatures> f{};
  int kind = kBenign;
  bool burst = false;
  double latents[4] = {0, 0, 0, 0};
};

// Latent per-flow factors shared by many columns: traffic intensity,
// payload size, burstiness and session interactivity. Benign traffic mixes
// three service profiles; every class overlaps every factor, only the joint
// reading separates them.
struct Factors {
  double intensity, size, burst, session;
};

Factors draw_factors(int kind, Rng& rng) {
  static const double means[6][4] = {
      {0.30, 0.62, 0.22, 0.30},  // benign: web
      {0.12, 0.10, 0.50, 0.62},  // benign: dns/lookup
      {0.52, 0.25, 0.62, 0.95},  // benign: interactive session
      {1.00, 0.80, 0.12, 0.18},  // flood
      {0.85, 0.02, 1.05, 0.40},  // scan
      {1.00, 0.42, 0.55, 0.50},  // ddos
  };
  const int mode = kind == kBenign ? static_cast<int>(rng.below(3)) : kind + 2;
  constexpr double sd = 0.06;
  // Truncated spread keeps the service profiles from bleeding into each
  // other through extreme tails.
  auto dev = [&] { return sd * std::clamp(rng.normal(), -2.0, 2.0); };
  Factors f;
  f.intensity = means[mode][0] + dev();
  f.size = means[mode][1] + dev();
  f.burst = means[mode][2] + dev();
  f.session = means[mode][3] + dev();
  return f;
}

// Per-column noise on top of the shared factors. Any single column is a
// weak classifier; the signal only becomes usable when pooled.
constexpr double kColumnNoise = 0.06;
// Rare multiplicative spikes, mirroring exporter scale artifacts. They set
// the column maximum, so min-max squashes the informative bulk.
constexpr double kSpikeRate = 0.004;

// Fraction of long-lived flows: duration, inter-arrival, counts and volume
// columns all blow up together for these rows, as real exporters produce.
constexpr double kBurstRate = 0.004;

// How hard the class-independent activity level leaks into the volume and
// size columns. It is the dominant shared variance of the table.
constexpr double kActivityGain = 0.25;

Row make_row(int kind, Rng& rng) {
  Row row;
  row.kind = kind;
  const bool attack = kind != kBenign;
  const bool burst = rng.uniform() < kBurstRate;
  const Factors fac = draw_factors(kind, rng);
  row.burst = burst;
  row.latents[0] = fac.intensity;
  row.latents[1] = fac.size;
  row.latents[2] = fac.burst;
  row.latents[3] = fac.session;
  // Overall host/network activity at capture time: class-independent, but
  // it sways most counters at once.
  const double activity =
      kActivityGain * 0.20 * std::clamp(rng.normal(), -2.0, 2.0);

  auto noisy = [&](double f) {
    return f + kColumnNoise * std::clamp(rng.normal(), -3.0, 3.0);
  };
  // Factor-driven column on [base, base+span], never negative.
  auto sig = [&](double f, double base, double span) {
    return std::max(0.0, base + span * noisy(f));
  };
  // Same, plus the shared activity component.
  auto msig = [&](double f, double base, double span) {
    return std::max(0.0, base + span * (noisy(f) + activity));
  };
  auto spiked = [&](double v, double lo_e = 2.0, double hi_e = 4.5) {
    if (rng.uniform() < kSpikeRate) return v * std::exp(rng.uniform(lo_e, hi_e));
    return v;
  };
  auto lognormal = [&](double mu, double sigma) {
    return std::exp(mu + sigma * rng.normal());
  };

  // Destination port: service-typical values, scans roam half the time,
  // some benign flows use ephemeral ports too.
  if (kind == kScan && rng.uniform() < 0.5) {
    row.f[0] = 1.0 + std::floor(rng.uniform() * 65534.0);
  } else if (rng.uniform() < 0.15) {
    row.f[0] = 32768.0 + std::floor(rng.uniform() * 28232.0);
  } else if (attack) {
    const double p = rng.uniform();
    row.f[0] = p < 0.55 ? 80 : (p < 0.75 ? 8080 : (p < 0.9 ? 21 : 22));
  } else {
    const double p = rng.uniform();
    row.f[0] = p < 0.42 ? 80 : (p < 0.78 ? 443 : (p < 0.86 ? 53 : (p < 0.93 ? 22 : 3389)));
  }

  // Packet counts: intensity-driven, duplicated into subflows.
  const double count_mult = spiked(1.0, 2.0, 3.5);
  const double fwd_packets =
      std::floor(1.0 + count_mult * msig(fac.intensity, 2.0, 70.0));
  const double bwd_packets =
      std::floor(count_mult * msig(0.6 * fac.intensity + 0.4 * fac.session, 0.0, 50.0));
  row.f[2] = fwd_packets;
  row.f[3] = bwd_packets;
  row.f[62] = std::floor(fwd_packets * (0.9 + 0.2 * rng.uniform()));
  row.f[64] = std::floor(bwd_packets * (0.9 + 0.2 * rng.uniform()));
  row.f[68] = std::max(0.0, fwd_packets - std::floor(3.0 * rng.uniform()));

  // Packet sizes: size-factor family, swayed by the shared activity level.
  const double mean_fwd_len = msig(fac.size, 60.0, 1200.0);
  const double mean_bwd_len = msig(0.7 * fac.size + 0.3 * fac.session, 40.0, 1300.0);
  row.f[8] = mean_fwd_len;
  row.f[6] = mean_fwd_len * (1.2 + 0.9 * rng.uniform());
  row.f[7] = std::floor(std::min(mean_fwd_len, 40.0) * rng.uniform());
  row.f[9] = msig(0.5 * fac.size + 0.5 * fac.burst, 20.0, 700.0);
  row.f[12] = mean_bwd_len;
  row.f[10] = mean_bwd_len * (1.1 + 1.0 * rng.uniform());
  row.f[11] = std::floor(std::min(mean_bwd_len, 30.0) * rng.uniform());
  row.f[13] = msig(0.6 * fac.size + 0.4 * fac.session, 10.0, 680.0);

  // Byte totals: products of counts and sizes.
  row.f[4] = std::floor(mean_fwd_len * fwd_packets * 0.01);
  row.f[5] = std::floor(mean_bwd_len * std::max(1.0, bwd_packets) * 0.01);
  row.f[63] = std::floor(row.f[4] * (0.9 + 0.2 * rng.uniform()));
  row.f[65] = std::floor(row.f[5] * (0.9 + 0.2 * rng.uniform()));

  const double pkt_mean = 0.5 * (mean_fwd_len + mean_bwd_len);
  row.f[38] = std::floor(sig(fac.size, 0.0, 60.0));
  row.f[39] = pkt_mean * (1.4 + 0.8 * rng.uniform());
  row.f[40] = msig(fac.size, 50.0, 1150.0);
  row.f[41] = msig(0.5 * fac.size + 0.5 * fac.burst, 20.0, 660.0);
  row.f[42] = spiked(row.f[41] * row.f[41] * 1e-3, 3.0, 6.0);
  row.f[52] = msig(0.8 * fac.size + 0.2 * fac.intensity, 45.0, 1100.0);
  row.f[53] = mean_fwd_len * (0.94 + 0.12 * rng.uniform());
  row.f[54] = mean_bwd_len * (0.94 + 0.12 * rng.uniform());

  // Timing family: heavy-tailed with a weak burstiness link. These columns
  // end up crushed against zero after normalization, with the long-lived
  // rows parked at the column maximum.
  const double duration = lognormal(9.0 + 2.2 * (1.0 - fac.burst), 1.4);
  row.f[1] = std::floor(1.0 + duration);
  const double iat = duration / std::max(2.0, fwd_packets + bwd_packets);
  row.f[16] = iat;
  row.f[17] = iat * lognormal(0.0, 0.9);
  row.f[18] = iat * lognormal(1.6, 0.8);
  row.f[19] = iat * 0.05 * rng.uniform();
  row.f[20] = std::floor(duration * (0.5 + 0.45 * rng.uniform()));
  row.f[21] = row.f[20] / std::max(1.0, fwd_packets);
  row.f[22] = row.f[21] * lognormal(0.0, 0.9);
  row.f[23] = row.f[21] * lognormal(1.4, 0.8);
  row.f[24] = row.f[21] * 0.1 * rng.uniform();
  row.f[25] = std::floor(duration * (0.25 + 0.5 * rng.uniform()));
  row.f[26] = row.f[25] / std::max(1.0, bwd_packets);
  row.f[27] = row.f[26] * lognormal(0.0, 1.0);
  row.f[28] = row.f[26] * lognormal(1.3, 0.8);
  row.f[29] = row.f[26] * 0.1 * rng.uniform();

  // Rates: totals over duration, the classic Infinity-prone columns.
  const double seconds = std::max(duration, 50.0) / 1e6;
  row.f[14] = (row.f[4] + row.f[5]) / seconds;
  row.f[15] = (fwd_packets + bwd_packets) / seconds;
  row.f[36] = fwd_packets / seconds;
  row.f[37] = bwd_packets / seconds;

  // TCP flags: noisy views of the same latent behaviour that drives the
  // volume columns.
  const double syn_rate = std::clamp(0.05 + 0.6 * fac.burst, 0.0, 1.0);
  const double psh_f = std::clamp(0.35 + 0.5 * fac.session, 0.0, 1.0);
  row.f[44] = rng.uniform() < syn_rate ? 1.0 + std::floor(2.0 * rng.uniform()) : 0.0;
  row.f[43] = rng.uniform() < (0.2 + 0.5 * fac.session) ? 1.0 : 0.0;
  row.f[45] = rng.uniform() < 0.02 ? 1.0 : 0.0;
  row.f[46] = std::floor(std::max(0.0, psh_f * 9.0 * rng.uniform()));
  row.f[47] = std::floor(msig(fac.intensity, 1.0, 22.0));
  row.f[48] = rng.uniform() < 0.01 ? 1.0 : 0.0;
  row.f[49] = 0.0;
  row.f[50] = rng.uniform() < 0.02 ? 1.0 : 0.0;
  row.f[30] = rng.uniform() < psh_f ? 1.0 : 0.0;
  row.f[31] = 0.0;
  row.f[32] = rng.uniform() < 0.01 ? 1.0 : 0.0;
  row.f[33] = 0.0;

  // Header lengths trail the packet counts; .1 is the classic duplicate.
  row.f[34] = 20.0 * fwd_packets + 12.0 * std::floor(rng.uniform() * 2.0);
  row.f[35] = 20.0 * bwd_packets;
  row.f[55] = row.f[34];

  row.f[51] = bwd_packets > 0.0
                  ? std::floor(bwd_packets / std::max(1.0, fwd_packets))
                  : 0.0;

  // Bulk-transfer columns: always zero, as in the real exporter output.
  for (int j = 56; j <= 61; ++j) row.f[j] = 0.0;

  // TCP window sizes and segment minimum: mass at protocol defaults.
  const double w = rng.uniform();
  row.f[66] = w < 0.94 ? 65535.0
                       : (w < 0.97 ? 29200.0
                                   : (w < 0.99 ? 8192.0
                                               : std::floor(rng.uniform() * 65535.0)));
  const double w2 = rng.uniform();
  row.f[67] = w2 < 0.93 ? 65535.0
                        : (w2 < 0.96 ? 235.0
                                     : (w2 < 0.98 ? -1.0
                                                  : std::floor(rng.uniform() * 65535.0)));
  row.f[69] = rng.uniform() < 0.04 ? 32.0 : 20.0;

  // Active/idle: zero for short flows, enormous for the long-lived ones.
  if (burst || rng.uniform() < 0.1 + 0.08 * fac.session) {
    const double active = lognormal(10.5, 1.3);
    row.f[70] = active;
    row.f[71] = active * (0.1 + 0.6 * rng.uniform());
    row.f[72] = active * (1.2 + 1.5 * rng.uniform());
    row.f[73] = active * (0.2 + 0.6 * rng.uniform());
    const double idle = lognormal(13.5, 1.2);
    row.f[74] = idle;
    row.f[75] = idle * (0.05 + 0.4 * rng.uniform());
    row.f[76] = idle * (1.1 + 1.2 * rng.uniform());
    row.f[77] = idle * (0.3 + 0.6 * rng.uniform());
  }

  // Long-lived flows additionally blow the timing and rate columns out by
  // orders of magnitude, which squashes the ordinary bulk of those columns
  // against zero after normalization.
  if (burst) {
    static const int timing[] = {1,  14, 15, 16, 17, 18, 19, 20, 21, 22,
                                 23, 24, 25, 26, 27, 28, 29, 36, 37, 70,
                                 71, 72, 73, 74, 75, 76, 77};
    const double scale = rng.uniform(3.2, 4.4);
    for (const int j : timing)
      row.f[j] = std::floor(1.0 + (row.f[j] + 1.0) *
                                      std::exp(scale + 0.3 * rng.normal()));
  }
  return row;
}

std::string format_value(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic CICIDS2017-style sample CSV"};
  std::size_t rows = 7500;
  std::size_t dirty = 20;
  std::uint64_t seed = 10;
  std::string out = "sample_flows.csv";
  std::string latents_out;
  app.add_option("--rows", rows, "Clean rows to generate (attacks get half)");
  app.add_option("--dirty", dirty, "Rows with Infinity/NaN/empty artifacts");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--out", out, "Output CSV path");
  app.add_option("--latents-out", latents_out,
                 "Debug: write the per-row latent factors to this TSV");
  CLI11_PARSE(app, argc, argv);

  Rng rng(seed);

  // Exact class balance among the clean rows: half benign, attacks evenly
  // over the three kinds. Dirty rows are extra and get dropped downstream.
  struct Slot {
    int kind;
    bool dirty;
  };
  std::vector<Slot> plan;
  plan.reserve(rows + dirty);
  const std::size_t attacks = rows / 2;
  for (std::size_t i = 0; i < rows - attacks; ++i) plan.push_back({kBenign, false});
  for (std::size_t i = 0; i < attacks; ++i)
    plan.push_back({1 + static_cast<int>(i % 3), false});
  for (std::size_t i = 0; i < dirty; ++i)
    plan.push_back({static_cast<int>(rng.below(4)), true});
  rng.shuffle(plan);

  std::ofstream file(out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot write " << out << '\n';
    return 1;
  }
  for (int j = 0; j < kNumFeatures; ++j) file << kFeatureNames[j] << ',';
  file << "Label\n";

  std::ofstream latent_file;
  if (!latents_out.empty()) {
    latent_file.open(latents_out);
    latent_file << "kind\tburst\tintensity\tsize\tburstf\tsession\n";
  }
  const char* artifacts[] = {"Infinity", "NaN", "", "inf"};
  for (const auto& slot : plan) {
    Row row = make_row(slot.kind, rng);
    std::array<std::string, kNumFeatures> cells;
    for (int j = 0; j < kNumFeatures; ++j) cells[j] = format_value(row.f[j]);
    if (slot.dirty) {
      // Flow rate columns are where the real artifacts appear.
      const std::size_t artifact = rng.below(4);
      const std::size_t column = rng.uniform() < 0.7 ? 14 + rng.below(2)
                                                     : rng.below(kNumFeatures);
      cells[column] = artifacts[artifact];
    }
    for (int j = 0; j < kNumFeatures; ++j) file << cells[j] << ',';
    file << label_for(row.kind) << '\n';
    if (latent_file.is_open()) {
      latent_file << row.kind << '\t' << row.burst << '\t' << row.latents[0]
                  << '\t' << row.latents[1] << '\t' << row.latents[2] << '\t'
                  << row.latents[3] << '\n';
    }
  }
  std::cout << "wrote " << plan.size() << " rows (" << dirty
            << " dirty) to " << out << '\n';
  return 0;
}
