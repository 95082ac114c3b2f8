#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tdroute/time_domain.hpp"
#include "tdroute/types.hpp"

namespace tdroute::bench {

struct BenchConfig {
  std::vector<std::uint32_t> sizes{50, 100, 400};
  TableMode mode = TableMode::Wave;
  std::uint64_t seed = 1;
  Seconds chi = 10;
  std::size_t table_size = kDefaultTableSize;
  bool perturb = true;
  // Runtime is the median over this many identical searches.
  int repeats = 1;
  // Transport statistics pool the tree links of this many (source, t0) draws;
  // one search on a small grid sees only part of a wave period.
  int transport_samples = 10;
};

inline const std::vector<std::uint32_t> kDeskSizes{50, 100, 400};
inline const std::vector<std::uint32_t> kLargeSizes{1000, 2000, 3500};
inline const std::vector<Seconds> kChiSweep{10, 9, 8, 7, 6, 5, 4, 3};

/// One search on g.k: random source and random departure in [0, P * chi),
/// both drawn from the seed.
struct SizeRun {
  std::uint32_t k = 0;
  std::size_t n = 0;
  std::size_t links = 0;
  Seconds chi = 10;
  NodeId source = 0;
  Seconds t0 = 0;
  double runtime_ms = 0;
  std::uint64_t st_pairs = 0;
  double atq = 0;
  double sc_pct = 0;
  double dc_pct = 0;
  double hdm_ms = 0;
  double mean_length_m = 0;
  double mean_velocity_kph = 0;
  double mean_through_s = 0;
  double lambda = 0;
};

SizeRun run_size(std::uint32_t k, const BenchConfig& cfg);
/// Transport statistics only, pooled over cfg.transport_samples searches.
/// The first draw is the one run_size uses.
SizeRun run_transport(std::uint32_t k, const BenchConfig& cfg);

struct PerformanceRow {
  std::uint32_t k;
  double runtime_ms;
  std::uint64_t st_pairs;
  double t_per_pair_us;
  double atq;
};

struct OverheadRow {
  std::uint32_t k;
  double sc_pct;
  double dc_pct;
  double dc_over_sc;
  double hdm_ms;
};

struct ChiRow {
  Seconds chi;
  double atq;
  double sc_pct;
  double dc_pct;
  double dc_over_sc;
  double hdm_ms;
};

struct TransportRow {
  std::uint32_t k;
  double mean_length_m;
  double mean_velocity_kph;
  double through_time_s;
};

struct Skipped {
  std::uint32_t k;
  std::string note;
};

template <class Row>
struct Report {
  std::vector<Row> rows;
  std::vector<Skipped> skipped;
};

// Sizes whose estimated footprint exceeds physical memory are skipped.
bool fits_in_memory(std::uint32_t k, const BenchConfig& cfg, std::string* note = nullptr);

Report<PerformanceRow> bench_performance(const BenchConfig& cfg);
Report<OverheadRow> bench_overhead(const BenchConfig& cfg);
std::vector<ChiRow> bench_chi_sweep(std::uint32_t k, const std::vector<Seconds>& chis, const BenchConfig& cfg);
Report<TransportRow> bench_transport_stats(const BenchConfig& cfg);

PerformanceRow performance_row(const SizeRun& run);
OverheadRow overhead_row(const SizeRun& run);
TransportRow transport_row(const SizeRun& run);

void write_csv(const std::filesystem::path& path, const std::vector<PerformanceRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<OverheadRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<ChiRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<TransportRow>& rows);

/// figure1.csv (n, E, runtime_ms), figure2.csv (n, T/S), figure3.csv
/// (n, sqrt_n, log_n, scaled_runtime) where scaled_runtime = T/S(us) * 1e4.
void emit_figure_data(const std::filesystem::path& dir, const std::vector<PerformanceRow>& rows);

/// Least-squares slope of log(runtime) against log(n).
double runtime_exponent(const std::vector<PerformanceRow>& rows);

}  // namespace tdroute::bench
