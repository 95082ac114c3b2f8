#include "tdroute/bench_harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <tuple>
#include <utility>

#include <unistd.h>

#include "tdroute/apf.hpp"
#include "tdroute/dca.hpp"
#include "tdroute/error.hpp"
#include "tdroute/network.hpp"

namespace tdroute::bench {

namespace {

std::string inst(std::uint32_t k) { return "g." + std::to_string(k); }

double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.setf(std::ios::fixed);
  return out;
}

}  // namespace

namespace {

// Builds g.k with its table and cost, then hands them to `body` along with
// the (seed, k) generator that draws sources and departures.
template <class Body>
auto with_instance(std::uint32_t k, const BenchConfig& cfg, Body body) {
  const RoadNetwork net = generate_grid(k, cfg.seed);
  const Tid tid = Tid::build(cfg.chi);
  const auto binding =
      TimeTableBinding::shared(generate_table(cfg.mode, cfg.table_size, cfg.seed + 1, false, cfg.chi), cfg.perturb);
  const ApfConfig apf{&tid, default_max_slots(cfg.table_size)};
  const TravelCost cost(binding, apf);
  // Source and departure depend on (seed, k) only, so a chi sweep reuses them.
  std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ull + k);
  return body(net, cost, rng);
}

std::pair<NodeId, Seconds> draw_query(const RoadNetwork& net, const BenchConfig& cfg, std::mt19937_64& rng) {
  const auto source = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, net.node_count() - 1)(rng));
  const Seconds t0 = std::uniform_int_distribution<Seconds>(0, static_cast<Seconds>(cfg.table_size) * 10 - 1)(rng);
  return {source, t0};
}

struct LinkTotals {
  double length = 0, time = 0;
  std::size_t count = 0;

  void add_tree(const RoadNetwork& net, const SearchTree& tree) {
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (v == tree.source || !tree.reached(v)) continue;
      const Link& link = net.link(tree.labels[v].parent);
      length += static_cast<double>(link.length_m);
      time += static_cast<double>(tree.arrival(v) - tree.arrival(link.from));
      ++count;
    }
  }
  void fill(SizeRun& run) const {
    if (count == 0) return;
    run.mean_length_m = length / static_cast<double>(count);
    run.mean_velocity_kph = 3.6 * length / time;
    run.mean_through_s = time / static_cast<double>(count);
  }
};

}  // namespace

SizeRun run_size(std::uint32_t k, const BenchConfig& cfg) {
  return with_instance(k, cfg, [&](const RoadNetwork& net, const TravelCost& cost, std::mt19937_64& rng) {
    SizeRun run;
    run.k = k;
    run.n = net.node_count();
    run.links = net.link_count();
    run.chi = cfg.chi;
    std::tie(run.source, run.t0) = draw_query(net, cfg, rng);

    std::vector<double> runtimes;
    SearchTree tree;
    for (int rep = 0; rep < std::max(1, cfg.repeats); ++rep) {
      tree = run_dca(net, cost, run.source, run.t0);
      runtimes.push_back(static_cast<double>(tree.stats.total_nanos) / 1e6);
    }
    std::nth_element(runtimes.begin(), runtimes.begin() + runtimes.size() / 2, runtimes.end());
    run.runtime_ms = runtimes[runtimes.size() / 2];

    const RunStats& stats = tree.stats;
    run.st_pairs = stats.st_pairs;
    run.atq = stats.atq;
    run.sc_pct = 100.0 * stats.sc_share();
    run.dc_pct = 100.0 * stats.dc_share();
    run.hdm_ms = static_cast<double>(stats.hdm_nanos) / 1e6;
    run.lambda = stats.lambda(net.node_count());

    LinkTotals totals;
    totals.add_tree(net, tree);
    totals.fill(run);
    return run;
  });
}

SizeRun run_transport(std::uint32_t k, const BenchConfig& cfg) {
  return with_instance(k, cfg, [&](const RoadNetwork& net, const TravelCost& cost, std::mt19937_64& rng) {
    SizeRun run;
    run.k = k;
    run.n = net.node_count();
    run.links = net.link_count();
    run.chi = cfg.chi;
    LinkTotals totals;
    for (int i = 0; i < std::max(1, cfg.transport_samples); ++i) {
      const auto [source, t0] = draw_query(net, cfg, rng);
      if (i == 0) std::tie(run.source, run.t0) = std::pair{source, t0};
      totals.add_tree(net, run_dca(net, cost, source, t0));
    }
    totals.fill(run);
    return run;
  });
}

bool fits_in_memory(std::uint32_t k, const BenchConfig& cfg, std::string* note) {
  const double n = static_cast<double>(k) * k;
  const double links = 4.0 * k * (k - 1);
  // Network (links + two CSR indexes), labels, two stores, per-node scratch.
  const double bytes = links * (24 + 8) + n * (8 + 8) + n * 24 + n * (8 + 8 + 80) + n * 8 +
                       static_cast<double>(cfg.table_size);
  const double physical = static_cast<double>(sysconf(_SC_PHYS_PAGES)) * static_cast<double>(sysconf(_SC_PAGE_SIZE));
  const bool ok = bytes < 0.8 * physical;
  if (!ok && note) {
    *note = inst(k) + " skipped: needs about " + std::to_string(static_cast<long long>(bytes / 1e6)) +
            " MB, host has " + std::to_string(static_cast<long long>(physical / 1e6)) + " MB";
  }
  return ok;
}

PerformanceRow performance_row(const SizeRun& run) {
  return {run.k, run.runtime_ms, run.st_pairs, ratio(run.runtime_ms * 1000.0, static_cast<double>(run.st_pairs)),
          run.atq};
}

OverheadRow overhead_row(const SizeRun& run) {
  return {run.k, run.sc_pct, run.dc_pct, ratio(run.dc_pct, run.sc_pct), run.hdm_ms};
}

TransportRow transport_row(const SizeRun& run) {
  return {run.k, run.mean_length_m, run.mean_velocity_kph, ratio(run.mean_length_m, run.mean_velocity_kph / 3.6)};
}

namespace {

template <class Row, class Make>
Report<Row> per_size(const BenchConfig& cfg, Make make) {
  Report<Row> report;
  for (auto k : cfg.sizes) {
    std::string note;
    if (!fits_in_memory(k, cfg, &note)) {
      report.skipped.push_back({k, note});
      continue;
    }
    report.rows.push_back(make(run_size(k, cfg)));
  }
  return report;
}

}  // namespace

Report<PerformanceRow> bench_performance(const BenchConfig& cfg) {
  return per_size<PerformanceRow>(cfg, performance_row);
}

Report<OverheadRow> bench_overhead(const BenchConfig& cfg) { return per_size<OverheadRow>(cfg, overhead_row); }

Report<TransportRow> bench_transport_stats(const BenchConfig& cfg) {
  Report<TransportRow> report;
  for (auto k : cfg.sizes) {
    std::string note;
    if (!fits_in_memory(k, cfg, &note)) {
      report.skipped.push_back({k, note});
      continue;
    }
    report.rows.push_back(transport_row(run_transport(k, cfg)));
  }
  return report;
}

std::vector<ChiRow> bench_chi_sweep(std::uint32_t k, const std::vector<Seconds>& chis, const BenchConfig& cfg) {
  std::vector<ChiRow> rows;
  for (Seconds chi : chis) {
    BenchConfig at = cfg;
    at.chi = chi;
    const SizeRun run = run_size(k, at);
    rows.push_back({chi, run.atq, run.sc_pct, run.dc_pct, ratio(run.dc_pct, run.sc_pct), run.hdm_ms});
  }
  return rows;
}

void write_csv(const std::filesystem::path& path, const std::vector<PerformanceRow>& rows) {
  auto out = open_csv(path);
  out << "Inst.,T(ms),s-t-pairs(S),T/S(µs),ATQ\n";
  for (const auto& r : rows) {
    out << inst(r.k) << ',' << std::setprecision(3) << r.runtime_ms << ',' << r.st_pairs << ','
        << std::setprecision(6) << r.t_per_pair_us << ',' << std::setprecision(2) << r.atq << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<OverheadRow>& rows) {
  auto out = open_csv(path);
  out << "Inst.,SC,DC,DC/SC,HDM(ms)\n";
  for (const auto& r : rows) {
    out << inst(r.k) << ',' << std::setprecision(2) << r.sc_pct << ',' << r.dc_pct << ',' << r.dc_over_sc << ','
        << std::setprecision(3) << r.hdm_ms << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<ChiRow>& rows) {
  auto out = open_csv(path);
  out << "χ,ATQ,SC,DC,DC/SC,HDM(ms)\n";
  for (const auto& r : rows) {
    out << r.chi << ',' << std::setprecision(2) << r.atq << ',' << r.sc_pct << ',' << r.dc_pct << ','
        << r.dc_over_sc << ',' << std::setprecision(3) << r.hdm_ms << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<TransportRow>& rows) {
  auto out = open_csv(path);
  out << "Inst.,L(meter),V(kph),TT(sec.)\n";
  for (const auto& r : rows) {
    out << inst(r.k) << ',' << std::setprecision(2) << r.mean_length_m << ',' << r.mean_velocity_kph << ','
        << r.through_time_s << '\n';
  }
}

void emit_figure_data(const std::filesystem::path& dir, const std::vector<PerformanceRow>& rows) {
  std::filesystem::create_directories(dir);
  auto f1 = open_csv(dir / "figure1.csv");
  auto f2 = open_csv(dir / "figure2.csv");
  auto f3 = open_csv(dir / "figure3.csv");
  f1 << "n,E,runtime_ms\n";
  f2 << "n,T/S\n";
  f3 << "n,sqrt_n,log_n,scaled_runtime\n";
  for (const auto& r : rows) {
    const std::uint64_t n = static_cast<std::uint64_t>(r.k) * r.k;
    const std::uint64_t links = 4ull * r.k * (r.k - 1);
    f1 << n << ',' << links << ',' << std::setprecision(3) << r.runtime_ms << '\n';
    f2 << n << ',' << std::setprecision(6) << r.t_per_pair_us << '\n';
    f3 << n << ',' << std::setprecision(3) << std::sqrt(static_cast<double>(n)) << ','
       << std::log(static_cast<double>(n)) << ',' << r.t_per_pair_us * 1e4 << '\n';
  }
}

double runtime_exponent(const std::vector<PerformanceRow>& rows) {
  if (rows.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.k) * r.k);
    const double y = std::log(r.runtime_ms);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(rows.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace tdroute::bench
