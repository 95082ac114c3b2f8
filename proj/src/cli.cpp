#include "tdroute/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdroute/apf.hpp"
#include "tdroute/bench_harness.hpp"
#include "tdroute/coverage.hpp"
#include "tdroute/dca.hpp"
#include "tdroute/error.hpp"
#include "tdroute/network.hpp"
#include "tdroute/oracle.hpp"
#include "tdroute/time_domain.hpp"

namespace tdroute::cli {

namespace {

// Raised for flag combinations CLI11 cannot express; maps to exit 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct TableOptions {
  std::string tables;
  std::string table_mode = "wave";
  Seconds chi = 10;
  std::size_t table_size = kDefaultTableSize;
  bool perturb = false;
  bool per_link = false;
  bool allow_zero = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_slots;
};

void add_table_flags(CLI::App* cmd, TableOptions& o) {
  cmd->add_option("--tables", o.tables, "Table file, or `wave` / `random` to generate");
  cmd->add_option("--table-mode", o.table_mode, "Generator when --tables is not a file")
      ->check(CLI::IsMember({"wave", "random"}));
  cmd->add_option("--chi", o.chi, "Seconds per table slot")->check(CLI::Range(1, 60));
  cmd->add_option("--table-size", o.table_size, "Slots per generated table")->check(CLI::PositiveNumber);
  cmd->add_flag("--perturb", o.perturb, "Query the shared table at t + link length");
  cmd->add_flag("--per-link", o.per_link, "Generate one table per link");
  cmd->add_flag("--allow-zero", o.allow_zero, "Random tables may contain zero-velocity slots");
  cmd->add_option("--seed", o.seed, "Seed for every stochastic step");
  cmd->add_option("--max-slots", o.max_slots, "APF slot bound M (default 2P)")->check(CLI::PositiveNumber);
}

TableMode parse_mode(const std::string& s) { return s == "random" ? TableMode::Random : TableMode::Wave; }

std::uint64_t require_seed(const TableOptions& o, const char* why) {
  if (!o.seed) throw UsageError(std::string("--seed is required ") + why);
  return *o.seed;
}

// Everything a search needs besides the network; TravelCost points into it.
struct CostSetup {
  Tid tid;
  TimeTableBinding binding;
  ApfConfig apf;
};

std::unique_ptr<CostSetup> make_cost(const RoadNetwork& net, const TableOptions& o) {
  std::string mode_name = o.table_mode;
  std::optional<TimeTable> file_table;
  if (o.tables == "wave" || o.tables == "random") {
    mode_name = o.tables;
  } else if (!o.tables.empty()) {
    if (o.per_link) throw UsageError("--per-link cannot be combined with a table file");
    file_table = load_table(o.tables);
  }
  auto setup = std::make_unique<CostSetup>();
  if (file_table) {
    setup->tid = Tid::build(file_table->chi);
    setup->binding = TimeTableBinding::shared(std::move(*file_table), o.perturb);
  } else {
    const std::uint64_t seed = require_seed(o, "to generate tables");
    setup->tid = Tid::build(o.chi);
    const TableMode mode = parse_mode(mode_name);
    setup->binding = o.per_link ? generate_per_link(net, mode, o.table_size, seed, o.allow_zero, o.chi)
                                : TimeTableBinding::shared(
                                      generate_table(mode, o.table_size, seed, o.allow_zero, o.chi), o.perturb);
  }
  setup->apf = ApfConfig{&setup->tid, o.max_slots.value_or(default_max_slots(setup->binding.max_table_size()))};
  return setup;
}

void check_node(const RoadNetwork& net, long long v, const char* what) {
  if (v < 0 || static_cast<std::size_t>(v) >= net.node_count()) {
    throw UsageError(std::string(what) + " " + std::to_string(v) + " is not a node of the network");
  }
}

TieBreakMode parse_tie_break(const std::string& s) {
  if (s == "shortest") return TieBreakMode::ShortestLane;
  if (s == "longest") return TieBreakMode::LongestLane;
  return TieBreakMode::None;
}

nlohmann::json stats_json(const RunStats& s) {
  return {{"runtime_ms", static_cast<double>(s.total_nanos) / 1e6},
          {"atq", s.atq},
          {"dc_pct", 100.0 * s.dc_share()},
          {"sc_pct", 100.0 * s.sc_share()},
          {"hdm_ms", static_cast<double>(s.hdm_nanos) / 1e6},
          {"st_pairs", s.st_pairs}};
}

void write_tree(std::ostream& out, const SearchTree& tree) {
  for (NodeId v = 0; v < tree.labels.size(); ++v) {
    const Label& l = tree.labels[v];
    out << v << ' ' << (l.reached() ? l.arrival : -1) << ' '
        << (l.parent == kNoLink ? -1 : static_cast<long long>(l.parent)) << '\n';
  }
}

std::pair<Seconds, Seconds> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--window must be a:b");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a_text = text.substr(0, colon), b_text = text.substr(colon + 1);
    const long long a = std::stoll(a_text, &used_a), b = std::stoll(b_text, &used_b);
    if (used_a != a_text.size() || used_b != b_text.size()) throw UsageError("--window must be a:b");
    if (a < 0 || b < a) throw UsageError("--window " + text + " is empty");
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("--window must be a:b with integer seconds");
  }
}

std::vector<SearchTree> sample_trees(const RoadNetwork& net, const TravelCost& cost, NodeId s,
                                     const std::vector<Seconds>& departures) {
  std::vector<SearchTree> trees;
  for (Seconds t : departures) trees.push_back(run_dca(net, cost, s, t));
  return trees;
}

std::vector<std::uint32_t> parse_sizes(const std::string& text) {
  std::vector<std::uint32_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long k = std::stol(item, &used);
      if (used != item.size() || k < 2) throw UsageError("bad size `" + item + "`");
      sizes.push_back(static_cast<std::uint32_t>(k));
    } catch (const std::logic_error&) {
      throw UsageError("bad size `" + item + "`");
    }
  }
  if (sizes.empty()) throw UsageError("--sizes is empty");
  return sizes;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-dependent fastest paths on dynamic road networks", "tdroute"};
  app.require_subcommand(1);

  // gen
  std::uint32_t gen_k = 0;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out, gen_table_out;
  TableOptions gen_tables;
  auto* gen = app.add_subcommand("gen", "Generate a square grid network");
  gen->add_option("--k", gen_k, "Grid side")->required();
  gen->add_option("--seed", gen_seed, "Length seed")->required();
  gen->add_option("--out", gen_out, "Network file")->required();
  gen->add_option("--table-out", gen_table_out, "Also write a generated table");
  gen->add_option("--table-mode", gen_tables.table_mode)->check(CLI::IsMember({"wave", "random"}));
  gen->add_option("--table-size", gen_tables.table_size)->check(CLI::PositiveNumber);
  gen->add_option("--chi", gen_tables.chi)->check(CLI::Range(1, 60));
  gen->add_flag("--allow-zero", gen_tables.allow_zero);

  // run
  std::string net_path, tree_out, tie_break = "none";
  long long source = 0, target = 0;
  Seconds t0 = 0;
  TableOptions run_tables;
  auto* run = app.add_subcommand("run", "One-to-all DCA search");
  run->add_option("--net", net_path)->required();
  add_table_flags(run, run_tables);
  run->add_option("--source", source)->required();
  run->add_option("--t0", t0)->required()->check(CLI::NonNegativeNumber);
  run->add_option("--tie-break", tie_break)->check(CLI::IsMember({"none", "shortest", "longest"}));
  run->add_option("--out", tree_out, "Tree file (node d parent_link)");

  // apf
  long long apf_link = 0;
  Seconds apf_t = 0;
  TableOptions apf_tables;
  auto* apf = app.add_subcommand("apf", "Through-time of one link");
  apf->add_option("--net", net_path)->required();
  add_table_flags(apf, apf_tables);
  apf->add_option("--link", apf_link)->required();
  apf->add_option("--t", apf_t)->required()->check(CLI::NonNegativeNumber);

  // validate
  int trials = 10;
  TableOptions val_tables;
  auto* validate = app.add_subcommand("validate", "Cross-check DCA against the oracles");
  validate->add_option("--net", net_path)->required();
  add_table_flags(validate, val_tables);
  validate->add_option("--trials", trials)->check(CLI::PositiveNumber);

  // bench
  std::string suite = "all", sizes_text, bench_mode = "wave", bench_out = ".";
  std::optional<std::uint64_t> bench_seed;
  bool large = false;
  std::uint32_t chi_k = 100;
  int repeats = 1;
  auto* bench = app.add_subcommand("bench", "Regenerate the experiment tables as CSV");
  bench->add_option("--suite", suite)
      ->check(CLI::IsMember({"table1", "table2", "table3", "table4", "figures", "all"}));
  bench->add_option("--sizes", sizes_text, "Comma-separated grid sides");
  bench->add_option("--mode", bench_mode)->check(CLI::IsMember({"wave", "random"}));
  bench->add_option("--seed", bench_seed)->required();
  bench->add_option("--out", bench_out);
  bench->add_flag("--large", large, "Add g.1000, g.2000, g.3500");
  bench->add_option("--chi-size", chi_k, "Grid side for the chi sweep")->check(CLI::Range(2, 100000));
  bench->add_option("--repeats", repeats)->check(CLI::PositiveNumber);

  // coverage
  std::string cov_mode = "corners";
  std::vector<NodeId> cov_sources;
  bool parallel = false;
  TableOptions cov_tables;
  auto* coverage = app.add_subcommand("coverage", "All-to-all coverage from a source set");
  coverage->add_option("--net", net_path)->required();
  add_table_flags(coverage, cov_tables);
  coverage->add_option("--mode", cov_mode)->check(CLI::IsMember({"corners", "perimeter", "all", "explicit"}));
  coverage->add_option("--sources", cov_sources, "Explicit source ids");
  coverage->add_option("--t0", t0)->check(CLI::NonNegativeNumber);
  coverage->add_flag("--parallel", parallel, "Run sources concurrently");

  // zone
  int samples = 4;
  Seconds spacing = 600;
  std::optional<std::size_t> cap;
  std::string zone_out;
  TableOptions zone_tables;
  auto* zone = app.add_subcommand("zone", "Extract a hot zone for an s-t pair");
  zone->add_option("--net", net_path)->required();
  add_table_flags(zone, zone_tables);
  zone->add_option("--s", source)->required();
  zone->add_option("--t", target)->required();
  zone->add_option("--samples", samples)->check(CLI::PositiveNumber);
  zone->add_option("--spacing", spacing, "Seconds between sampled departures")->check(CLI::PositiveNumber);
  zone->add_option("--t0", t0, "First sampled departure")->check(CLI::NonNegativeNumber);
  zone->add_option("--cap", cap, "Zone size cap (default 8 sqrt n)")->check(CLI::PositiveNumber);
  zone->add_option("--out", zone_out, "Zone file");

  // bop
  std::string window_text, zone_in;
  Seconds step = 60;
  TableOptions bop_tables;
  auto* bop = app.add_subcommand("bop", "Best departure time within a window");
  bop->add_option("--net", net_path)->required();
  add_table_flags(bop, bop_tables);
  bop->add_option("--s", source)->required();
  bop->add_option("--t", target)->required();
  bop->add_option("--window", window_text, "a:b in seconds")->required();
  bop->add_option("--step", step)->check(CLI::PositiveNumber);
  bop->add_option("--zone", zone_in, "Zone file; extracted from the window when absent");
  bop->add_option("--samples", samples, "Departures sampled for zone extraction")->check(CLI::PositiveNumber);
  bop->add_option("--cap", cap)->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      const RoadNetwork net = generate_grid(gen_k, *gen_seed);
      save_network(net, gen_out);
      if (!gen_table_out.empty()) {
        save_table(generate_table(parse_mode(gen_tables.table_mode), gen_tables.table_size, *gen_seed + 1,
                                  gen_tables.allow_zero, gen_tables.chi),
                   gen_table_out);
      }
      out << nlohmann::json{{"k", gen_k}, {"n", net.node_count()}, {"E", net.link_count()}, {"out", gen_out}}.dump()
          << '\n';
      return kExitOk;
    }

    if (*bench) {
      bench::BenchConfig cfg;
      cfg.seed = *bench_seed;
      cfg.mode = parse_mode(bench_mode);
      cfg.repeats = repeats;
      cfg.sizes = sizes_text.empty() ? bench::kDeskSizes : parse_sizes(sizes_text);
      const char* env = std::getenv("TDROUTE_LARGE");
      if (large || (env && std::string(env) == "1")) {
        cfg.sizes.insert(cfg.sizes.end(), bench::kLargeSizes.begin(), bench::kLargeSizes.end());
      }
      const std::filesystem::path dir(bench_out);
      std::filesystem::create_directories(dir);
      auto note_skips = [&](const auto& report) {
        for (const auto& s : report.skipped) err << s.note << '\n';
      };
      const bool all = suite == "all";
      if (all || suite == "table1" || suite == "figures") {
        const auto report = bench::bench_performance(cfg);
        note_skips(report);
        if (all || suite == "table1") bench::write_csv(dir / "table1.csv", report.rows);
        if (all || suite == "figures") bench::emit_figure_data(dir, report.rows);
      }
      if (all || suite == "table2") {
        const auto report = bench::bench_overhead(cfg);
        note_skips(report);
        bench::write_csv(dir / "table2.csv", report.rows);
      }
      if (all || suite == "table3") {
        bench::write_csv(dir / "table3.csv", bench::bench_chi_sweep(chi_k, bench::kChiSweep, cfg));
      }
      if (all || suite == "table4") {
        const auto report = bench::bench_transport_stats(cfg);
        note_skips(report);
        bench::write_csv(dir / "table4.csv", report.rows);
      }
      out << nlohmann::json{{"suite", suite}, {"out", dir.string()}}.dump() << '\n';
      return kExitOk;
    }

    const RoadNetwork net = load_network(net_path);

    if (*run) {
      check_node(net, source, "--source");
      const auto setup = make_cost(net, run_tables);
      const TravelCost cost(setup->binding, setup->apf);
      const SearchTree tree = run_dca(net, cost, static_cast<NodeId>(source), t0, parse_tie_break(tie_break));
      if (!tree_out.empty()) {
        std::ofstream file(tree_out);
        if (!file) throw Error("cannot open " + tree_out + " for writing");
        write_tree(file, tree);
      }
      out << stats_json(tree.stats).dump() << '\n';
      return kExitOk;
    }

    if (*apf) {
      if (apf_link < 0 || static_cast<std::size_t>(apf_link) >= net.link_count()) {
        throw UsageError("--link " + std::to_string(apf_link) + " is not a link of the network");
      }
      const auto setup = make_cost(net, apf_tables);
      const TravelCost cost(setup->binding, setup->apf);
      const ThroughTime tt = cost.evaluate(net.link(static_cast<LinkId>(apf_link)), apf_t);
      nlohmann::json j{{"link", apf_link},
                       {"t", apf_t},
                       {"outcome", tt.completed() ? "completed" : "interrupted"},
                       {"kappa", tt.kappa},
                       {"queries", tt.slot_queries}};
      if (tt.completed()) {
        j["delta"] = tt.delta;
        j["arrival"] = apf_t + tt.delta;
      }
      out << j.dump() << '\n';
      return kExitOk;
    }

    if (*validate) {
      const auto setup = make_cost(net, val_tables);
      const TravelCost cost(setup->binding, setup->apf);
      std::mt19937_64 rng(require_seed(val_tables, "for validate"));
      const Seconds horizon = static_cast<Seconds>(setup->binding.max_table_size()) * setup->tid.chi();
      const bool tiny = net.node_count() <= oracle::kBruteForceMaxNodes;
      int agree = 0;
      for (int i = 0; i < trials; ++i) {
        const auto s = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, net.node_count() - 1)(rng));
        const Seconds depart = std::uniform_int_distribution<Seconds>(0, horizon - 1)(rng);
        const SearchTree dca = run_dca(net, cost, s, depart);
        const SearchTree ref = oracle::td_dijkstra(net, cost, s, depart);
        bool same = true;
        std::vector<Seconds> brute;
        if (tiny) brute = oracle::brute_force_arrivals(net, cost, s, depart, net.node_count());
        for (NodeId v = 0; v < net.node_count(); ++v) {
          same = same && dca.arrival(v) == ref.arrival(v);
          if (tiny) same = same && brute[v] == ref.arrival(v);
        }
        if (same) {
          ++agree;
        } else {
          err << "disagreement: source " << s << " t0 " << depart << '\n';
        }
      }
      out << agree << '/' << trials << " agree\n";
      return agree == trials ? kExitOk : kExitDomain;
    }

    if (*coverage) {
      SourceSet set;
      if (cov_mode == "corners") set.mode = SourceMode::Corners;
      if (cov_mode == "perimeter") set.mode = SourceMode::Perimeter;
      if (cov_mode == "all") set.mode = SourceMode::All;
      if (cov_mode == "explicit" || !cov_sources.empty()) {
        set.mode = SourceMode::Explicit;
        set.explicit_nodes = cov_sources;
      }
      const auto setup = make_cost(net, cov_tables);
      const TravelCost cost(setup->binding, setup->apf);
      const CoverageReport report =
          parallel ? run_coverage(net, cost, set, t0) : run_coverage_serial(net, cost, set, t0);
      double total_ms = 0;
      for (double ms : report.wall_ms) total_ms += ms;
      out << nlohmann::json{{"sources", report.sources_used},
                            {"st_pairs_covered", report.st_pairs_covered},
                            {"fraction", report.fraction},
                            {"wall_ms_total", total_ms}}
                 .dump()
          << '\n';
      return kExitOk;
    }

    if (*zone) {
      check_node(net, source, "--s");
      check_node(net, target, "--t");
      const auto setup = make_cost(net, zone_tables);
      const TravelCost cost(setup->binding, setup->apf);
      std::vector<Seconds> departures;
      for (int i = 0; i < samples; ++i) departures.push_back(t0 + i * spacing);
      const auto s = static_cast<NodeId>(source);
      const HotZone z = extract_zone(net, sample_trees(net, cost, s, departures), s, static_cast<NodeId>(target),
                                     cap.value_or(default_zone_cap(net.node_count())),
                                     static_cast<Seconds>(kWavePeriodSlots) * setup->tid.chi());
      if (!zone_out.empty()) save_zone(z, zone_out);
      out << nlohmann::json{{"size", z.nodes.size()},
                            {"links", z.induced_links.size()},
                            {"window", {z.window_a, z.window_b}}}
                 .dump()
          << '\n';
      return kExitOk;
    }

    if (*bop) {
      check_node(net, source, "--s");
      check_node(net, target, "--t");
      const auto [a, b] = parse_window(window_text);
      const auto setup = make_cost(net, bop_tables);
      const auto s = static_cast<NodeId>(source), t = static_cast<NodeId>(target);
      HotZone z;
      if (!zone_in.empty()) {
        z = load_zone(zone_in, net);
      } else {
        const TravelCost cost(setup->binding, setup->apf);
        std::vector<Seconds> departures;
        for (int i = 0; i < samples; ++i) {
          departures.push_back(samples == 1 ? a : a + (b - a) * i / (samples - 1));
        }
        z = extract_zone(net, sample_trees(net, cost, s, departures), s, t,
                         cap.value_or(default_zone_cap(net.node_count())), 0);
      }
      const BopResult best = solve_bop(z, setup->binding, setup->apf, s, t, a, b, step);
      out << nlohmann::json{{"best_t0", best.best_t0},
                            {"best_delta", best.best_delta},
                            {"trials", best.trials},
                            {"misses", best.misses}}
                 .dump()
          << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace tdroute::cli
