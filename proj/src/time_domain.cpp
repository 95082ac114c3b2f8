#include "tdroute/time_domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "tdroute/error.hpp"

namespace tdroute {

std::span<const int> standard_velocity_grades() {
  static const auto grades = [] {
    std::array<int, kVelocityGradeCount> g{};
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = 10 + 5 * static_cast<int>(j);
    return g;
  }();
  return grades;
}

Tid Tid::build(Seconds chi, std::span<const int> grades_kph) {
  if (chi < 1 || chi > 60) throw ConfigError("chi must be in [1, 60] seconds, got " + std::to_string(chi));
  if (grades_kph.empty() || grades_kph.size() > 255) throw ConfigError("velocity grade count must be in [1, 255]");
  Tid tid;
  tid.chi_ = chi;
  tid.columns_ = grades_kph.size() + 1;
  tid.kph_.assign(grades_kph.begin(), grades_kph.end());
  tid.cells_.assign(static_cast<std::size_t>(chi + 1) * tid.columns_, 0);
  for (std::size_t j = 0; j < grades_kph.size(); ++j) {
    if (grades_kph[j] <= 0) throw ConfigError("velocity grades must be positive");
    for (Seconds i = 0; i <= chi; ++i) {
      // kph * i / 3.6, rounded half up, in exact integer arithmetic.
      const Meters tenths = static_cast<Meters>(grades_kph[j]) * i * 10;
      tid.cells_[static_cast<std::size_t>(i) * tid.columns_ + j + 1] = (tenths + 18) / 36;
    }
  }
  return tid;
}

TimeTable wave_table(std::size_t slots, double phase, Seconds chi) {
  TimeTable table;
  table.chi = chi;
  table.slots.resize(slots);
  const double w = static_cast<double>(kWavePeriodSlots);
  for (std::size_t i = 0; i < slots; ++i) {
    const double x = 12.0 + 11.0 * std::sin(2.0 * std::numbers::pi * (static_cast<double>(i) + phase) / w);
    table.slots[i] = static_cast<Grade>(std::clamp(std::lround(x), 1L, 23L));
  }
  return table;
}

TimeTable generate_table(TableMode mode, std::size_t slots, std::uint64_t seed, bool allow_zero, Seconds chi) {
  if (slots == 0) throw ConfigError("table size must be positive");
  std::mt19937_64 rng(seed);
  if (mode == TableMode::Wave) {
    std::uniform_int_distribution<std::size_t> phase(0, kWavePeriodSlots - 1);
    return wave_table(slots, static_cast<double>(phase(rng)), chi);
  }
  TimeTable table;
  table.chi = chi;
  table.slots.resize(slots);
  std::uniform_int_distribution<int> grade(allow_zero ? 0 : 1, static_cast<int>(kVelocityGradeCount));
  for (auto& s : table.slots) s = static_cast<Grade>(grade(rng));
  return table;
}

TimeTableBinding TimeTableBinding::shared(TimeTable table, bool perturb) {
  if (table.slots.empty()) throw ConfigError("empty time table");
  TimeTableBinding b;
  b.mode_ = Mode::Shared;
  b.shared_ = std::move(table);
  b.perturb_ = perturb;
  return b;
}

TimeTableBinding TimeTableBinding::per_link(std::vector<TimeTable> tables) {
  for (const auto& t : tables) {
    if (t.slots.empty()) throw ConfigError("empty time table");
    if (t.chi != tables.front().chi) throw ConfigError("per-link tables must share one chi");
  }
  TimeTableBinding b;
  b.mode_ = Mode::PerLink;
  b.per_link_ = std::move(tables);
  return b;
}

std::size_t TimeTableBinding::max_table_size() const {
  if (mode_ == Mode::Shared) return shared_->size();
  std::size_t p = 0;
  for (const auto& t : per_link_) p = std::max(p, t.size());
  return p;
}

Seconds TimeTableBinding::chi() const {
  if (mode_ == Mode::Shared) return shared_->chi;
  return per_link_.empty() ? 10 : per_link_.front().chi;
}

TimeTableBinding generate_per_link(const RoadNetwork& net, TableMode mode, std::size_t slots, std::uint64_t seed,
                                   bool allow_zero, Seconds chi) {
  std::vector<TimeTable> tables;
  tables.reserve(net.link_count());
  for (std::size_t i = 0; i < net.link_count(); ++i) {
    tables.push_back(generate_table(mode, slots, seed + i, allow_zero, chi));
  }
  return TimeTableBinding::per_link(std::move(tables));
}

void write_table(std::ostream& out, const TimeTable& table) {
  out << "table " << table.size() << ' ' << table.chi << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << static_cast<int>(table.slots[i]) << (i + 1 == table.size() || (i + 1) % 30 == 0 ? '\n' : ' ');
  }
}

TimeTable read_table(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "unexpected end of file, expected header");
  ++line_no;
  std::istringstream header(line);
  std::string tag;
  long long p = -1, chi = -1;
  if (!(header >> tag >> p >> chi) || tag != "table" || p < 1 || chi < 1 || chi > 60) {
    throw ParseError(line_no, "malformed header, expected `table P chi_s`");
  }
  TimeTable table;
  table.chi = chi;
  table.slots.reserve(static_cast<std::size_t>(p));
  while (table.slots.size() < static_cast<std::size_t>(p) && std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::string token;
    while (row >> token) {
      int g = -1;
      try {
        std::size_t used = 0;
        g = std::stoi(token, &used);
        if (used != token.size()) g = -1;
      } catch (const std::exception&) {
        g = -1;
      }
      if (g < 0 || g > static_cast<int>(kVelocityGradeCount)) {
        throw ParseError(line_no, "grade index `" + token + "` outside [0, 23]");
      }
      if (table.slots.size() == static_cast<std::size_t>(p)) throw ParseError(line_no, "more than P grade indices");
      table.slots.push_back(static_cast<Grade>(g));
    }
  }
  if (table.slots.size() != static_cast<std::size_t>(p)) {
    throw ParseError(line_no + 1, "expected " + std::to_string(p) + " grade indices, found " +
                                      std::to_string(table.slots.size()));
  }
  return table;
}

void save_table(const TimeTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_table(out, table);
}

TimeTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_table(in);
}

}  // namespace tdroute
