#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tdroute/network.hpp"
#include "tdroute/types.hpp"

namespace tdroute {

/// Standard speed grades in km/h: grade j (1-based) is 10 + 5(j-1), so
/// grade 1 = 10 kph and grade 23 = 120 kph. Grade 0 is reserved for
/// zero velocity and is not part of this list.
inline constexpr std::size_t kVelocityGradeCount = 23;
std::span<const int> standard_velocity_grades();

inline int grade_kph(Grade g) { return g == 0 ? 0 : standard_velocity_grades()[g - 1]; }

/// Time Interval Domain: meters covered in i seconds (0..chi) at each grade.
/// cell(i, j) = round-half-up(kph_j * 1000/3600 * i); column 0 is all zeros.
class Tid {
 public:
  /// Throws ConfigError unless 1 <= chi <= 60 and every grade is positive.
  static Tid build(Seconds chi, std::span<const int> grades_kph = standard_velocity_grades());

  Seconds chi() const noexcept { return chi_; }
  std::size_t grade_count() const noexcept { return columns_ - 1; }
  Meters cell(Seconds seconds, Grade grade) const {
    return cells_[static_cast<std::size_t>(seconds) * columns_ + grade];
  }
  // Distance covered over one whole interval.
  Meters per_interval(Grade grade) const { return cell(chi_, grade); }
  int kph(Grade grade) const { return grade == 0 ? 0 : kph_[grade - 1]; }

 private:
  Seconds chi_ = 0;
  std::size_t columns_ = 0;
  std::vector<int> kph_;
  std::vector<Meters> cells_;
};

/// Circular sequence of grade indices, one per chi-second slot.
struct TimeTable {
  std::vector<Grade> slots;
  Seconds chi = 10;

  std::size_t size() const noexcept { return slots.size(); }
  friend bool operator==(const TimeTable&, const TimeTable&) = default;
};

/// The cursor wraps: slots[index mod P].
inline Grade velocity_at(const TimeTable& table, std::uint64_t index) {
  return table.slots[index % table.slots.size()];
}

enum class TableMode { Wave, Random };

inline constexpr std::size_t kWavePeriodSlots = 360;
inline constexpr std::size_t kDefaultTableSize = 8640;

/// Sinusoid over grades 1..23 with period kWavePeriodSlots:
/// slot i = clamp(round(12 + 11 sin(2 pi (i + phase) / W)), 1, 23).
TimeTable wave_table(std::size_t slots, double phase, Seconds chi = 10);

/// Seeded table. Wave draws its phase from the seed; random draws every slot
/// uniformly from 1..23, or 0..23 when allow_zero is set.
TimeTable generate_table(TableMode mode, std::size_t slots, std::uint64_t seed, bool allow_zero = false,
                         Seconds chi = 10);

/// How links map onto tables: one table shared by all links, or one per link.
class TimeTableBinding {
 public:
  enum class Mode { Shared, PerLink };

  static TimeTableBinding shared(TimeTable table, bool perturb = false);
  static TimeTableBinding per_link(std::vector<TimeTable> tables);

  Mode mode() const noexcept { return mode_; }
  bool perturb() const noexcept { return perturb_; }
  const TimeTable& table_for(LinkId link) const {
    return mode_ == Mode::Shared ? *shared_ : per_link_[link];
  }
  const std::optional<TimeTable>& shared_table() const noexcept { return shared_; }
  std::span<const TimeTable> per_link_tables() const noexcept { return per_link_; }
  // Largest table size across the binding.
  std::size_t max_table_size() const;
  Seconds chi() const;

 private:
  Mode mode_ = Mode::Shared;
  std::optional<TimeTable> shared_;
  std::vector<TimeTable> per_link_;
  bool perturb_ = false;
};

/// Shared tables with perturbation are queried at t + length_m; the
/// physical departure time is untouched. Identity otherwise.
inline Seconds perturbed_query_time(Seconds t, const Link& link, const TimeTableBinding& binding) {
  return binding.mode() == TimeTableBinding::Mode::Shared && binding.perturb() ? t + link.length_m : t;
}

// One generated table per link; link i uses seed + i.
TimeTableBinding generate_per_link(const RoadNetwork& net, TableMode mode, std::size_t slots, std::uint64_t seed,
                                   bool allow_zero = false, Seconds chi = 10);

void write_table(std::ostream& out, const TimeTable& table);
TimeTable read_table(std::istream& in);
void save_table(const TimeTable& table, const std::filesystem::path& path);
TimeTable load_table(const std::filesystem::path& path);

}  // namespace tdroute
