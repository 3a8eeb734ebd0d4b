#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rhino/world.hpp"

namespace rhino {

/// Cell (0, 0) has its min corner at `origin`; ix runs along +x, iy along +z.
struct GridSpec {
  Vec3 origin;
  double cell_size = 0.25;
  int width = 1;
  int height = 1;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RobotFootprint {
  double radius = 0.35;
  double clearance_height = 1.2;

  friend bool operator==(const RobotFootprint&, const RobotFootprint&) = default;
};

/// Everything a grid is built against; update_cells refuses a mismatching config.
struct TraversabilityConfig {
  GridSpec spec;
  RobotFootprint footprint;
  double slope_max = 0.5235987755982988;  // 30 degrees
  double ground_skip = 0.05;              // obstacle volume starts this far above ground

  friend bool operator==(const TraversabilityConfig&, const TraversabilityConfig&) = default;
};

void validate(const TraversabilityConfig& config);

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Blocked = 2 };

struct Cell {
  int ix = 0;
  int iy = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

class TraversabilityGrid {
 public:
  TraversabilityGrid() = default;
  explicit TraversabilityGrid(TraversabilityConfig config);

  const TraversabilityConfig& config() const { return config_; }
  const GridSpec& spec() const { return config_.spec; }
  int width() const { return config_.spec.width; }
  int height() const { return config_.spec.height; }

  bool in_bounds(Cell c) const {
    return c.ix >= 0 && c.iy >= 0 && c.ix < width() && c.iy < height();
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.iy) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(c.ix);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % width()), static_cast<int>(index / width())};
  }

  /// Out-of-bounds cells read as Unknown.
  CellState state(Cell c) const { return in_bounds(c) ? cells_[index(c)] : CellState::Unknown; }
  std::optional<double> ground_height(Cell c) const {
    return in_bounds(c) ? ground_[index(c)] : std::nullopt;
  }
  bool is_free(Cell c) const { return state(c) == CellState::Free; }

  /// Cell containing the horizontal position of `point`, if inside the grid.
  std::optional<Cell> cell_of(const Vec3& point) const;
  /// Cell index pair for `point` without a bounds check.
  Cell unchecked_cell_of(const Vec3& point) const;
  /// Cell center at ground height (grid origin height when the cell has no ground).
  Vec3 cell_center(Cell c) const;

  void set(Cell c, CellState state, std::optional<double> ground);

  const std::vector<CellState>& cells() const { return cells_; }
  const std::vector<std::optional<double>>& ground() const { return ground_; }
  std::size_t count(CellState state) const;

  /// Bounds of every chunk the grid currently reflects, used to size incremental updates.
  const std::map<std::string, Aabb>& chunk_bounds() const { return chunk_bounds_; }
  std::map<std::string, Aabb>& chunk_bounds() { return chunk_bounds_; }

  /// Rows (iy ascending) of (state, run length) pairs.
  std::vector<std::vector<std::pair<int, int>>> encode_rle() const;

  /// Cell-for-cell equality of states and ground heights.
  bool same_cells(const TraversabilityGrid& other) const {
    return config_ == other.config_ && cells_ == other.cells_ && ground_ == other.ground_;
  }

 private:
  TraversabilityConfig config_;
  std::vector<CellState> cells_;
  std::vector<std::optional<double>> ground_;
  std::map<std::string, Aabb> chunk_bounds_;
};

struct CellEvaluation {
  CellState state = CellState::Unknown;
  std::optional<double> ground_height;
};

/// Classifies one cell against the world; rebuild and update_cells both use it.
CellEvaluation evaluate_cell(const WorldModel& world, const TraversabilityConfig& config, Cell cell);

/// Full classification of every cell.
TraversabilityGrid rebuild(const WorldModel& discovered, const TraversabilityConfig& config);
TraversabilityGrid rebuild(const WorldModel& discovered, const GridSpec& spec,
                           const RobotFootprint& footprint, double slope_max);

/// Re-evaluates the cells that the old and new geometry of `changed_chunk_ids`
/// can influence. Returns the cells whose state or ground height changed, in
/// (iy, ix) order. Throws Error(StaleSpec) when `config` differs from the grid's.
std::vector<Cell> update_cells(TraversabilityGrid& grid, const WorldModel& discovered,
                               const std::vector<std::string>& changed_chunk_ids,
                               const TraversabilityConfig& config);

/// True iff `point` falls in an in-bounds Free cell.
bool is_navigable(const TraversabilityGrid& grid, const Vec3& point);

/// Exact test: does the triangle meet the closed vertical cylinder of `radius`
/// around (center.x, center.z) spanning heights [y_lo, y_hi]?
bool triangle_intersects_cylinder(const Triangle& tri, double center_x, double center_z,
                                  double radius, double y_lo, double y_hi);

}  // namespace rhino
