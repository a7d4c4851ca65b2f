#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "coverage_miqp/scenario.h"

namespace coverage_miqp {

struct TableMeta {
  int n_s = 0;
  std::uint64_t seed = 0;
  int ray_count = 0;
  // Fingerprint of everything the table depends on besides sampling: the
  // footprint configurations, the boundary and the grid cells.
  std::string config_set_hash;
  std::size_t n_cells = 0;
  std::size_t n_points = 0;

  bool operator==(const TableMeta&) const = default;
};

// Learned cell-level visibility: bit (c, p) is set when some camera ray cast
// from a sampled position in cell c first hits a boundary segment holding p.
class VisibilityTable {
 public:
  VisibilityTable() = default;
  explicit VisibilityTable(TableMeta meta);

  // Every bit set; used for traversable regions and to switch occlusion off.
  static VisibilityTable all_visible(TableMeta meta);

  const TableMeta& meta() const { return meta_; }
  std::size_t n_cells() const { return meta_.n_cells; }
  std::size_t n_points() const { return meta_.n_points; }

  // Throws std::out_of_range for bad indices.
  bool query(std::size_t cell, std::size_t point) const;
  void set(std::size_t cell, std::size_t point, bool value);
  std::size_t row_count(std::size_t cell) const;

  bool operator==(const VisibilityTable&) const = default;

 private:
  std::size_t offset(std::size_t cell, std::size_t point) const;

  TableMeta meta_;
  std::vector<std::uint8_t> bits_;
};

std::string config_set_hash(const Scenario& s, std::span<const FovConfig> configs);
TableMeta expected_meta(const Scenario& s);

// Indices of the points p for which some ray of the pose first hits a
// boundary segment incident to p (no footprint test).
std::vector<std::size_t> ray_hit_points(const Point2& pos, const FovConfig& cfg, const Scenario& s);

// Points inside the placed footprint that some ray of the pose sees first.
// A traversable region has no occluding boundary: every point in the
// footprint is visible.
std::vector<std::size_t> visible_points(const Point2& pos, const FovConfig& cfg, const Scenario& s);

// Deterministic uniform position in a cell, keyed by (seed, cell, sample).
Point2 sample_in_cell(const Cell& cell, std::uint64_t seed, std::size_t cell_index, std::size_t sample_index);

// Rows are independent and may be computed on up to `threads` threads; the
// result does not depend on the thread count.
VisibilityTable learn_table(const Scenario& s, std::span<const FovConfig> configs, unsigned threads = 1);

// Points in the placed footprint whose bit is set for some cell containing
// pos. This is the visibility the optimization model encodes.
std::vector<std::size_t> table_visible_points(const Scenario& s, const VisibilityTable& table, const FovConfig& cfg,
                                              const Point2& pos);

nlohmann::json table_to_json(const VisibilityTable& t);
VisibilityTable table_from_json(const nlohmann::json& doc);

void save_table(const VisibilityTable& t, const std::filesystem::path& path);
// Throws std::invalid_argument when the stored meta differs from `expected`.
VisibilityTable load_table(const std::filesystem::path& path, const TableMeta& expected);

}  // namespace coverage_miqp
