#include "coverage_miqp/visibility.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace coverage_miqp {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

void hash_doubles(std::uint64_t& h, std::initializer_list<double> values) {
  for (double v : values) {
    char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    h = fnv1a(std::string_view(bytes, sizeof(double)), h);
  }
}

// Marks every point incident to the nearest segment of each ray.
void mark_ray_hits(const Point2& pos, const FovConfig& cfg, const Scenario& s, std::vector<std::uint8_t>& seen) {
  const auto& segs = s.boundary.segments;
  std::vector<std::uint8_t> hit_segment(segs.size(), 0);
  for (const auto& ray : rays(cfg, pos, s.ray_count).rays) {
    if (const auto idx = nearest_hit(ray, segs)) hit_segment[*idx] = 1;
  }
  for (std::size_t p = 0; p < s.n_points(); ++p) {
    for (std::size_t seg : s.boundary.point_to_segment[p]) {
      if (hit_segment[seg]) seen[p] = 1;
    }
  }
}

}  // namespace

VisibilityTable::VisibilityTable(TableMeta meta)
    : meta_(std::move(meta)), bits_(meta_.n_cells * meta_.n_points, 0) {}

VisibilityTable VisibilityTable::all_visible(TableMeta meta) {
  VisibilityTable t(std::move(meta));
  std::fill(t.bits_.begin(), t.bits_.end(), 1);
  return t;
}

std::size_t VisibilityTable::offset(std::size_t cell, std::size_t point) const {
  if (cell >= meta_.n_cells || point >= meta_.n_points) {
    throw std::out_of_range("visibility table index (" + std::to_string(cell) + ", " + std::to_string(point) +
                            ") out of range");
  }
  return cell * meta_.n_points + point;
}

bool VisibilityTable::query(std::size_t cell, std::size_t point) const { return bits_[offset(cell, point)] != 0; }

void VisibilityTable::set(std::size_t cell, std::size_t point, bool value) {
  bits_[offset(cell, point)] = value ? 1 : 0;
}

std::size_t VisibilityTable::row_count(std::size_t cell) const {
  const auto begin = bits_.begin() + static_cast<std::ptrdiff_t>(offset(cell, 0));
  return static_cast<std::size_t>(std::count(begin, begin + static_cast<std::ptrdiff_t>(meta_.n_points), 1));
}

std::string config_set_hash(const Scenario& s, std::span<const FovConfig> configs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& c : configs) {
    hash_doubles(h, {c.theta, c.zoom});
    for (const auto& v : c.base_vertices) hash_doubles(h, {v.x(), v.y()});
  }
  hash_doubles(h, {s.traversable ? 1.0 : 0.0});
  for (const auto& p : s.points) hash_doubles(h, {p.x(), p.y()});
  for (const auto& cell : s.grid.cells) hash_doubles(h, {cell.box.xmin, cell.box.ymin, cell.box.xmax, cell.box.ymax});
  return to_hex(h);
}

TableMeta expected_meta(const Scenario& s) {
  return {s.visibility.n_s, s.visibility.seed,  s.ray_count, config_set_hash(s, s.configs),
          s.grid.size(),    s.n_points()};
}

std::vector<std::size_t> ray_hit_points(const Point2& pos, const FovConfig& cfg, const Scenario& s) {
  std::vector<std::size_t> out;
  if (s.traversable) {
    for (std::size_t p = 0; p < s.n_points(); ++p) out.push_back(p);
    return out;
  }
  std::vector<std::uint8_t> seen(s.n_points(), 0);
  mark_ray_hits(pos, cfg, s, seen);
  for (std::size_t p = 0; p < seen.size(); ++p) {
    if (seen[p]) out.push_back(p);
  }
  return out;
}

std::vector<std::size_t> visible_points(const Point2& pos, const FovConfig& cfg, const Scenario& s) {
  const auto fov = footprint_halfplanes(cfg, pos);
  std::vector<std::size_t> out;
  for (std::size_t p : ray_hit_points(pos, cfg, s)) {
    if (contains(fov, s.points[p])) out.push_back(p);
  }
  return out;
}

Point2 sample_in_cell(const Cell& cell, std::uint64_t seed, std::size_t cell_index, std::size_t sample_index) {
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ cell_index) ^ (sample_index << 1);
  const double u = unit_double(splitmix64(key));
  const double v = unit_double(splitmix64(key ^ 1ULL));
  return {cell.box.xmin + u * cell.box.width(), cell.box.ymin + v * cell.box.height()};
}

VisibilityTable learn_table(const Scenario& s, std::span<const FovConfig> configs, unsigned threads) {
  TableMeta meta{s.visibility.n_s, s.visibility.seed, s.ray_count, config_set_hash(s, configs),
                 s.grid.size(),    s.n_points()};
  if (s.traversable) return VisibilityTable::all_visible(meta);

  VisibilityTable table(meta);
  std::vector<std::vector<std::uint8_t>> rows(s.grid.size(), std::vector<std::uint8_t>(s.n_points(), 0));
  auto learn_rows = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < s.grid.size(); c += stride) {
      for (int i = 0; i < s.visibility.n_s; ++i) {
        const Point2 pos = sample_in_cell(s.grid.cells[c], s.visibility.seed, c, static_cast<std::size_t>(i));
        for (const auto& cfg : configs) mark_ray_hits(pos, cfg, s, rows[c]);
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, s.grid.size()));
  if (workers == 1) {
    learn_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(learn_rows, w, workers);
  }

  for (std::size_t c = 0; c < rows.size(); ++c) {
    for (std::size_t p = 0; p < rows[c].size(); ++p) table.set(c, p, rows[c][p] != 0);
  }
  return table;
}

std::vector<std::size_t> table_visible_points(const Scenario& s, const VisibilityTable& table, const FovConfig& cfg,
                                              const Point2& pos) {
  const auto cells = s.grid.cells_containing(pos);
  const auto fov = footprint_halfplanes(cfg, pos);
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < s.n_points(); ++p) {
    if (!contains(fov, s.points[p])) continue;
    const bool seen = std::any_of(cells.begin(), cells.end(), [&](std::size_t c) { return table.query(c, p); });
    if (seen) out.push_back(p);
  }
  return out;
}

json table_to_json(const VisibilityTable& t) {
  const auto& m = t.meta();
  json rows = json::array();
  for (std::size_t c = 0; c < t.n_cells(); ++c) {
    std::string row(t.n_points(), '0');
    for (std::size_t p = 0; p < t.n_points(); ++p) {
      if (t.query(c, p)) row[p] = '1';
    }
    rows.push_back(row);
  }
  return {{"meta",
           {{"n_s", m.n_s},
            {"seed", m.seed},
            {"ray_count", m.ray_count},
            {"config_set_hash", m.config_set_hash},
            {"n_cells", m.n_cells},
            {"n_points", m.n_points}}},
          {"rows", rows}};
}

VisibilityTable table_from_json(const json& doc) {
  try {
    const json& m = doc.at("meta");
    TableMeta meta{m.at("n_s").get<int>(),
                   m.at("seed").get<std::uint64_t>(),
                   m.at("ray_count").get<int>(),
                   m.at("config_set_hash").get<std::string>(),
                   m.at("n_cells").get<std::size_t>(),
                   m.at("n_points").get<std::size_t>()};
    const json& rows = doc.at("rows");
    if (!rows.is_array() || rows.size() != meta.n_cells) {
      throw std::invalid_argument("visibility table: row count does not match meta.n_cells");
    }
    VisibilityTable t(meta);
    for (std::size_t c = 0; c < meta.n_cells; ++c) {
      const std::string row = rows[c].get<std::string>();
      if (row.size() != meta.n_points) throw std::invalid_argument("visibility table: bad row length");
      for (std::size_t p = 0; p < row.size(); ++p) {
        if (row[p] != '0' && row[p] != '1') throw std::invalid_argument("visibility table: rows must be 0/1");
        t.set(c, p, row[p] == '1');
      }
    }
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("visibility table: ") + e.what());
  }
}

void save_table(const VisibilityTable& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << table_to_json(t).dump(2) << '\n';
}

VisibilityTable load_table(const std::filesystem::path& path, const TableMeta& expected) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open visibility table " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("visibility table " + path.string() + ": " + e.what());
  }
  VisibilityTable t = table_from_json(doc);
  if (!(t.meta() == expected)) {
    throw std::invalid_argument("visibility table " + path.string() + " was built for a different scenario");
  }
  return t;
}

}  // namespace coverage_miqp
