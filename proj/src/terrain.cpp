#include "hexcpg/terrain.hpp"

#include <cmath>

#include "hexcpg/errors.hpp"

namespace hexcpg {

const char* terrain_name(TerrainKind k) {
  switch (k) {
    case TerrainKind::Flat: return "flat";
    case TerrainKind::Stairs: return "stairs";
    case TerrainKind::Gap: return "gap";
    case TerrainKind::Alley: return "alley";
    case TerrainKind::Slope: return "slope";
  }
  return "?";
}

TerrainKind parse_terrain(const std::string& name) {
  for (TerrainKind k : {TerrainKind::Flat, TerrainKind::Stairs, TerrainKind::Gap,
                        TerrainKind::Alley, TerrainKind::Slope})
    if (name == terrain_name(k)) return k;
  throw ConfigError("unknown terrain '" + name + "' (flat|stairs|gap|alley|slope)",
                    "terrain.kind");
}

void TerrainConfig::validate() const {
  if (difficulty < 0.0) throw ConfigError("difficulty must be >= 0", "terrain.difficulty");
  if (grid_h < 1 || grid_w < 1)
    throw ConfigError("height grid must be at least 1x1", "terrain.grid_h");
  if (!(grid_spacing > 0.0))
    throw ConfigError("grid_spacing must be > 0", "terrain.grid_spacing");
  if (!(step_depth > 0.0)) throw ConfigError("step_depth must be > 0", "terrain.step_depth");
  if (!(alley_width > 0.0)) throw ConfigError("alley_width must be > 0", "terrain.alley_width");
}

Terrain::Terrain(const TerrainConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

double Terrain::height_at(double x, double y) const {
  switch (cfg_.kind) {
    case TerrainKind::Flat:
      return 0.0;
    case TerrainKind::Stairs: {
      if (x < cfg_.start_x) return 0.0;
      const double rise = cfg_.step_height * cfg_.difficulty;
      return (std::floor((x - cfg_.start_x) / cfg_.step_depth) + 1.0) * rise;
    }
    case TerrainKind::Gap: {
      const double width = cfg_.gap_width * cfg_.difficulty;
      return (x >= cfg_.start_x && x < cfg_.start_x + width) ? -cfg_.gap_depth : 0.0;
    }
    case TerrainKind::Alley: {
      // Corridor along +x; higher difficulty narrows it.
      if (x < cfg_.start_x) return 0.0;
      const double half = cfg_.alley_width / std::max(cfg_.difficulty, 1e-9);
      return std::abs(y) > half ? cfg_.wall_height : 0.0;
    }
    case TerrainKind::Slope: {
      if (x < cfg_.start_x) return 0.0;
      return std::tan(cfg_.slope_angle * cfg_.difficulty) * (x - cfg_.start_x);
    }
  }
  return 0.0;
}

std::vector<double> Terrain::sample_grid(const Vec2& center, double yaw) const {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(cfg_.grid_h) * cfg_.grid_w);
  const double base = height_at(center[0], center[1]);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double r0 = -0.5 * (cfg_.grid_h - 1);
  const double c0 = -0.5 * (cfg_.grid_w - 1);
  for (int r = 0; r < cfg_.grid_h; ++r) {
    for (int c = 0; c < cfg_.grid_w; ++c) {
      const double bx = (r0 + r) * cfg_.grid_spacing;  // body frame
      const double by = (c0 + c) * cfg_.grid_spacing;
      const double wx = center[0] + cy * bx - sy * by;
      const double wy = center[1] + sy * bx + cy * by;
      grid.push_back(height_at(wx, wy) - base);
    }
  }
  return grid;
}

}  // namespace hexcpg
