#pragma once

#include <string>
#include <vector>

#include "hexcpg/vec.hpp"

namespace hexcpg {

enum class TerrainKind { Flat, Stairs, Gap, Alley, Slope };

const char* terrain_name(TerrainKind k);
TerrainKind parse_terrain(const std::string& name);  // throws ConfigError

// Parametric height fields. `difficulty` scales the defining parameter of
// each generator: step rise (stairs), trench width (gap), corridor
// narrowing (alley) and incline angle (slope). Features start at start_x so
// the robot spawns on flat ground.
struct TerrainConfig {
  TerrainKind kind = TerrainKind::Flat;
  double difficulty = 1.0;
  double start_x = 0.5;        // m, where the feature begins
  double step_height = 0.03;   // stairs: rise per step at difficulty 1, m
  double step_depth = 0.25;    // stairs: tread depth, m
  double gap_width = 0.08;     // gap: trench width at difficulty 1, m
  double gap_depth = 0.15;     // gap: trench depth, m
  double alley_width = 0.40;   // alley: corridor half-width at difficulty 1, m
  double wall_height = 0.30;   // alley: wall height, m
  double slope_angle = 0.10;   // slope: incline at difficulty 1, rad
  int grid_h = 5;              // height-grid rows sampled for the high level
  int grid_w = 5;              // height-grid columns
  double grid_spacing = 0.05;  // m between grid points

  void validate() const;  // throws ConfigError
};

class Terrain {
 public:
  explicit Terrain(const TerrainConfig& cfg);

  double height_at(double x, double y) const;

  // grid_h x grid_w heights around (center, yaw), row-major, rows advancing
  // along body +x and columns along body +y, each relative to the ground
  // height under the body center.
  std::vector<double> sample_grid(const Vec2& center, double yaw) const;

  const TerrainConfig& config() const { return cfg_; }

 private:
  TerrainConfig cfg_;
};

}  // namespace hexcpg
