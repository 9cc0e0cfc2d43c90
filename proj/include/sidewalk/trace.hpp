#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sidewalk/geometry.hpp"
#include "sidewalk/mission.hpp"

namespace sidewalk::trace {

using geom::Point2;

// Per-cycle episode trace. Header: t,x,y,heading,mode,subgoal_x,subgoal_y.
// Subgoal columns stay empty on cycles without one.
std::string episode_csv(const std::vector<mission::CycleLog>& log);

// Timestamped path. Header: t,x,y.
std::string path_csv(const std::vector<std::pair<double, Point2>>& points);

void write_file(const std::string& path, const std::string& contents);

// Positions from any CSV with x and y columns (header-driven).
std::vector<Point2> read_path_positions(const std::string& path);

}  // namespace sidewalk::trace
