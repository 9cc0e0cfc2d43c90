#include "sidewalk/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sidewalk::trace {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string episode_csv(const std::vector<mission::CycleLog>& log) {
    std::string out = "t,x,y,heading,mode,subgoal_x,subgoal_y\n";
    for (const auto& c : log) {
        out += fmt(c.t) + ',' + fmt(c.pos.x) + ',' + fmt(c.pos.y) + ',' +
               fmt(c.heading) + ',' + mission::mode_name(c.mode) + ',';
        if (c.subgoal) out += fmt(c.subgoal->x) + ',' + fmt(c.subgoal->y);
        else out += ',';
        out += '\n';
    }
    return out;
}

std::string path_csv(const std::vector<std::pair<double, Point2>>& points) {
    std::string out = "t,x,y\n";
    for (const auto& [t, p] : points)
        out += fmt(t) + ',' + fmt(p.x) + ',' + fmt(p.y) + '\n';
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << contents;
}

std::vector<Point2> read_path_positions(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");

    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };

    const auto header = split(line);
    int ix = -1, iy = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "x") ix = static_cast<int>(i);
        if (header[i] == "y") iy = static_cast<int>(i);
    }
    if (ix < 0 || iy < 0)
        throw std::runtime_error(path + ": no x/y columns in header");

    std::vector<Point2> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (static_cast<int>(cells.size()) <= std::max(ix, iy))
            throw std::runtime_error(path + ": short row");
        out.push_back({std::stod(cells[ix]), std::stod(cells[iy])});
    }
    return out;
}

}  // namespace sidewalk::trace
