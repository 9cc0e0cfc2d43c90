#pragma once

#include <vector>

#include "sidewalk/geometry.hpp"

namespace sidewalk::eval {

using geom::Point2;

// Directed Hausdorff distance: max over the source points of the Euclidean
// distance to the nearest target point.
double h_directional(const std::vector<Point2>& p_path,
                     const std::vector<Point2>& p2);

// Mean (instead of max) of the same nearest-distance sequence, normalized by
// the source point count.
double h_average(const std::vector<Point2>& p_path,
                 const std::vector<Point2>& p2);

// Points along the polyline at fixed arc-length spacing, keeping both
// endpoints. Zero-length inputs collapse to a single point.
std::vector<Point2> resample_path(const std::vector<Point2>& path,
                                  double spacing);

struct SampleStats {
    double mean = 0.0;
    double sd = 0.0;  // Bessel-corrected
};

SampleStats sample_stats(const std::vector<double>& values);

// Two-sided Welch (unequal variance) t-test p-value. Degenerate populations
// (zero pooled standard error) give 1 when the means agree, 0 otherwise.
double welch_p_value(const std::vector<double>& a, const std::vector<double>& b);

// Five-number summary; quartiles interpolate linearly between order
// statistics, whiskers are the data min/max.
struct BoxStats {
    double lo = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double hi = 0.0;
};

BoxStats box_stats(std::vector<double> values);

struct MetricSummary {
    std::vector<double> values;
    SampleStats stats;
    BoxStats box;
};

struct TrialComparison {
    MetricSummary pr_directional;  // pedestrian vs robot, n_p * n_r values
    MetricSummary pr_average;
    MetricSummary ps_directional;  // pedestrian vs shortest path, n_p values
    MetricSummary ps_average;
    double p_directional = 1.0;  // Welch p-value, P-R against P-S
    double p_average = 1.0;
};

// Resample every trace at `spacing`, compare each pedestrian trial with each
// robot trial (P-R) and with the shortest path (P-S), and test whether the
// two populations differ.
TrialComparison compare_trials(const std::vector<std::vector<Point2>>& p_traces,
                               const std::vector<std::vector<Point2>>& r_traces,
                               const std::vector<Point2>& s_trace,
                               double spacing = 0.1);

}  // namespace sidewalk::eval
