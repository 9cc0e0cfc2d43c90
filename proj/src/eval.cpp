#include "sidewalk/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace sidewalk::eval {

namespace {

// Nearest-distance sequence from each source point into the target set. The
// kd-tree returns the exact minimum squared distance, so taking the square
// root afterwards matches a double-loop evaluation bit for bit.
std::vector<double> nearest_distances(const std::vector<Point2>& source,
                                      const std::vector<Point2>& target) {
    if (source.empty() || target.empty())
        throw std::invalid_argument("hausdorff: empty path");
    const geom::KdTree2 tree(target);
    std::vector<double> d;
    d.reserve(source.size());
    for (const auto& x : source) d.push_back(std::sqrt(tree.nearest_dist_sq(x)));
    return d;
}

}  // namespace

double h_directional(const std::vector<Point2>& p_path,
                     const std::vector<Point2>& p2) {
    double worst = 0.0;
    for (const double d : nearest_distances(p_path, p2)) worst = std::max(worst, d);
    return worst;
}

double h_average(const std::vector<Point2>& p_path,
                 const std::vector<Point2>& p2) {
    double sum = 0.0;
    const auto d = nearest_distances(p_path, p2);
    for (const double v : d) sum += v;
    return sum / static_cast<double>(d.size());
}

std::vector<Point2> resample_path(const std::vector<Point2>& path,
                                  double spacing) {
    if (path.empty()) return {};
    std::vector<Point2> out = {path.front()};
    double carried = 0.0;  // arc length already consumed before the next sample
    for (std::size_t i = 1; i < path.size(); ++i) {
        const Point2 a = path[i - 1];
        const Point2 b = path[i];
        const double seg = a.dist(b);
        if (seg <= 0.0) continue;
        double along = spacing - carried;
        while (along <= seg) {
            out.push_back(a + (b - a) * (along / seg));
            along += spacing;
        }
        carried = seg - (along - spacing);
    }
    if (out.back().dist(path.back()) > 1e-9) out.push_back(path.back());
    return out;
}

SampleStats sample_stats(const std::vector<double>& values) {
    SampleStats s;
    if (values.empty()) return s;
    for (const double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() < 2) return s;
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return s;
}

double welch_p_value(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_p_value: need at least 2 samples each");
    const auto sa = sample_stats(a);
    const auto sb = sample_stats(b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double va = sa.sd * sa.sd / na;
    const double vb = sb.sd * sb.sd / nb;
    const double se2 = va + vb;
    if (se2 <= 0.0) return sa.mean == sb.mean ? 1.0 : 0.0;
    const double t = (sa.mean - sb.mean) / std::sqrt(se2);
    const double dof = se2 * se2 /
                       (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("box_stats: empty sample");
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double p) {
        const double h = p * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - std::floor(h)) * (values[hi] - values[lo]);
    };
    BoxStats b;
    b.lo = values.front();
    b.q1 = quantile(0.25);
    b.median = quantile(0.5);
    b.q3 = quantile(0.75);
    b.hi = values.back();
    return b;
}

namespace {

MetricSummary summarize(std::vector<double> values) {
    MetricSummary m;
    m.stats = sample_stats(values);
    m.box = box_stats(values);
    m.values = std::move(values);
    return m;
}

}  // namespace

TrialComparison compare_trials(const std::vector<std::vector<Point2>>& p_traces,
                               const std::vector<std::vector<Point2>>& r_traces,
                               const std::vector<Point2>& s_trace,
                               double spacing) {
    if (p_traces.size() < 2 || r_traces.size() < 2)
        throw std::invalid_argument("compare_trials: need at least 2 trials per side");

    std::vector<std::vector<Point2>> p;
    p.reserve(p_traces.size());
    for (const auto& t : p_traces) p.push_back(resample_path(t, spacing));
    std::vector<std::vector<Point2>> r;
    r.reserve(r_traces.size());
    for (const auto& t : r_traces) r.push_back(resample_path(t, spacing));
    const auto s = resample_path(s_trace, spacing);

    std::vector<double> pr_dir, pr_avg, ps_dir, ps_avg;
    for (const auto& pi : p) {
        for (const auto& rj : r) {
            pr_dir.push_back(h_directional(pi, rj));
            pr_avg.push_back(h_average(pi, rj));
        }
        ps_dir.push_back(h_directional(pi, s));
        ps_avg.push_back(h_average(pi, s));
    }

    TrialComparison out;
    out.p_directional = welch_p_value(pr_dir, ps_dir);
    out.p_average = welch_p_value(pr_avg, ps_avg);
    out.pr_directional = summarize(std::move(pr_dir));
    out.pr_average = summarize(std::move(pr_avg));
    out.ps_directional = summarize(std::move(ps_dir));
    out.ps_average = summarize(std::move(ps_avg));
    return out;
}

}  // namespace sidewalk::eval
