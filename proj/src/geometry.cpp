#include "sidewalk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "sidewalk/rng.hpp"

namespace sidewalk::geom {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double Point2::norm() const { return std::sqrt(x * x + y * y); }

Point2 Point2::normalized() const {
    const double n = norm();
    if (n <= 0.0) throw DegenerateInput("cannot normalize zero vector");
    return {x / n, y / n};
}

double Point3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Point3 Point3::normalized() const {
    const double n = norm();
    if (n <= 0.0) throw DegenerateInput("cannot normalize zero vector");
    return {x / n, y / n, z / n};
}

double Plane::abs_dist(const Point3& p) const { return std::abs(signed_dist(p)); }

// ---- KdTree2 ----------------------------------------------------------------

KdTree2::KdTree2(std::vector<Point2> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!points_.empty()) {
        nodes_.reserve(2 * points_.size() / 8 + 8);
        root_ = build(0, static_cast<int>(points_.size()), 0);
    }
}

int KdTree2::build(int begin, int end, int depth) {
    Node node;
    constexpr int kLeafSize = 8;
    if (end - begin <= kLeafSize) {
        node.axis = -1;
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size()) - 1;
    }
    const int axis = depth % 2;
    const int mid = (begin + end) / 2;
    // Full sort (not nth_element) keeps the layout deterministic across
    // standard libraries; build cost is O(n log^2 n) which is fine here.
    std::sort(order_.begin() + begin, order_.begin() + end, [&](int a, int b) {
        const double ca = axis == 0 ? points_[a].x : points_[a].y;
        const double cb = axis == 0 ? points_[b].x : points_[b].y;
        if (ca != cb) return ca < cb;
        return a < b;
    });
    node.axis = axis;
    const Point2& m = points_[order_[mid]];
    node.split = axis == 0 ? m.x : m.y;
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid, end, depth + 1);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void KdTree2::knn_recurse(int node_idx, const Point2& q, int k,
                          std::vector<std::pair<double, int>>& best) const {
    const Node& node = nodes_[node_idx];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            const double d2 = q.dist_sq(points_[idx]);
            const std::pair<double, int> cand(d2, idx);
            if (static_cast<int>(best.size()) < k) {
                best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
            } else if (cand < best.back()) {
                best.pop_back();
                best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
            }
        }
        return;
    }
    const double qc = node.axis == 0 ? q.x : q.y;
    const double delta = qc - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    knn_recurse(near, q, k, best);
    if (static_cast<int>(best.size()) < k || delta * delta <= best.back().first) {
        knn_recurse(far, q, k, best);
    }
}

std::vector<int> KdTree2::nearest_indices(const Point2& query, int k) const {
    std::vector<int> out;
    if (root_ < 0 || k <= 0) return out;
    std::vector<std::pair<double, int>> best;
    best.reserve(static_cast<std::size_t>(k) + 1);
    knn_recurse(root_, query, k, best);
    out.reserve(best.size());
    for (const auto& [d2, idx] : best) out.push_back(idx);
    return out;
}

void KdTree2::radius_recurse(int node_idx, const Point2& q, double r_sq,
                             std::vector<int>& out) const {
    const Node& node = nodes_[node_idx];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            if (q.dist_sq(points_[idx]) <= r_sq) out.push_back(idx);
        }
        return;
    }
    const double qc = node.axis == 0 ? q.x : q.y;
    const double delta = qc - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    radius_recurse(near, q, r_sq, out);
    if (delta * delta <= r_sq) radius_recurse(far, q, r_sq, out);
}

std::vector<int> KdTree2::radius_indices(const Point2& query, double radius) const {
    std::vector<int> out;
    if (root_ < 0 || radius < 0.0) return out;
    radius_recurse(root_, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

double KdTree2::nearest_dist_sq(const Point2& query) const {
    std::vector<std::pair<double, int>> best;
    best.reserve(2);
    knn_recurse(root_, query, 1, best);
    return best.front().first;
}

std::vector<Point2> kd_nearest(const KdTree2& tree, const Point2& query, int k) {
    std::vector<Point2> out;
    for (int idx : tree.nearest_indices(query, k)) out.push_back(tree.points()[idx]);
    return out;
}

// ---- RANSAC plane -----------------------------------------------------------

namespace {

Plane plane_from_normal_point(Vec3 normal, const Point3& p) {
    normal = normal.normalized();
    // Canonical sign: largest-|.| component positive.
    double m = normal.x;
    if (std::abs(normal.y) > std::abs(m)) m = normal.y;
    if (std::abs(normal.z) > std::abs(m)) m = normal.z;
    if (m < 0.0) normal = normal * -1.0;
    return Plane{normal, -normal.dot(p)};
}

Plane least_squares_plane(const std::vector<Point3>& points,
                          const std::vector<int>& indices) {
    Point3 c{0.0, 0.0, 0.0};
    for (int i : indices) c = c + points[i];
    c = c * (1.0 / static_cast<double>(indices.size()));
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int i : indices) {
        const Point3 d = points[i] - c;
        Eigen::Vector3d v(d.x, d.y, d.z);
        cov += v * v.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    const Eigen::Vector3d n = es.eigenvectors().col(0);  // smallest eigenvalue
    return plane_from_normal_point({n.x(), n.y(), n.z()}, c);
}

}  // namespace

RansacPlaneResult ransac_plane(const std::vector<Point3>& points,
                               double inlier_threshold, int iterations,
                               std::uint64_t rng_seed) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw DegenerateInput("ransac_plane: need at least 3 points");
    if (inlier_threshold <= 0.0) throw DegenerateInput("ransac_plane: threshold must be > 0");
    if (iterations < 1) throw DegenerateInput("ransac_plane: iterations must be >= 1");

    // Canonical sampling order makes the result independent of input order.
    std::vector<int> canon(static_cast<std::size_t>(n));
    std::iota(canon.begin(), canon.end(), 0);
    std::sort(canon.begin(), canon.end(), [&](int a, int b) {
        const Point3& pa = points[a];
        const Point3& pb = points[b];
        if (pa.x != pb.x) return pa.x < pb.x;
        if (pa.y != pb.y) return pa.y < pb.y;
        if (pa.z != pb.z) return pa.z < pb.z;
        return a < b;
    });

    Rng rng(rng_seed);
    int best_count = -1;
    Plane best_plane;
    for (int iter = 0; iter < iterations; ++iter) {
        const int i0 = rng.uniform_int(0, n - 1);
        int i1 = rng.uniform_int(0, n - 2);
        if (i1 >= i0) ++i1;
        int i2 = rng.uniform_int(0, n - 3);
        if (i2 >= std::min(i0, i1)) ++i2;
        if (i2 >= std::max(i0, i1)) ++i2;
        const Point3& a = points[canon[i0]];
        const Point3& b = points[canon[i1]];
        const Point3& c = points[canon[i2]];
        const Vec3 cr = (b - a).cross(c - a);
        if (cr.norm() < 1e-9) continue;  // collinear sample, costs one iteration
        const Plane cand = plane_from_normal_point(cr, a);
        int count = 0;
        for (const Point3& p : points) {
            if (cand.abs_dist(p) <= inlier_threshold) ++count;
        }
        if (count > best_count) {
            best_count = count;
            best_plane = cand;
        }
    }
    if (best_count < 0) {
        throw DegenerateInput("ransac_plane: no non-collinear sample found");
    }

    std::vector<int> inliers;
    for (int i = 0; i < n; ++i) {
        if (best_plane.abs_dist(points[i]) <= inlier_threshold) inliers.push_back(i);
    }
    Plane refit = best_plane;
    if (inliers.size() >= 3) {
        refit = least_squares_plane(points, inliers);
    }
    std::vector<int> final_inliers;
    for (int i = 0; i < n; ++i) {
        if (refit.abs_dist(points[i]) <= inlier_threshold) final_inliers.push_back(i);
    }
    return {refit, std::move(final_inliers)};
}

// ---- plane projection -------------------------------------------------------

void plane_basis(const Plane& plane, Vec3& b1, Vec3& b2) {
    const Vec3 n = plane.normal;
    Vec3 seed{1.0, 0.0, 0.0};
    Vec3 proj = seed - n * n.dot(seed);
    if (proj.norm() < 1e-6) {
        seed = {0.0, 1.0, 0.0};
        proj = seed - n * n.dot(seed);
    }
    b1 = proj.normalized();
    b2 = n.cross(b1);
}

Point2 project_point_to_plane(const Point3& point, const Plane& plane) {
    Vec3 b1, b2;
    plane_basis(plane, b1, b2);
    const Point3 origin = plane.normal * -plane.offset;
    const Vec3 d = point - origin;
    return {d.dot(b1), d.dot(b2)};
}

std::vector<Point2> project_to_plane(const std::vector<Point3>& points,
                                     const Plane& plane) {
    Vec3 b1, b2;
    plane_basis(plane, b1, b2);
    const Point3 origin = plane.normal * -plane.offset;
    std::vector<Point2> out;
    out.reserve(points.size());
    for (const Point3& p : points) {
        const Vec3 d = p - origin;
        out.push_back({d.dot(b1), d.dot(b2)});
    }
    return out;
}

// ---- alpha-shape concave hull -----------------------------------------------

namespace {

bool all_collinear(const std::vector<Point2>& pts, double tol) {
    if (pts.size() < 3) return true;
    // Direction from the two most separated of the first few points would be
    // fragile; use the principal axis instead.
    Point2 c{0.0, 0.0};
    for (const Point2& p : pts) c += p;
    c = c / static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const Point2& p : pts) {
        const Point2 d = p - c;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    const double tr = sxx + syy;
    const double det = sxx * syy - sxy * sxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lambda_min = tr / 2.0 - disc;  // residual variance off-axis
    return lambda_min <= tol * std::max(1.0, tr);
}

double mod_two_pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

}  // namespace

std::vector<Point2> concave_hull(const std::vector<Point2>& points, double alpha) {
    if (points.size() < 3) throw DegenerateInput("concave_hull: need at least 3 points");
    if (!(alpha > 0.0)) throw DegenerateInput("concave_hull: alpha must be > 0");

    // Exact duplicates collapse to one representative.
    std::vector<Point2> pts;
    pts.reserve(points.size());
    {
        std::vector<int> idx(points.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            if (points[a].x != points[b].x) return points[a].x < points[b].x;
            if (points[a].y != points[b].y) return points[a].y < points[b].y;
            return a < b;
        });
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i > 0 && points[idx[i]] == points[idx[i - 1]]) continue;
            pts.push_back(points[idx[i]]);
        }
    }
    if (pts.size() < 3) throw DegenerateInput("concave_hull: fewer than 3 distinct points");
    if (all_collinear(pts, 1e-14)) throw DegenerateInput("concave_hull: collinear input");

    const KdTree2 tree(pts);
    const int n = static_cast<int>(pts.size());

    // Start at the bottom-most point; a disc of radius alpha touching it from
    // below is empty, so the point is on the boundary.
    int start = 0;
    for (int i = 1; i < n; ++i) {
        if (pts[i].y < pts[start].y ||
            (pts[i].y == pts[start].y && pts[i].x < pts[start].x)) {
            start = i;
        }
    }

    // Roll the disc counterclockwise around the outside of the set. The disc
    // pivots about the current contact point; the next boundary vertex is the
    // first point the disc touches.
    std::vector<int> hull;
    hull.push_back(start);
    int current = start;
    double phi = -1.5707963267948966;  // disc center angle: straight below
    const double reach = 2.0 * alpha * (1.0 + 1e-12);
    for (int step = 0; step <= n; ++step) {
        const Point2& pc = pts[current];
        double best_dphi = std::numeric_limits<double>::infinity();
        double best_center_angle = 0.0;
        int best_idx = -1;
        for (int cand : tree.radius_indices(pc, reach)) {
            if (cand == current) continue;
            const Point2 d = pts[cand] - pc;
            const double half_sq = d.norm_sq() / 4.0;
            const double h = std::sqrt(std::max(0.0, alpha * alpha - half_sq));
            const Point2 mid = pc + d * 0.5;
            const Point2 perp = d.perp().normalized();
            for (int side = 0; side < 2; ++side) {
                const Point2 center = side == 0 ? mid + perp * h : mid - perp * h;
                const double ang = std::atan2(center.y - pc.y, center.x - pc.x);
                double dphi = mod_two_pi(ang - phi);
                if (dphi <= 1e-12) dphi = kTwoPi;  // ignore the contact we just left
                if (dphi < best_dphi ||
                    (dphi == best_dphi && best_idx >= 0 && cand < best_idx)) {
                    best_dphi = dphi;
                    best_center_angle = ang;
                    best_idx = cand;
                }
            }
        }
        if (best_idx < 0) {
            throw DegenerateInput("concave_hull: alpha too small (isolated point)");
        }
        if (best_idx == start) break;
        hull.push_back(best_idx);
        const Point2 center = pts[current] + Point2{std::cos(best_center_angle),
                                                    std::sin(best_center_angle)} * alpha;
        current = best_idx;
        phi = std::atan2(center.y - pts[current].y, center.x - pts[current].x);
        if (step == n) {
            throw DegenerateInput("concave_hull: traversal failed to close");
        }
    }
    if (hull.size() < 3) {
        throw DegenerateInput("concave_hull: degenerate boundary");
    }

    std::vector<Point2> poly;
    poly.reserve(hull.size());
    for (int i : hull) poly.push_back(pts[i]);

    // A disconnected alpha complex leaves points outside the traced loop;
    // such clouds are rejected rather than guessed at.
    for (const Point2& p : pts) {
        if (!point_in_polygon(p, poly, 1e-9)) {
            throw DegenerateInput("concave_hull: alpha too small (point outside boundary)");
        }
    }
    return poly;
}

// ---- line fit ---------------------------------------------------------------

Line2 fit_line2(const std::vector<Point2>& points) {
    if (points.size() < 2) throw DegenerateInput("fit_line2: need at least 2 points");
    Point2 c{0.0, 0.0};
    for (const Point2& p : points) c += p;
    c = c / static_cast<double>(points.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    double spread = 0.0;
    for (const Point2& p : points) {
        const Point2 d = p - c;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
        spread = std::max(spread, d.norm_sq());
    }
    if (spread < 1e-24) throw DegenerateInput("fit_line2: all points coincide");
    // Principal eigenvector of [[sxx, sxy], [sxy, syy]].
    const double tr = sxx + syy;
    const double det = sxx * syy - sxy * sxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lambda = tr / 2.0 + disc;
    Vec2 dir;
    if (std::abs(sxy) > 1e-300) {
        dir = Vec2{lambda - syy, sxy}.normalized();
    } else {
        dir = sxx >= syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    }
    if (dir.x < 0.0 || (dir.x == 0.0 && dir.y < 0.0)) dir = dir * -1.0;
    return Line2{c, dir};
}

// ---- planar helpers ---------------------------------------------------------

double wrap_angle(double a) {
    double r = std::fmod(a + 3.141592653589793, kTwoPi);
    if (r <= 0.0) r += kTwoPi;
    return r - 3.141592653589793;
}

double angle_diff(double a, double b) { return wrap_angle(a - b); }

Vec2 heading_vec(double theta) { return {std::cos(theta), std::sin(theta)}; }

Point2 closest_point_on_segment(const Point2& p, const Point2& a, const Point2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq <= 0.0) return a;
    const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
    return a + ab * t;
}

double dist_point_segment(const Point2& p, const Point2& a, const Point2& b) {
    return p.dist(closest_point_on_segment(p, a, b));
}

namespace {
int orient_sign(const Point2& a, const Point2& b, const Point2& c) {
    const double v = (b - a).cross(c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}
bool on_segment_collinear(const Point2& a, const Point2& b, const Point2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}
}  // namespace

bool segments_intersect(const Point2& a, const Point2& b,
                        const Point2& c, const Point2& d) {
    const int o1 = orient_sign(a, b, c);
    const int o2 = orient_sign(a, b, d);
    const int o3 = orient_sign(c, d, a);
    const int o4 = orient_sign(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment_collinear(a, b, c)) return true;
    if (o2 == 0 && on_segment_collinear(a, b, d)) return true;
    if (o3 == 0 && on_segment_collinear(c, d, a)) return true;
    if (o4 == 0 && on_segment_collinear(c, d, b)) return true;
    return false;
}

double polygon_signed_area(const std::vector<Point2>& poly) {
    double acc = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        acc += a.cross(b);
    }
    return acc / 2.0;
}

bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly, double tol) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (dist_point_segment(p, poly[i], poly[(i + 1) % n]) <= tol) return true;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = poly[i];
        const Point2& b = poly[j];
        const bool crosses = (a.y > p.y) != (b.y > p.y);
        if (crosses) {
            const double x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_int) inside = !inside;
        }
    }
    return inside;
}

double polyline_length(const std::vector<Point2>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += pts[i].dist(pts[i - 1]);
    return len;
}

std::vector<Point2> resample_polyline(const std::vector<Point2>& pts, double spacing) {
    std::vector<Point2> out;
    if (pts.empty() || spacing <= 0.0) return out;
    out.push_back(pts.front());
    if (pts.size() == 1) return out;
    double carried = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Point2 a = pts[i - 1];
        const Point2 b = pts[i];
        double seg = a.dist(b);
        while (carried + seg >= spacing) {
            const double need = spacing - carried;
            const Point2 dir = (b - a) / seg;
            a = a + dir * need;
            seg -= need;
            carried = 0.0;
            out.push_back(a);
        }
        carried += seg;
    }
    if (carried > 1e-12) out.push_back(pts.back());
    return out;
}

}  // namespace sidewalk::geom
