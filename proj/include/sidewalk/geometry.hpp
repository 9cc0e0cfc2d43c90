// 2D/3D geometric primitives shared by the curb pipeline, the simulator and
// the path metrics: planes, RANSAC plane fitting, alpha-shape concave hulls,
// kd-trees, total-least-squares lines and polygon utilities.
#ifndef SIDEWALK_GEOMETRY_HPP
#define SIDEWALK_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sidewalk::geom {

struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {}

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2 operator/(double s) const { return {x / s, y / s}; }
    Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
    Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }

    double dot(const Point2& o) const { return x * o.x + y * o.y; }
    // z-component of the 3D cross product; >0 means o is CCW from *this.
    double cross(const Point2& o) const { return x * o.y - y * o.x; }
    double norm_sq() const { return x * x + y * y; }
    double norm() const;
    double dist(const Point2& o) const { return (*this - o).norm(); }
    double dist_sq(const Point2& o) const { return (*this - o).norm_sq(); }
    Point2 normalized() const;
    Point2 perp() const { return {-y, x}; }
};

using Vec2 = Point2;

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point3() = default;
    Point3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Point3& o) const { return x * o.x + y * o.y + z * o.z; }
    Point3 cross(const Point3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm_sq() const { return x * x + y * y + z * z; }
    double norm() const;
    Point3 normalized() const;
};

using Vec3 = Point3;

// Plane in signed-distance form: normal.dot(p) + offset == 0, |normal| == 1.
struct Plane {
    Vec3 normal{0.0, 0.0, 1.0};
    double offset = 0.0;

    double signed_dist(const Point3& p) const { return normal.dot(p) + offset; }
    double abs_dist(const Point3& p) const;
};

// Infinite 2D line through `point` with unit `direction`.
struct Line2 {
    Point2 point;
    Vec2 direction{1.0, 0.0};

    double dist(const Point2& p) const {
        return std::abs(direction.cross(p - point));
    }
    // Signed arc-length coordinate of the orthogonal projection of p.
    double project_param(const Point2& p) const { return direction.dot(p - point); }
};

// Immutable balanced kd-tree over a fixed 2D point set. Queries are exact and
// deterministic: ties resolve toward the smaller insertion index.
class KdTree2 {
public:
    explicit KdTree2(std::vector<Point2> points);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<Point2>& points() const { return points_; }

    // Indices of the min(k, size) nearest points, ascending by (distance, index).
    std::vector<int> nearest_indices(const Point2& query, int k) const;
    // Indices of all points within `radius` of query, ascending by index.
    std::vector<int> radius_indices(const Point2& query, double radius) const;
    // Squared distance from query to its nearest point (tree must be non-empty).
    double nearest_dist_sq(const Point2& query) const;

private:
    struct Node {
        int axis = 0;        // 0 = x, 1 = y; -1 marks a leaf bucket
        double split = 0.0;
        int left = -1;
        int right = -1;
        int begin = 0;       // leaf: range into order_
        int end = 0;
    };

    int build(int begin, int end, int depth);
    void knn_recurse(int node, const Point2& q, int k,
                     std::vector<std::pair<double, int>>& best) const;
    void radius_recurse(int node, const Point2& q, double r_sq,
                        std::vector<int>& out) const;

    std::vector<Point2> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

// Convenience form mirroring the nearest-search interface used by the curb
// pipeline: returns the points themselves, nearest first.
std::vector<Point2> kd_nearest(const KdTree2& tree, const Point2& query, int k);

struct RansacPlaneResult {
    Plane plane;
    std::vector<int> inlier_indices;  // ascending, indices into the input cloud
};

// RANSAC plane fit: samples non-collinear triples for `iterations` rounds,
// keeps the candidate with the most points within `inlier_threshold`, refits
// it by least squares on the winning inliers and recomputes the inlier set
// against the refit plane. Deterministic for a fixed seed regardless of the
// input point order.
RansacPlaneResult ransac_plane(const std::vector<Point3>& points,
                               double inlier_threshold, int iterations,
                               std::uint64_t rng_seed);

// Orthonormal in-plane basis with deterministic orientation: b1 is the unit
// projection of world-x onto the plane (world-y when the normal is parallel
// to x) and b2 = normal x b1.
void plane_basis(const Plane& plane, Vec3& b1, Vec3& b2);

// Orthogonal projection of each point onto the plane, expressed in the
// plane_basis coordinates. Distances between coplanar points are preserved.
std::vector<Point2> project_to_plane(const std::vector<Point3>& points,
                                     const Plane& plane);
Point2 project_point_to_plane(const Point3& point, const Plane& plane);

// Alpha-shape boundary of a 2D point set, traced by rolling a disc of radius
// `alpha` around the outside of the set. Returns the boundary vertices in CCW
// order. Throws DegenerateInput for collinear input, or when the disc radius
// is too small to produce a single boundary containing every point.
std::vector<Point2> concave_hull(const std::vector<Point2>& points, double alpha);

// Total-least-squares line: principal direction of the sample covariance
// through the centroid. Direction sign is canonicalized (x > 0, or y > 0 when
// vertical).
Line2 fit_line2(const std::vector<Point2>& points);

// ---- small planar helpers --------------------------------------------------

double wrap_angle(double a);                       // into (-pi, pi]
double angle_diff(double a, double b);             // wrap_angle(a - b)
Vec2 heading_vec(double theta);

double dist_point_segment(const Point2& p, const Point2& a, const Point2& b);
Point2 closest_point_on_segment(const Point2& p, const Point2& a, const Point2& b);
bool segments_intersect(const Point2& a, const Point2& b,
                        const Point2& c, const Point2& d);

double polygon_signed_area(const std::vector<Point2>& poly);
// Boundary counts as inside (within `tol`).
bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly,
                      double tol = 1e-9);

double polyline_length(const std::vector<Point2>& pts);
// Resamples a polyline at fixed arc-length spacing; keeps both endpoints.
std::vector<Point2> resample_polyline(const std::vector<Point2>& pts, double spacing);

}  // namespace sidewalk::geom

#endif
