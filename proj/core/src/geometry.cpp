#include "lsdnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsdnet/errors.hpp"

namespace lsdnet {

namespace {

constexpr double kBoundaryTol = 1e-9;

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment_collinear(const Point& a, const Point& b, const Point& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int orientation_sign(const Point& o, const Point& a, const Point& b) {
    const double c = cross(o, a, b);
    if (c > 0.0) return 1;
    if (c < 0.0) return -1;
    return 0;
}

// Closed-segment intersection test, endpoints included.
bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const int o1 = orientation_sign(p1, p2, q1);
    const int o2 = orientation_sign(p1, p2, q2);
    const int o3 = orientation_sign(q1, q2, p1);
    const int o4 = orientation_sign(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment_collinear(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment_collinear(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment_collinear(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment_collinear(q1, q2, p2)) return true;
    return false;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
    const double abx = b.x - a.x;
    const double aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    const double dx = p.x - (a.x + t * abx);
    const double dy = p.y - (a.y + t * aby);
    return std::sqrt(dx * dx + dy * dy);
}

double shoelace_signed_area(const std::vector<Point>& v) {
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

void check_simple_outline(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        if (a.x == b.x && a.y == b.y) {
            throw DegenerateRegion("polygon has a zero-length edge");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            const Point& a = v[i];
            const Point& b = v[(i + 1) % n];
            const Point& c = v[j];
            const Point& d = v[(j + 1) % n];
            if (adjacent) {
                // Shared-endpoint edges may only touch at that endpoint; a
                // collinear fold-back (spike) makes the outline degenerate.
                const Point& shared = (j == i + 1) ? b : a;
                const Point& prev = (j == i + 1) ? a : d;
                const Point& next = (j == i + 1) ? d : a;
                (void)next;
                const Point& other = (j == i + 1) ? d : c;
                if (orientation_sign(prev, shared, other) == 0) {
                    const double dot = (prev.x - shared.x) * (other.x - shared.x) +
                                       (prev.y - shared.y) * (other.y - shared.y);
                    if (dot > 0.0) {
                        throw DegenerateRegion("polygon folds back on itself");
                    }
                }
            } else if (segments_intersect(a, b, c, d)) {
                throw DegenerateRegion("polygon outline self-intersects");
            }
        }
    }
}

Mbr bounding_box(const std::vector<Point>& v) {
    double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
    for (const Point& p : v) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return Mbr{{xmin, ymin}, xmax - xmin, ymax - ymin};
}

Point polygon_centroid(const std::vector<Point>& v, double area) {
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        const double w = a.x * b.y - b.x * a.y;
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    return Point{cx / (6.0 * area), cy / (6.0 * area)};
}

}  // namespace

double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

Point Mbr::clamp(const Point& p) const {
    return Point{std::clamp(p.x, anchor.x, anchor.x + extent_x),
                 std::clamp(p.y, anchor.y, anchor.y + extent_y)};
}

bool Mbr::contains(const Point& p) const {
    return p.x >= anchor.x && p.x <= anchor.x + extent_x &&
           p.y >= anchor.y && p.y <= anchor.y + extent_y;
}

Region Region::rectangle(double width, double height) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw DegenerateRegion("rectangle extents must be positive");
    }
    Region r;
    r.is_rectangle_ = true;
    r.vertices_ = {{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}};
    r.mbr_ = Mbr{{0.0, 0.0}, width, height};
    r.area_ = width * height;
    r.centroid_ = Point{width / 2.0, height / 2.0};
    return r;
}

Region Region::polygon(std::vector<Point> vertices) {
    if (vertices.size() < 3) {
        throw DegenerateRegion("polygon needs at least three vertices");
    }
    double signed_area = shoelace_signed_area(vertices);
    if (std::abs(signed_area) < 1e-12) {
        throw DegenerateRegion("polygon has zero area");
    }
    if (signed_area < 0.0) {
        std::reverse(vertices.begin(), vertices.end());
        signed_area = -signed_area;
    }
    check_simple_outline(vertices);
    Region r;
    r.is_rectangle_ = false;
    r.area_ = signed_area;
    r.centroid_ = polygon_centroid(vertices, signed_area);
    r.mbr_ = bounding_box(vertices);
    r.vertices_ = std::move(vertices);
    return r;
}

bool Region::contains(const Point& p) const {
    if (is_rectangle_) {
        return p.x >= -kBoundaryTol && p.x <= mbr_.extent_x + kBoundaryTol &&
               p.y >= -kBoundaryTol && p.y <= mbr_.extent_y + kBoundaryTol;
    }
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, vertices_[i], vertices_[(i + 1) % n]) <= kBoundaryTol) {
            return true;  // boundary counts as inside
        }
    }
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_hit = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_hit) inside = !inside;
        }
    }
    return inside;
}

bool point_in_region(const Point& p, const Region& region) {
    return region.contains(p);
}

TargetGrid discretize(const Region& region, double spacing) {
    if (!(spacing > 0.0)) {
        throw std::invalid_argument("discretize: spacing must be positive");
    }
    TargetGrid grid;
    grid.bounds = region.mbr();
    grid.spacing = spacing;
    grid.nx = static_cast<std::size_t>(std::floor(grid.bounds.extent_x / spacing + kBoundaryTol)) + 1;
    grid.ny = static_cast<std::size_t>(std::floor(grid.bounds.extent_y / spacing + kBoundaryTol)) + 1;
    grid.points.reserve(grid.nx * grid.ny);
    grid.mask.reserve(grid.nx * grid.ny);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const Point p{grid.bounds.anchor.x + static_cast<double>(ix) * spacing,
                          grid.bounds.anchor.y + static_cast<double>(iy) * spacing};
            const bool in = region.contains(p);
            grid.points.push_back(p);
            grid.mask.push_back(in ? 1 : 0);
            if (in) ++grid.n_targets;
        }
    }
    return grid;
}

long k_mbr_min(double length, double width, double r_s) {
    if (!(length > 0.0) || !(width > 0.0) || !(r_s > 0.0)) {
        throw std::invalid_argument("k_mbr_min: extents and radius must be positive");
    }
    const double cell = std::sqrt(2.0) * r_s;
    const double nl = std::ceil(length / cell);
    const double nw = std::ceil(width / cell);
    return static_cast<long>(nl) * static_cast<long>(nw);
}

}  // namespace lsdnet
