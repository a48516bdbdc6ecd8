#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lsdnet {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

// Axis-aligned minimum bounding rectangle; anchor is the lower-left corner.
struct Mbr {
    Point anchor;
    double extent_x = 0.0;
    double extent_y = 0.0;

    // Canonical orientation: length is the larger extent, width the smaller.
    double length() const { return extent_x >= extent_y ? extent_x : extent_y; }
    double width() const { return extent_x >= extent_y ? extent_y : extent_x; }

    Point clamp(const Point& p) const;
    bool contains(const Point& p) const;
    double perimeter() const { return 2.0 * (extent_x + extent_y); }
};

// Monitored area: an axis-aligned rectangle anchored at the origin, or a
// simple polygon. Polygons are normalized to counter-clockwise winding.
class Region {
public:
    static Region rectangle(double width, double height);
    static Region polygon(std::vector<Point> vertices);

    bool is_rectangle() const { return is_rectangle_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    const Mbr& mbr() const { return mbr_; }
    double area() const { return area_; }
    Point centroid() const { return centroid_; }
    bool contains(const Point& p) const;

private:
    Region() = default;
    bool is_rectangle_ = false;
    std::vector<Point> vertices_;  // CCW outline (rectangles store 4 corners)
    Mbr mbr_;
    double area_ = 0.0;
    Point centroid_;
};

inline Mbr mbr(const Region& region) { return region.mbr(); }
bool point_in_region(const Point& p, const Region& region);

// Unit-style lattice over the region's bounding rectangle. points holds every
// lattice node in row-major order (x fastest); mask flags the nodes that fall
// inside or on the region; n_targets counts the flagged ones.
struct TargetGrid {
    std::vector<Point> points;
    std::vector<std::uint8_t> mask;
    std::size_t n_targets = 0;
    Mbr bounds;
    double spacing = 1.0;
    std::size_t nx = 0;  // lattice nodes along x
    std::size_t ny = 0;  // lattice nodes along y
};

TargetGrid discretize(const Region& region, double spacing = 1.0);

// Sensor count that tiles an L-by-W bounding rectangle with squares inscribed
// in the sensing disk of radius r_s: ceil(L/(sqrt(2) r_s)) * ceil(W/(sqrt(2) r_s)).
long k_mbr_min(double length, double width, double r_s);

// Ordered sensor coordinates; index is the sensor id.
struct SensorField {
    std::vector<Point> coords;

    std::size_t size() const { return coords.size(); }
    bool empty() const { return coords.empty(); }
};

}  // namespace lsdnet
