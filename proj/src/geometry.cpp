#include "sforest/geometry.hpp"

#include <algorithm>
#include <cstring>

#include "sforest/errors.hpp"

namespace sforest {

double Polygon::signed_area() const {
    double a = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = vertices[i];
        const Point2& q = vertices[(i + 1) % n];
        a += cross(p, q);
    }
    return 0.5 * a;
}

Point2 Polygon::centroid() const {
    const std::size_t n = vertices.size();
    if (n == 0) return {};
    const double a = signed_area();
    if (n < 3 || std::abs(a) < 1e-300) {
        Point2 m{0, 0};
        for (const Point2& v : vertices) m = m + v;
        return m * (1.0 / static_cast<double>(n));
    }
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = vertices[i];
        const Point2& q = vertices[(i + 1) % n];
        const double w = cross(p, q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

double distance_point_segment(const Point2& p, const Point2& a, const Point2& b) {
    const Point2 ab = b - a;
    const double l2 = dot(ab, ab);
    if (l2 == 0.0) return distance(p, a);
    double t = dot(p - a, ab) / l2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

double distance_segment_segment(const Point2& a, const Point2& b,
                                const Point2& c, const Point2& d) {
    // Proper crossing means distance zero; otherwise the minimum is attained
    // at an endpoint against the other segment.
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
    return std::min(std::min(distance_point_segment(a, c, d), distance_point_segment(b, c, d)),
                    std::min(distance_point_segment(c, a, b), distance_point_segment(d, a, b)));
}

bool point_in_polygon(const Point2& p, const Polygon& poly, double eps) {
    const std::size_t n = poly.vertices.size();
    if (n < 3) throw ValidationError("point_in_polygon: polygon has fewer than 3 vertices");
    // Boundary is not interior.
    for (std::size_t i = 0; i < n; ++i) {
        if (distance_point_segment(p, poly.vertices[i], poly.vertices[(i + 1) % n]) <= eps)
            return false;
    }
    // Crossing count. p is at least eps away from every edge, so the ray
    // test is stable under the (y > py) straddle convention.
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& vi = poly.vertices[i];
        const Point2& vj = poly.vertices[j];
        if ((vi.y > p.y) != (vj.y > p.y)) {
            const double xint = vj.x + (vi.x - vj.x) * (p.y - vj.y) / (vi.y - vj.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

namespace {

// Collects the parameters t in [0,1] where segment p+t(q-p) meets the
// boundary of poly (crossings, touches and collinear-overlap endpoints).
void boundary_params(const Point2& p, const Point2& q, const Polygon& poly,
                     double eps, std::vector<double>& ts) {
    const Point2 r = q - p;
    const double rlen = norm(r);
    if (rlen == 0.0) return;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertices[i];
        const Point2& b = poly.vertices[(i + 1) % n];
        const Point2 s = b - a;
        const double denom = cross(r, s);
        const double slen = norm(s);
        if (std::abs(denom) > 1e-12 * rlen * slen) {
            const Point2 ap = a - p;
            const double t = cross(ap, s) / denom;
            const double u = cross(ap, r) / denom;
            const double tu_eps = eps / rlen;
            const double uu_eps = eps / slen;
            if (t >= -tu_eps && t <= 1.0 + tu_eps && u >= -uu_eps && u <= 1.0 + uu_eps)
                ts.push_back(std::clamp(t, 0.0, 1.0));
        } else if (distance_point_segment(a, p, q) <= eps || distance_point_segment(b, p, q) <= eps ||
                   distance_point_segment(p, a, b) <= eps) {
            // Near-parallel and close: record the projections of the edge
            // endpoints onto the segment as interval breakpoints.
            const double inv = 1.0 / (rlen * rlen);
            for (const Point2& e : {a, b}) {
                const double t = dot(e - p, r) * inv;
                if (t > 0.0 && t < 1.0 && distance_point_segment(e, p, q) <= eps)
                    ts.push_back(t);
            }
        }
    }
}

}  // namespace

bool segment_blocked(const Point2& p, const Point2& q, const MapEnv& map) {
    const double eps = map.eps();
    if (distance(p, q) <= eps) return false;
    std::vector<double> ts;
    for (const Polygon& poly : map.obstacles) {
        ts.clear();
        ts.push_back(0.0);
        ts.push_back(1.0);
        boundary_params(p, q, poly, eps, ts);
        std::sort(ts.begin(), ts.end());
        // The segment is blocked iff some open sub-interval between boundary
        // contacts runs through the interior.
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            if (ts[i + 1] - ts[i] < 1e-12) continue;
            const double tm = 0.5 * (ts[i] + ts[i + 1]);
            if (point_in_polygon(p + (q - p) * tm, poly, eps)) return true;
        }
    }
    return false;
}

Polygon convex_hull(std::span<const Point2> pts) {
    if (pts.empty()) throw ValidationError("convex_hull: empty input");
    std::vector<Point2> v(pts.begin(), pts.end());
    std::sort(v.begin(), v.end(), lex_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() == 1) return Polygon{{v[0]}};

    auto build = [&](bool upper) {
        std::vector<Point2> chain;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const Point2& pt = v[upper ? v.size() - 1 - k : k];
            while (chain.size() >= 2 &&
                   cross(chain.back() - chain[chain.size() - 2], pt - chain[chain.size() - 2]) <= 0)
                chain.pop_back();
            chain.push_back(pt);
        }
        return chain;
    };
    std::vector<Point2> lower = build(false), upper = build(true);
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    if (lower.size() == 2 || lower.size() == 1) return Polygon{{v.front(), v.back()}};
    return Polygon{std::move(lower)};
}

Polygon inflate_degenerate_hull(const Polygon& hull, double eps) {
    if (!hull.degenerate()) return hull;
    if (hull.vertices.empty()) throw ValidationError("inflate_degenerate_hull: empty hull");
    if (hull.vertices.size() == 1) {
        const Point2 c = hull.vertices[0];
        return Polygon{{{c.x - eps, c.y - eps},
                        {c.x + eps, c.y - eps},
                        {c.x + eps, c.y + eps},
                        {c.x - eps, c.y + eps}}};
    }
    const Point2 a = hull.vertices[0];
    const Point2 b = hull.vertices[1];
    Point2 d = b - a;
    const double len = norm(d);
    if (len == 0.0) return inflate_degenerate_hull(Polygon{{a}}, eps);
    d = d * (1.0 / len);
    const Point2 n{-d.y, d.x};
    return Polygon{{a - n * eps, b - n * eps, b + n * eps, a + n * eps}};
}

bool point_in_convex(const Point2& p, const Polygon& convex, double eps) {
    const std::size_t n = convex.vertices.size();
    if (n < 3) return distance_point_segment(p, convex.vertices.front(), convex.vertices.back()) <= eps;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = convex.vertices[i];
        const Point2& b = convex.vertices[(i + 1) % n];
        if (cross(b - a, p - a) < -eps * norm(b - a)) return false;
    }
    return true;
}

bool convex_overlap(const Polygon& a, const Polygon& b, double eps) {
    auto separated_by_edges_of = [&](const Polygon& e, const Polygon& o) {
        const std::size_t n = e.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 p = e.vertices[i];
            const Point2 q = e.vertices[(i + 1) % n];
            Point2 axis{q.y - p.y, p.x - q.x};  // outward for CCW
            const double alen = norm(axis);
            if (alen == 0.0) continue;
            axis = axis * (1.0 / alen);
            double amax = -1e300;
            for (const Point2& v : e.vertices) amax = std::max(amax, dot(axis, v));
            double omin = 1e300;
            for (const Point2& v : o.vertices) omin = std::min(omin, dot(axis, v));
            if (omin > amax + eps) return true;
        }
        return false;
    };
    if (a.vertices.empty() || b.vertices.empty()) return false;
    return !separated_by_edges_of(a, b) && !separated_by_edges_of(b, a);
}

std::uint64_t map_content_hash(const MapEnv& map) {
    // FNV-1a over the raw double bits; stable across runs on one platform.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    };
    mix(map.side);
    for (const Polygon& poly : map.obstacles) {
        mix(static_cast<double>(poly.vertices.size()));
        for (const Point2& v : poly.vertices) {
            mix(v.x);
            mix(v.y);
        }
    }
    return h;
}

bool polygon_is_simple(const Polygon& poly, double eps) {
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertices[i];
        const Point2& b = poly.vertices[(i + 1) % n];
        if (distance(a, b) <= eps) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            const Point2& c = poly.vertices[j];
            const Point2& d = poly.vertices[(j + 1) % n];
            if (distance_segment_segment(a, b, c, d) <= eps) return false;
        }
    }
    return true;
}

void validate_map(MapEnv& map) {
    if (!(map.side > 0.0) || !std::isfinite(map.side))
        throw ValidationError("map: side must be positive and finite");
    const double eps = map.eps();
    for (std::size_t i = 0; i < map.obstacles.size(); ++i) {
        const Polygon& poly = map.obstacles[i];
        if (poly.vertices.size() < 3)
            throw ValidationError("map: obstacle " + std::to_string(i) + " has fewer than 3 vertices");
        for (const Point2& v : poly.vertices) {
            if (!std::isfinite(v.x) || !std::isfinite(v.y))
                throw ValidationError("map: obstacle " + std::to_string(i) + " has non-finite vertex");
            if (v.x <= eps || v.y <= eps || v.x >= map.side - eps || v.y >= map.side - eps)
                throw ValidationError("map: obstacle " + std::to_string(i) + " not strictly inside bounds");
        }
        if (poly.signed_area() <= 0.0)
            throw ValidationError("map: obstacle " + std::to_string(i) + " is not counter-clockwise");
        if (!polygon_is_simple(poly, eps))
            throw ValidationError("map: obstacle " + std::to_string(i) + " is not a simple polygon");
    }
    for (std::size_t i = 0; i < map.obstacles.size(); ++i) {
        for (std::size_t j = i + 1; j < map.obstacles.size(); ++j) {
            const Polygon& a = map.obstacles[i];
            const Polygon& b = map.obstacles[j];
            bool overlap = point_in_polygon(a.vertices[0], b, eps) ||
                           point_in_polygon(b.vertices[0], a, eps);
            for (std::size_t ei = 0; ei < a.vertices.size() && !overlap; ++ei)
                for (std::size_t ej = 0; ej < b.vertices.size() && !overlap; ++ej)
                    overlap = distance_segment_segment(
                                  a.vertices[ei], a.vertices[(ei + 1) % a.vertices.size()],
                                  b.vertices[ej], b.vertices[(ej + 1) % b.vertices.size()]) <= eps;
            if (overlap)
                throw ValidationError("map: obstacles " + std::to_string(i) + " and " +
                                      std::to_string(j) + " overlap");
        }
    }
    map.id = map_content_hash(map);
}

}  // namespace sforest
