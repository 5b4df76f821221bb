#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>

#include "entigraph/layout.hpp"

namespace entigraph {

namespace {

constexpr int kMaxDepth = 48;

struct Cell {
    double cx = 0.0;
    double cy = 0.0;
    double half = 0.0;  // half of the cell width
    double mass = 0.0;
    Vec2 com;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::array<std::int32_t, 4> child{-1, -1, -1, -1};

    bool leaf() const { return child[0] < 0 && child[1] < 0 && child[2] < 0 && child[3] < 0; }
};

class QuadTree {
public:
    QuadTree(std::span<const Vec2> pos, std::span<const double> mass) : pos_(pos), mass_(mass) {
        const auto n = static_cast<std::uint32_t>(pos.size());
        order_.resize(n);
        slot_.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) order_[i] = i;
        if (n == 0) return;

        double minx = pos[0].x, maxx = pos[0].x, miny = pos[0].y, maxy = pos[0].y;
        for (const Vec2& p : pos) {
            minx = std::min(minx, p.x);
            maxx = std::max(maxx, p.x);
            miny = std::min(miny, p.y);
            maxy = std::max(maxy, p.y);
        }
        const double half = std::max(maxx - minx, maxy - miny) / 2.0;
        cells_.reserve(2 * n);
        build(0, n, (minx + maxx) / 2.0, (miny + maxy) / 2.0, half, 0);
        for (std::uint32_t k = 0; k < n; ++k) slot_[order_[k]] = k;
    }

    Vec2 force_on(std::uint32_t body, double theta, double repulsion) const {
        Vec2 f;
        if (!cells_.empty()) accumulate(0, body, theta, repulsion, f);
        return f;
    }

private:
    std::int32_t build(std::uint32_t begin, std::uint32_t end, double cx, double cy, double half,
                       int depth) {
        const auto index = static_cast<std::int32_t>(cells_.size());
        cells_.push_back({});
        Cell cell;
        cell.cx = cx;
        cell.cy = cy;
        cell.half = half;
        cell.begin = begin;
        cell.end = end;
        double wx = 0.0, wy = 0.0;
        for (std::uint32_t k = begin; k < end; ++k) {
            const std::uint32_t i = order_[k];
            cell.mass += mass_[i];
            wx += mass_[i] * pos_[i].x;
            wy += mass_[i] * pos_[i].y;
        }
        cell.com = cell.mass > 0.0 ? Vec2{wx / cell.mass, wy / cell.mass} : Vec2{cx, cy};

        if (end - begin > 1 && depth < kMaxDepth && half > 0.0) {
            auto first = order_.begin() + begin;
            auto last = order_.begin() + end;
            // Quadrant q = (x >= cx) + 2 * (y >= cy); ranges laid out as 0,1,2,3.
            auto mid_y = std::stable_partition(first, last, [&](std::uint32_t i) { return pos_[i].y < cy; });
            auto mid_x0 = std::stable_partition(first, mid_y, [&](std::uint32_t i) { return pos_[i].x < cx; });
            auto mid_x1 = std::stable_partition(mid_y, last, [&](std::uint32_t i) { return pos_[i].x < cx; });
            const std::array<std::uint32_t, 5> bounds{
                begin, static_cast<std::uint32_t>(mid_x0 - order_.begin()),
                static_cast<std::uint32_t>(mid_y - order_.begin()),
                static_cast<std::uint32_t>(mid_x1 - order_.begin()), end};
            const double h = half / 2.0;
            for (int q = 0; q < 4; ++q) {
                if (bounds[q] == bounds[q + 1]) continue;
                const double qx = (q & 1) ? cx + h : cx - h;
                const double qy = (q & 2) ? cy + h : cy - h;
                cell.child[q] = build(bounds[q], bounds[q + 1], qx, qy, h, depth + 1);
            }
        }
        cells_[index] = cell;
        return index;
    }

    void pair(std::uint32_t body, Vec2 at, double other_mass, double repulsion, Vec2& f) const {
        const double dx = pos_[body].x - at.x;
        const double dy = pos_[body].y - at.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 <= 0.0) return;
        const double s = repulsion * mass_[body] * other_mass / d2;
        f.x += dx * s;
        f.y += dy * s;
    }

    void accumulate(std::int32_t index, std::uint32_t body, double theta, double repulsion,
                    Vec2& f) const {
        const Cell& cell = cells_[static_cast<std::size_t>(index)];
        const bool contains_body = slot_[body] >= cell.begin && slot_[body] < cell.end;
        if (cell.leaf()) {
            for (std::uint32_t k = cell.begin; k < cell.end; ++k) {
                const std::uint32_t j = order_[k];
                if (j != body) pair(body, pos_[j], mass_[j], repulsion, f);
            }
            return;
        }
        if (!contains_body) {
            const double dx = pos_[body].x - cell.com.x;
            const double dy = pos_[body].y - cell.com.y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d > 0.0 && 2.0 * cell.half < theta * d) {
                pair(body, cell.com, cell.mass, repulsion, f);
                return;
            }
        }
        for (std::int32_t c : cell.child) {
            if (c >= 0) accumulate(c, body, theta, repulsion, f);
        }
    }

    std::span<const Vec2> pos_;
    std::span<const double> mass_;
    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> slot_;
    std::vector<Cell> cells_;
};

}  // namespace

std::vector<Vec2> barnes_hut_forces(std::span<const Vec2> positions,
                                    std::span<const double> masses, double theta,
                                    double repulsion) {
    if (positions.size() != masses.size()) {
        throw Error(ErrorCode::InvalidArgument, "", "positions and masses differ in length");
    }
    if (!(theta > 0.0 && theta <= 2.0)) {
        throw Error(ErrorCode::InvalidArgument, "theta", "theta must lie in (0, 2]");
    }
    QuadTree tree(positions, masses);
    std::vector<Vec2> forces(positions.size());
    for (std::uint32_t i = 0; i < positions.size(); ++i) {
        forces[i] = tree.force_on(i, theta, repulsion);
    }
    return forces;
}

}  // namespace entigraph
