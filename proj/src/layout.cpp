#include "entigraph/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace entigraph {

namespace {

constexpr double kTwoPow64 = 18446744073709551616.0;
constexpr double kJitter = 0.01;
constexpr double kMaxSpeedRise = 1.5;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string key_bytes(const GlobalKey& key) { return key.str(); }

// Separates nodes sharing exactly the same position. Within a group the first
// node (by key order) stays; the others move 0.01 in a direction derived from
// (seed, iteration, key). Pinned nodes never move.
void separate_coincident(std::vector<Vec2>& pos, const std::vector<char>& pinned,
                         std::span<const GlobalKey> keys, std::uint64_t seed,
                         std::int64_t iteration) {
    const std::size_t n = pos.size();
    std::vector<std::uint32_t> idx(n);
    for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (pos[a].x != pos[b].x) return pos[a].x < pos[b].x;
        if (pos[a].y != pos[b].y) return pos[a].y < pos[b].y;
        return a < b;
    });
    for (std::size_t k = 1; k < n; ++k) {
        const std::uint32_t prev = idx[k - 1];
        const std::uint32_t cur = idx[k];
        if (pos[cur] != pos[prev] || pinned[cur]) continue;
        std::uint64_t state = seed ^ fnv1a(key_bytes(keys[cur]));
        state += static_cast<std::uint64_t>(iteration) * 0x9e3779b97f4a7c15ULL;
        const double angle = static_cast<double>(splitmix64(state)) / kTwoPow64 * 2.0 *
                             std::numbers::pi;
        // The original position is kept for comparing later group members.
        const Vec2 shift{kJitter * std::cos(angle), kJitter * std::sin(angle)};
        pos[cur] += shift;
        idx[k] = prev;
    }
}

std::vector<double> masses_of(const LayoutGraph& graph) {
    std::vector<double> mass(graph.nodes.size(), 1.0);
    for (const LayoutEdge& e : graph.edges) {
        mass[e.source] += 1.0;
        mass[e.target] += 1.0;
    }
    return mass;
}

std::vector<Vec2> forces_with_mass(std::span<const Vec2> pos, std::span<const double> mass,
                                   const LayoutGraph& graph, const LayoutParams& p) {
    std::vector<Vec2> f = barnes_hut_forces(pos, mass, p.theta, p.repulsion);

    for (const LayoutEdge& e : graph.edges) {
        const double wf =
            p.edge_weight_influence == 0.0 ? 1.0 : std::pow(e.weight, p.edge_weight_influence);
        const Vec2 diff = pos[e.source] - pos[e.target];
        Vec2 pull;
        if (p.lin_log) {
            const double d = diff.norm();
            if (d > 0.0) pull = diff * (wf * std::log1p(d) / d);
        } else {
            pull = diff * wf;
        }
        f[e.source] -= pull;
        f[e.target] += pull;
    }

    if (p.gravity != 0.0) {
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const double d = pos[i].norm();
            if (d <= 0.0) continue;
            const double scale = p.strong_gravity ? p.gravity * mass[i] : p.gravity * mass[i] / d;
            f[i] -= pos[i] * scale;
        }
    }
    return f;
}

}  // namespace

void LayoutParams::validate() const {
    auto bad = [](const char* name, const char* what) {
        throw Error(ErrorCode::InvalidArgument, name, std::string(name) + " " + what);
    };
    if (!(repulsion > 0.0)) bad("repulsion", "must be > 0");
    if (!(theta > 0.0 && theta <= 2.0)) bad("theta", "must lie in (0, 2]");
    if (!(jitter_tolerance > 0.0)) bad("jitterTolerance", "must be > 0");
    if (!(edge_weight_influence >= 0.0)) bad("edgeWeightInfluence", "must be >= 0");
    if (!std::isfinite(gravity)) bad("gravity", "must be finite");
    if (!(node_speed > 0.0)) bad("nodeSpeed", "must be > 0");
    if (!(max_node_speed > 0.0)) bad("maxNodeSpeed", "must be > 0");
}

LayoutGraph LayoutGraph::from_visible(const VisibleGraph& view) {
    LayoutGraph g;
    g.nodes.reserve(view.nodes.size());
    for (const auto& n : view.nodes) g.nodes.push_back(n.key);
    auto index = [&](const GlobalKey& k) {
        auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), k);
        return static_cast<std::uint32_t>(it - g.nodes.begin());
    };
    g.edges.reserve(view.edges.size());
    for (const auto& e : view.edges) {
        g.edges.push_back({index(e.a), index(e.b), static_cast<double>(e.weight)});
    }
    return g;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<Vec2> init_positions(std::span<const GlobalKey> keys, std::uint64_t seed) {
    if (!std::is_sorted(keys.begin(), keys.end())) {
        throw Error(ErrorCode::InvalidArgument, "", "layout keys must be in canonical order");
    }
    const double radius = 10.0 * std::sqrt(static_cast<double>(keys.size()));
    std::uint64_t state = seed;
    std::vector<Vec2> out;
    out.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const double u = static_cast<double>(splitmix64(state)) / kTwoPow64;
        const double v = static_cast<double>(splitmix64(state)) / kTwoPow64;
        out.push_back({radius * (2.0 * u - 1.0), radius * (2.0 * v - 1.0)});
    }
    return out;
}

LayoutState LayoutState::with_positions(std::vector<GlobalKey> keys, std::vector<Vec2> positions) {
    if (keys.size() != positions.size()) {
        throw Error(ErrorCode::InvalidArgument, "", "keys and positions differ in length");
    }
    if (!std::is_sorted(keys.begin(), keys.end()) ||
        std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
        throw Error(ErrorCode::InvalidArgument, "", "layout keys must be canonical and unique");
    }
    LayoutState s;
    s.keys_ = std::move(keys);
    s.positions_ = std::move(positions);
    s.prev_force_.assign(s.keys_.size(), Vec2{});
    s.pinned_.assign(s.keys_.size(), 0);
    return s;
}

LayoutState LayoutState::initial(std::vector<GlobalKey> keys, std::uint64_t seed) {
    auto pos = init_positions(keys, seed);
    return with_positions(std::move(keys), std::move(pos));
}

LayoutState LayoutState::carry_over(const LayoutState& previous, std::vector<GlobalKey> keys,
                                    std::uint64_t seed) {
    LayoutState s = initial(std::move(keys), seed);
    for (std::size_t i = 0; i < s.keys_.size(); ++i) {
        if (auto j = previous.index_of(s.keys_[i])) {
            s.positions_[i] = previous.positions_[*j];
            s.pinned_[i] = previous.pinned_[*j];
        }
    }
    s.iteration_ = previous.iteration_;
    return s;
}

std::optional<std::size_t> LayoutState::index_of(const GlobalKey& key) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - keys_.begin());
}

std::size_t LayoutState::require(const GlobalKey& key) const {
    auto i = index_of(key);
    if (!i) throw Error(ErrorCode::UnknownKey, key.str(), "node not laid out: " + key.str());
    return *i;
}

Vec2 LayoutState::position(const GlobalKey& key) const { return positions_[require(key)]; }

bool LayoutState::is_pinned(const GlobalKey& key) const { return pinned_[require(key)] != 0; }

std::map<GlobalKey, Vec2> LayoutState::position_map() const {
    std::map<GlobalKey, Vec2> out;
    for (std::size_t i = 0; i < keys_.size(); ++i) out.emplace_hint(out.end(), keys_[i], positions_[i]);
    return out;
}

void LayoutState::pin(const GlobalKey& key, Vec2 at) {
    const std::size_t i = require(key);
    positions_[i] = at;
    pinned_[i] = 1;
}

void LayoutState::unpin(const GlobalKey& key) { pinned_[require(key)] = 0; }

std::vector<Vec2> compute_forces(std::span<const Vec2> positions, const LayoutGraph& graph,
                                 const LayoutParams& params) {
    const auto mass = masses_of(graph);
    return forces_with_mass(positions, mass, graph, params);
}

StepStats step(LayoutState& state, const LayoutGraph& graph, const LayoutParams& params) {
    params.validate();
    if (!std::equal(graph.nodes.begin(), graph.nodes.end(), state.keys_.begin(),
                    state.keys_.end())) {
        throw Error(ErrorCode::InvalidArgument, "", "layout state does not match the graph nodes");
    }
    const std::size_t n = state.keys_.size();
    StepStats stats;
    if (n == 0) {
        ++state.iteration_;
        return stats;
    }

    separate_coincident(state.positions_, state.pinned_, state.keys_, params.seed,
                        state.iteration_);
    const auto mass = masses_of(graph);
    const auto force = forces_with_mass(state.positions_, mass, graph, params);

    std::vector<double> swing(n), traction(n);
    double weighted_swing = 0.0, weighted_traction = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        swing[i] = (force[i] - state.prev_force_[i]).norm();
        traction[i] = (force[i] + state.prev_force_[i]).norm() / 2.0;
        weighted_swing += mass[i] * swing[i];
        weighted_traction += mass[i] * traction[i];
        stats.mean_swinging += swing[i];
        stats.mean_traction += traction[i];
    }
    stats.mean_swinging /= static_cast<double>(n);
    stats.mean_traction /= static_cast<double>(n);

    const double cap = kMaxSpeedRise * state.global_speed_;
    double target = cap;
    if (weighted_swing > 0.0) target = params.jitter_tolerance * weighted_traction / weighted_swing;
    const double global = std::min(target, cap);

    for (std::size_t i = 0; i < n; ++i) {
        if (!state.pinned_[i]) {
            double speed = params.node_speed * global / (1.0 + global * std::sqrt(swing[i]));
            const double fmag = force[i].norm();
            if (fmag > 0.0) speed = std::min(speed, params.max_node_speed / fmag);
            const Vec2 move = force[i] * speed;
            state.positions_[i] += move;
            stats.max_displacement = std::max(stats.max_displacement, move.norm());
        }
        state.prev_force_[i] = force[i];
    }
    state.global_speed_ = global;
    stats.global_speed = global;
    ++state.iteration_;
    return stats;
}

RunMetrics run(LayoutState& state, const LayoutGraph& graph, const LayoutParams& params,
               std::int64_t max_steps, std::optional<std::chrono::milliseconds> budget) {
    if (max_steps < 0) throw Error(ErrorCode::InvalidArgument, "maxSteps", "maxSteps must be >= 0");
    const auto start = std::chrono::steady_clock::now();
    RunMetrics metrics;
    while (metrics.iterations < max_steps) {
        if (budget && std::chrono::steady_clock::now() - start >= *budget) break;
        const StepStats s = step(state, graph, params);
        ++metrics.iterations;
        metrics.mean_swinging = s.mean_swinging;
        metrics.mean_traction = s.mean_traction;
        metrics.max_displacement = s.max_displacement;
    }
    return metrics;
}

}  // namespace entigraph
