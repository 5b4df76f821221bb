#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "entigraph/types.hpp"
#include "entigraph/vec2.hpp"
#include "entigraph/view.hpp"

namespace entigraph {

/// ForceAtlas2 parameters. All arithmetic is IEEE-754 binary64; the build
/// disables floating-point contraction so results are reproducible bit for bit.
struct LayoutParams {
    double repulsion = 2.0;        // k_r
    double gravity = 1.0;          // k_g
    double theta = 0.5;            // Barnes-Hut opening threshold
    double jitter_tolerance = 1.0; // tau
    double edge_weight_influence = 1.0;  // delta
    bool lin_log = false;
    bool strong_gravity = false;
    double node_speed = 0.1;       // k_s
    double max_node_speed = 10.0;  // k_smax
    std::uint64_t seed = 42;

    /// Throws InvalidArgument when a parameter is out of its domain.
    void validate() const;
};

struct LayoutEdge {
    std::uint32_t source = 0;
    std::uint32_t target = 0;
    double weight = 1.0;
};

/// Graph handed to the layout: nodes in canonical key order, edges by index.
struct LayoutGraph {
    std::vector<GlobalKey> nodes;
    std::vector<LayoutEdge> edges;

    static LayoutGraph from_visible(const VisibleGraph& view);
};

/// One step of the splitmix64 generator; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seeded initial coordinates, one per key, in a square of half-width
/// 10*sqrt(n). Keys must be in canonical order.
std::vector<Vec2> init_positions(std::span<const GlobalKey> keys, std::uint64_t seed);

struct StepStats {
    double mean_swinging = 0.0;
    double mean_traction = 0.0;
    double max_displacement = 0.0;
    double global_speed = 0.0;
};

class LayoutState {
public:
    LayoutState() = default;
    /// Fresh state over `keys` (canonical order) with seeded positions.
    static LayoutState initial(std::vector<GlobalKey> keys, std::uint64_t seed);
    /// State over `keys` reusing positions (and pins) from `previous` for shared
    /// keys; new keys get their seeded initial position. Speeds reset.
    static LayoutState carry_over(const LayoutState& previous, std::vector<GlobalKey> keys,
                                  std::uint64_t seed);
    /// State over `keys` with explicit positions (keys canonical, same length).
    static LayoutState with_positions(std::vector<GlobalKey> keys, std::vector<Vec2> positions);

    std::span<const GlobalKey> keys() const { return keys_; }
    std::span<const Vec2> positions() const { return positions_; }
    std::span<const Vec2> previous_forces() const { return prev_force_; }
    std::size_t size() const { return keys_.size(); }
    double global_speed() const { return global_speed_; }
    std::int64_t iteration() const { return iteration_; }

    std::optional<std::size_t> index_of(const GlobalKey& key) const;
    Vec2 position(const GlobalKey& key) const;
    bool is_pinned(const GlobalKey& key) const;
    std::map<GlobalKey, Vec2> position_map() const;

    /// Moves `key` to `at` and freezes it. Throws UnknownKey.
    void pin(const GlobalKey& key, Vec2 at);
    void unpin(const GlobalKey& key);

    bool operator==(const LayoutState&) const = default;

private:
    friend StepStats step(LayoutState&, const LayoutGraph&, const LayoutParams&);

    std::size_t require(const GlobalKey& key) const;

    std::vector<GlobalKey> keys_;
    std::vector<Vec2> positions_;
    std::vector<Vec2> prev_force_;
    std::vector<char> pinned_;
    double global_speed_ = 1.0;
    std::int64_t iteration_ = 0;
};

/// One ForceAtlas2 iteration in place. `graph.nodes` must equal `state.keys()`.
StepStats step(LayoutState& state, const LayoutGraph& graph, const LayoutParams& params);

struct RunMetrics {
    std::int64_t iterations = 0;
    double mean_swinging = 0.0;  // of the last completed iteration
    double mean_traction = 0.0;
    double max_displacement = 0.0;
};

/// Steps until `max_steps` or the wall-clock budget is used up. Only whole
/// iterations are ever applied.
RunMetrics run(LayoutState& state, const LayoutGraph& graph, const LayoutParams& params,
               std::int64_t max_steps,
               std::optional<std::chrono::milliseconds> budget = std::nullopt);

/// Total force per node before speed scaling (repulsion + attraction + gravity).
/// Exposed for tests and diagnostics; `step` uses the same routine.
std::vector<Vec2> compute_forces(std::span<const Vec2> positions, const LayoutGraph& graph,
                                 const LayoutParams& params);

/// Quadtree-approximated pairwise repulsion k_r*m_u*m_v/d. A cell of width s
/// whose centre of mass lies at distance d is treated as a point mass when
/// s/d < theta; cells containing the node itself are always opened.
std::vector<Vec2> barnes_hut_forces(std::span<const Vec2> positions,
                                    std::span<const double> masses, double theta,
                                    double repulsion);

}  // namespace entigraph
