#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "entigraph/graph_store.hpp"
#include "entigraph/interchange.hpp"
#include "entigraph/layout.hpp"
#include "entigraph/search_index.hpp"
#include "entigraph/view.hpp"

namespace entigraph {

class SessionNotFound : public std::runtime_error {
public:
    explicit SessionNotFound(const std::string& id) : std::runtime_error("unknown session '" + id + "'") {}
};

class SessionLimitReached : public std::runtime_error {
public:
    explicit SessionLimitReached(std::size_t limit)
        : std::runtime_error("session limit of " + std::to_string(limit) + " reached") {}
};

/// Start requested while a layout task is already running.
class LayoutBusy : public std::runtime_error {
public:
    LayoutBusy() : std::runtime_error("layout is already running") {}
};

/// Full position snapshot pushed by a running layout task.
struct LayoutFrame {
    std::int64_t seq = 0;        // session-wide, strictly increasing
    std::int64_t iteration = 0;  // layout iteration the positions belong to
    std::int64_t revision = 0;
    bool terminal = false;
    std::string reason;          // terminal only: converged, stopped, limit, idle
    std::map<GlobalKey, Vec2> positions;
    StepStats stats;
};

struct ViewSnapshot {
    std::int64_t revision = 0;
    ViewState state;
    VisibleGraph graph;
    std::map<GlobalKey, Vec2> positions;  // one per visible node
};

struct StepResult {
    std::int64_t revision = 0;
    std::int64_t iteration = 0;
    RunMetrics metrics;
    std::map<GlobalKey, Vec2> positions;
};

struct LayoutStartOptions {
    std::optional<LayoutParams> params;
    std::int64_t max_iterations = 10000;
    double convergence_threshold = 1e-4;  // max displacement per iteration
    std::chrono::milliseconds frame_interval{100};
};

/// One editing session. Every public call is serialized on the session mutex;
/// view reads build from an immutable graph snapshot. The layout task runs on
/// its own thread and never takes the session mutex.
class Session {
public:
    Session(std::string id, GraphStore store, const ImportFile& source);
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const { return id_; }
    std::int64_t revision() const;

    /// `mode` and `scheme` override the stored view state for this read only.
    ViewSnapshot view(std::optional<ViewMode> mode = std::nullopt,
                      std::optional<ColorScheme> scheme = std::nullopt);
    ViewState view_state() const;

    /// Replaces the view configuration. Focus keys must name stored nodes.
    /// Stops a running layout. Does not change the revision.
    std::int64_t set_view(const ViewState& state);

    /// Throws RevisionConflict when `expected_revision` is stale.
    JournalEntry mutate(const std::vector<MutationOp>& ops, std::int64_t expected_revision);
    std::int64_t undo(std::optional<std::int64_t> expected_revision = std::nullopt);
    std::int64_t redo(std::optional<std::int64_t> expected_revision = std::nullopt);

    /// Runs exactly `steps` iterations on the calling thread.
    StepResult step(std::int64_t steps, std::optional<LayoutParams> params = std::nullopt);
    void start_layout(const LayoutStartOptions& options = {});
    /// Returns false when nothing was running.
    bool stop_layout();
    bool layout_running();
    void pin(const GlobalKey& key, Vec2 at);
    void unpin(const GlobalKey& key);
    LayoutParams layout_params() const;

    /// Blocks until a frame newer than `after_seq` exists or `timeout` passes.
    /// With no task ever started, returns an idle terminal frame at once.
    std::optional<LayoutFrame> next_frame(std::int64_t after_seq, std::chrono::milliseconds timeout);

    std::vector<SearchHit> search(std::string_view query, std::size_t limit) const;
    std::string export_json();

    /// Test hook: a fresh index must equal the incrementally maintained one.
    bool search_index_consistent() const;

private:
    struct Task;

    void stop_locked();
    void reap_locked();
    void absorb_locked(Task& task);
    void seed_positions_locked();
    void invalidate_layout_locked();
    ViewState effective_state_locked(const Graph& graph, ViewState state) const;
    LayoutState& layout_state_locked(LayoutGraph& out_graph);
    std::map<GlobalKey, Vec2> positions_for_locked(const VisibleGraph& graph) const;
    void after_mutation_locked(const JournalEntry& entry);
    void publish(LayoutFrame frame);

    const std::string id_;
    mutable std::mutex mu_;
    GraphStore store_;
    ViewState view_state_;
    SearchIndex index_;
    LayoutParams params_;

    // Last known position of every node the session has seen. Entries for
    // deleted nodes are kept so undo restores them.
    std::map<GlobalKey, Vec2> positions_;
    std::map<GlobalKey, Vec2> pins_;

    // Layout state for the current (revision, view); keeps speeds across step calls.
    std::optional<LayoutState> layout_;
    std::optional<LayoutGraph> layout_graph_;

    std::unique_ptr<Task> task_;

    std::mutex frame_mu_;
    std::condition_variable frame_cv_;
    std::optional<LayoutFrame> last_frame_;
    std::int64_t frame_seq_ = 0;
};

class SessionManager {
public:
    explicit SessionManager(std::size_t max_sessions = 32) : max_sessions_(max_sessions) {}

    /// Builds a session from a validated file. Throws SessionLimitReached.
    /// A requested id that is already taken gets a fresh one instead.
    std::shared_ptr<Session> create(const ImportFile& file, std::optional<std::string> id = std::nullopt);
    std::shared_ptr<Session> get(const std::string& id) const;
    bool remove(const std::string& id);
    std::size_t size() const;
    std::size_t max_sessions() const { return max_sessions_; }

private:
    std::string fresh_id_locked();

    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::size_t max_sessions_;
    std::uint64_t counter_ = 0;
    std::uint64_t salt_ = 0;
};

}  // namespace entigraph
