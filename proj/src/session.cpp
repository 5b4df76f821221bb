#include "entigraph/session.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>

#include "entigraph/io.hpp"

namespace entigraph {

namespace {

bool node_in_view(const Graph& graph, const GlobalKey& key, ViewMode mode) {
    switch (key.kind) {
        case NodeKind::Document: return graph.documents().contains(key.id);
        case NodeKind::Entity: return graph.entities().contains(key.id);
        case NodeKind::Mention: return mode == ViewMode::DME && graph.mentions().contains(key.id);
    }
    return false;
}

bool node_in_store(const Graph& graph, const GlobalKey& key) {
    return node_in_view(graph, key, ViewMode::DME);
}

bool same_structure(const ViewState& a, const ViewState& b) {
    return a.mode == b.mode && a.rule == b.rule && a.focus == b.focus;
}

}  // namespace

struct Session::Task {
    std::thread thread;
    std::atomic<bool> stop{false};
    std::atomic<bool> done{false};

    std::mutex mu;  // pending pins only
    std::vector<std::pair<GlobalKey, std::optional<Vec2>>> pending_pins;

    // Owned by the worker until it finishes.
    LayoutState state;
    LayoutGraph graph;
    LayoutParams params;
    std::int64_t revision = 0;
    std::int64_t base_seq = 0;
};

Session::Session(std::string id, GraphStore store, const ImportFile& source)
    : id_(std::move(id)), store_(std::move(store)) {
    view_state_ = source.view_state.value_or(ViewState{});
    if (source.positions) positions_ = *source.positions;
    seed_positions_locked();
    index_ = SearchIndex::build(store_.graph());
}

Session::~Session() {
    std::lock_guard lock(mu_);
    stop_locked();
}

std::int64_t Session::revision() const {
    std::lock_guard lock(mu_);
    return store_.revision();
}

ViewState Session::view_state() const {
    std::lock_guard lock(mu_);
    return view_state_;
}

LayoutParams Session::layout_params() const {
    std::lock_guard lock(mu_);
    return params_;
}

void Session::seed_positions_locked() {
    std::vector<GlobalKey> keys = store_.graph().node_keys();
    bool missing = std::any_of(keys.begin(), keys.end(), [&](const GlobalKey& k) { return !positions_.contains(k); });
    if (!missing) return;
    std::vector<Vec2> init = init_positions(keys, params_.seed);
    for (std::size_t i = 0; i < keys.size(); ++i) positions_.try_emplace(keys[i], init[i]);
}

ViewState Session::effective_state_locked(const Graph& graph, ViewState state) const {
    // Focus keys the current projection does not contain act as unset.
    if (state.focus.selected && !node_in_view(graph, *state.focus.selected, state.mode)) {
        state.focus.selected.reset();
    }
    if (state.focus.focused && !node_in_view(graph, *state.focus.focused, state.mode)) {
        state.focus.focused.reset();
    }
    return state;
}

void Session::invalidate_layout_locked() {
    layout_.reset();
    layout_graph_.reset();
}

LayoutState& Session::layout_state_locked(LayoutGraph& out_graph) {
    if (!layout_) {
        const VisibleGraph view = build_view(store_.graph(), effective_state_locked(store_.graph(), view_state_));
        LayoutGraph lg = LayoutGraph::from_visible(view);
        std::vector<Vec2> pos;
        pos.reserve(lg.nodes.size());
        for (const auto& k : lg.nodes) pos.push_back(positions_.at(k));
        layout_ = LayoutState::with_positions(lg.nodes, std::move(pos));
        for (const auto& [k, p] : pins_) {
            if (layout_->index_of(k)) layout_->pin(k, p);
        }
        layout_graph_ = std::move(lg);
    }
    out_graph = *layout_graph_;
    return *layout_;
}

std::map<GlobalKey, Vec2> Session::positions_for_locked(const VisibleGraph& graph) const {
    std::map<GlobalKey, Vec2> out;
    for (const auto& n : graph.nodes) {
        auto it = positions_.find(n.key);
        if (it != positions_.end()) out.emplace_hint(out.end(), n.key, it->second);
    }
    return out;
}

void Session::publish(LayoutFrame frame) {
    {
        std::lock_guard lock(frame_mu_);
        frame.seq = ++frame_seq_;
        last_frame_ = std::move(frame);
    }
    frame_cv_.notify_all();
}

void Session::absorb_locked(Task& task) {
    for (const auto& [k, p] : task.state.position_map()) positions_[k] = p;
    layout_ = std::move(task.state);
    layout_graph_ = std::move(task.graph);
}

void Session::reap_locked() {
    if (task_ && task_->done.load()) {
        task_->thread.join();
        absorb_locked(*task_);
        task_.reset();
    }
}

void Session::stop_locked() {
    if (!task_) return;
    task_->stop.store(true);
    task_->thread.join();
    absorb_locked(*task_);
    task_.reset();
}

ViewSnapshot Session::view(std::optional<ViewMode> mode, std::optional<ColorScheme> scheme) {
    std::shared_ptr<const Graph> graph;
    ViewSnapshot out;
    std::map<GlobalKey, Vec2> positions;
    {
        std::lock_guard lock(mu_);
        reap_locked();
        graph = store_.snapshot();
        out.revision = store_.revision();
        out.state = view_state_;
        if (mode) out.state.mode = *mode;
        if (scheme) out.state.scheme = *scheme;
        out.state = effective_state_locked(*graph, out.state);
        positions = positions_;
        if (task_) {
            std::lock_guard flock(frame_mu_);
            if (last_frame_ && last_frame_->seq > task_->base_seq) {
                for (const auto& [k, p] : last_frame_->positions) positions[k] = p;
            }
        }
    }
    out.graph = build_view(*graph, out.state);
    for (const auto& n : out.graph.nodes) {
        auto it = positions.find(n.key);
        if (it != positions.end()) out.positions.emplace_hint(out.positions.end(), n.key, it->second);
    }
    return out;
}

std::int64_t Session::set_view(const ViewState& state) {
    std::lock_guard lock(mu_);
    reap_locked();
    for (const auto& key : {state.focus.selected, state.focus.focused}) {
        if (key && !node_in_store(store_.graph(), *key)) {
            throw Error(ErrorCode::UnknownKey, key->str(), "no node " + key->str());
        }
    }
    const bool structural = !same_structure(state, view_state_);
    if (structural) {
        stop_locked();
        invalidate_layout_locked();
    }
    view_state_ = state;
    return store_.revision();
}

void Session::after_mutation_locked(const JournalEntry& entry) {
    const std::vector<GlobalKey> touched = entry.touched_nodes();
    index_.refresh(store_.graph(), touched);
    seed_positions_locked();
    invalidate_layout_locked();
}

JournalEntry Session::mutate(const std::vector<MutationOp>& ops, std::int64_t expected_revision) {
    std::lock_guard lock(mu_);
    reap_locked();
    if (expected_revision != store_.revision()) {
        throw Error(ErrorCode::RevisionConflict, "expectedRevision",
                    "expected revision " + std::to_string(expected_revision) + " but session is at " +
                        std::to_string(store_.revision()));
    }
    stop_locked();
    JournalEntry entry = store_.apply(ops, expected_revision);
    after_mutation_locked(entry);
    return entry;
}

std::int64_t Session::undo(std::optional<std::int64_t> expected_revision) {
    std::lock_guard lock(mu_);
    reap_locked();
    if (expected_revision && *expected_revision != store_.revision()) {
        throw Error(ErrorCode::RevisionConflict, "expectedRevision", "stale revision");
    }
    if (!store_.can_undo()) throw Error(ErrorCode::EmptyHistory, "undo", "nothing to undo");
    stop_locked();
    JournalEntry entry = store_.history().back();
    const std::int64_t rev = store_.undo();
    after_mutation_locked(entry);
    return rev;
}

std::int64_t Session::redo(std::optional<std::int64_t> expected_revision) {
    std::lock_guard lock(mu_);
    reap_locked();
    if (expected_revision && *expected_revision != store_.revision()) {
        throw Error(ErrorCode::RevisionConflict, "expectedRevision", "stale revision");
    }
    if (!store_.can_redo()) throw Error(ErrorCode::EmptyHistory, "redo", "nothing to redo");
    stop_locked();
    JournalEntry entry = store_.redo_stack().back();
    const std::int64_t rev = store_.redo();
    after_mutation_locked(entry);
    return rev;
}

StepResult Session::step(std::int64_t steps, std::optional<LayoutParams> params) {
    std::lock_guard lock(mu_);
    reap_locked();
    if (task_) throw LayoutBusy();
    if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps", "steps must be >= 0");
    if (params) {
        params->validate();
        params_ = *params;
    }
    LayoutGraph graph;
    LayoutState& state = layout_state_locked(graph);
    StepResult out;
    out.metrics = run(state, graph, params_, steps);
    out.positions = state.position_map();
    for (const auto& [k, p] : out.positions) positions_[k] = p;
    out.iteration = state.iteration();
    out.revision = store_.revision();
    return out;
}

void Session::start_layout(const LayoutStartOptions& options) {
    std::lock_guard lock(mu_);
    reap_locked();
    if (task_) throw LayoutBusy();
    if (options.max_iterations < 0) {
        throw Error(ErrorCode::InvalidArgument, "maxIterations", "maxIterations must be >= 0");
    }
    if (options.params) {
        options.params->validate();
        params_ = *options.params;
    }

    auto task = std::make_unique<Task>();
    layout_state_locked(task->graph);
    task->state = std::move(*layout_);
    layout_.reset();
    task->params = params_;
    task->revision = store_.revision();
    {
        std::lock_guard flock(frame_mu_);
        task->base_seq = frame_seq_;
    }

    Task* t = task.get();
    const std::int64_t max_iterations = options.max_iterations;
    const double threshold = options.convergence_threshold;
    const auto interval = options.frame_interval;
    task->thread = std::thread([this, t, max_iterations, threshold, interval] {
        using clock = std::chrono::steady_clock;
        auto last_emit = clock::now();
        StepStats stats;
        std::string reason = "limit";
        for (std::int64_t i = 0; i < max_iterations; ++i) {
            if (t->stop.load()) {
                reason = "stopped";
                break;
            }
            {
                std::lock_guard plock(t->mu);
                for (const auto& [key, at] : t->pending_pins) {
                    if (!t->state.index_of(key)) continue;
                    if (at) {
                        t->state.pin(key, *at);
                    } else {
                        t->state.unpin(key);
                    }
                }
                t->pending_pins.clear();
            }
            stats = entigraph::step(t->state, t->graph, t->params);
            if (stats.max_displacement < threshold) {
                reason = "converged";
                break;
            }
            const auto now = clock::now();
            if (now - last_emit >= interval) {
                publish({0, t->state.iteration(), t->revision, false, "", t->state.position_map(), stats});
                last_emit = now;
            }
        }
        if (t->stop.load()) reason = "stopped";
        LayoutFrame last{0, t->state.iteration(), t->revision, true, reason, t->state.position_map(), stats};
        // done before the terminal frame so a subscriber never sees "running" after it
        t->done.store(true);
        publish(std::move(last));
    });
    task_ = std::move(task);
}

bool Session::stop_layout() {
    std::lock_guard lock(mu_);
    const bool running = task_ && !task_->done.load();
    stop_locked();
    return running;
}

bool Session::layout_running() {
    std::lock_guard lock(mu_);
    reap_locked();
    return task_ != nullptr;
}

void Session::pin(const GlobalKey& key, Vec2 at) {
    std::lock_guard lock(mu_);
    reap_locked();
    if (!node_in_store(store_.graph(), key)) throw Error(ErrorCode::UnknownKey, key.str(), "no node " + key.str());
    if (!std::isfinite(at.x) || !std::isfinite(at.y)) {
        throw Error(ErrorCode::InvalidArgument, "position", "position must be finite");
    }
    pins_[key] = at;
    positions_[key] = at;
    if (task_) {
        std::lock_guard plock(task_->mu);
        task_->pending_pins.emplace_back(key, at);
    } else if (layout_ && layout_->index_of(key)) {
        layout_->pin(key, at);
    }
}

void Session::unpin(const GlobalKey& key) {
    std::lock_guard lock(mu_);
    reap_locked();
    if (!node_in_store(store_.graph(), key)) throw Error(ErrorCode::UnknownKey, key.str(), "no node " + key.str());
    pins_.erase(key);
    if (task_) {
        std::lock_guard plock(task_->mu);
        task_->pending_pins.emplace_back(key, std::nullopt);
    } else if (layout_ && layout_->index_of(key)) {
        layout_->unpin(key);
    }
}

std::optional<LayoutFrame> Session::next_frame(std::int64_t after_seq, std::chrono::milliseconds timeout) {
    {
        std::lock_guard lock(mu_);
        reap_locked();
        if (task_) {
            after_seq = std::max(after_seq, task_->base_seq);
        } else {
            bool fresh = false;
            {
                std::lock_guard flock(frame_mu_);
                fresh = last_frame_ && last_frame_->seq > after_seq;
            }
            if (!fresh) {
                const VisibleGraph view =
                    build_view(store_.graph(), effective_state_locked(store_.graph(), view_state_));
                LayoutFrame idle;
                idle.iteration = layout_ ? layout_->iteration() : 0;
                idle.revision = store_.revision();
                idle.terminal = true;
                idle.reason = "idle";
                idle.positions = positions_for_locked(view);
                publish(std::move(idle));
            }
        }
    }
    std::unique_lock flock(frame_mu_);
    const bool ready = frame_cv_.wait_for(flock, timeout, [&] { return last_frame_ && last_frame_->seq > after_seq; });
    if (!ready) return std::nullopt;
    return last_frame_;
}

std::vector<SearchHit> Session::search(std::string_view query, std::size_t limit) const {
    std::lock_guard lock(mu_);
    return index_.query(query, limit);
}

bool Session::search_index_consistent() const {
    std::lock_guard lock(mu_);
    return index_ == SearchIndex::build(store_.graph());
}

std::string Session::export_json() {
    std::lock_guard lock(mu_);
    reap_locked();
    std::map<GlobalKey, Vec2> live = positions_;
    if (task_) {
        std::lock_guard flock(frame_mu_);
        if (last_frame_ && last_frame_->seq > task_->base_seq) {
            for (const auto& [k, p] : last_frame_->positions) live[k] = p;
        }
    }
    std::map<GlobalKey, Vec2> positions;
    for (const auto& k : store_.graph().node_keys()) {
        auto it = live.find(k);
        if (it != live.end()) positions.emplace_hint(positions.end(), k, it->second);
    }
    return export_graph(store_.graph(), view_state_, positions);
}

std::shared_ptr<Session> SessionManager::create(const ImportFile& file, std::optional<std::string> wanted) {
    GraphStore store = build_from_import(file);
    std::lock_guard lock(mu_);
    if (sessions_.size() >= max_sessions_) throw SessionLimitReached(max_sessions_);
    std::string id = wanted && !wanted->empty() && !sessions_.contains(*wanted) ? *wanted : fresh_id_locked();
    auto session = std::make_shared<Session>(id, std::move(store), file);
    sessions_.emplace(std::move(id), session);
    return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionNotFound(id);
    return it->second;
}

bool SessionManager::remove(const std::string& id) {
    std::shared_ptr<Session> doomed;
    {
        std::lock_guard lock(mu_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) return false;
        doomed = std::move(it->second);
        sessions_.erase(it);
    }
    return true;  // destroyed outside the lock once the last handle drops
}

std::size_t SessionManager::size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

std::string SessionManager::fresh_id_locked() {
    if (salt_ == 0) salt_ = (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}() ^ 1;
    for (;;) {
        std::uint64_t state = salt_ + counter_++;
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(splitmix64(state)));
        if (!sessions_.contains(buf)) return buf;
    }
}

}  // namespace entigraph
