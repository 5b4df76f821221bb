#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "entigraph/graph.hpp"
#include "entigraph/interchange.hpp"
#include "entigraph/mutation.hpp"

namespace entigraph {

/// Journaled owner of a Graph.
///
/// Single writer: calls must be serialized by the owner. Snapshots returned by
/// `snapshot()` are immutable and stay valid across later mutations, so they
/// can be handed to other threads.
class GraphStore {
public:
    GraphStore() = default;
    explicit GraphStore(Graph graph);

    const Graph& graph() const { return graph_; }
    std::shared_ptr<const Graph> snapshot() const;
    std::int64_t revision() const { return revision_; }

    /// Applies `ops` atomically. On any failure the store is left exactly as
    /// it was. Clears the redo stack and bumps the revision by one.
    JournalEntry apply(const std::vector<MutationOp>& ops,
                       std::optional<std::int64_t> expected_revision = std::nullopt);

    JournalEntry delete_node(const GlobalKey& key);
    JournalEntry merge_entities(const std::string& keep, const std::string& absorb);

    /// Both return the new revision; both count as a state change.
    std::int64_t undo();
    std::int64_t redo();

    bool can_undo() const { return !journal_.empty(); }
    bool can_redo() const { return !redo_.empty(); }
    const std::vector<JournalEntry>& history() const { return journal_; }
    /// Top of the redo stack is the back element.
    const std::vector<JournalEntry>& redo_stack() const { return redo_; }

    std::set<GlobalKey> neighbors(const GlobalKey& key, EdgeKindSet kinds) const {
        return graph_.neighbors(key, kinds);
    }
    std::vector<IdPair> class_mismatches() const { return graph_.class_mismatches(); }

private:
    std::vector<MutationOp> apply_batch(const std::vector<MutationOp>& ops);
    void bump();

    Graph graph_;
    std::vector<JournalEntry> journal_;
    std::vector<JournalEntry> redo_;
    std::int64_t revision_ = 0;
    mutable std::shared_ptr<const Graph> snapshot_;
};

/// Builds a store at revision 0. Collocations come from `file.collocations`
/// when present, otherwise they are derived from sentence spans.
GraphStore build_from_import(const ImportFile& file);

}  // namespace entigraph
