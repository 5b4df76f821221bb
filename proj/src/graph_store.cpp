#include "entigraph/graph_store.hpp"

#include <map>

namespace entigraph {

GraphStore::GraphStore(Graph graph) : graph_(std::move(graph)) {}

std::shared_ptr<const Graph> GraphStore::snapshot() const {
    if (!snapshot_) snapshot_ = std::make_shared<const Graph>(graph_);
    return snapshot_;
}

void GraphStore::bump() {
    ++revision_;
    snapshot_.reset();
}

std::vector<MutationOp> GraphStore::apply_batch(const std::vector<MutationOp>& ops) {
    std::vector<std::vector<MutationOp>> inverses;
    inverses.reserve(ops.size());
    try {
        for (const auto& op : ops) inverses.push_back(apply_op(graph_, op));
    } catch (...) {
        for (auto it = inverses.rbegin(); it != inverses.rend(); ++it) {
            for (const auto& inv : *it) apply_op(graph_, inv);
        }
        throw;
    }
    std::vector<MutationOp> inverse;
    for (auto it = inverses.rbegin(); it != inverses.rend(); ++it) {
        inverse.insert(inverse.end(), it->begin(), it->end());
    }
    return inverse;
}

JournalEntry GraphStore::apply(const std::vector<MutationOp>& ops,
                               std::optional<std::int64_t> expected_revision) {
    if (expected_revision && *expected_revision != revision_) {
        throw Error(ErrorCode::RevisionConflict, std::to_string(revision_),
                    "revision conflict: expected " + std::to_string(*expected_revision) +
                        ", current " + std::to_string(revision_));
    }
    if (ops.empty()) throw Error(ErrorCode::InvalidOp, "", "empty op batch");

    JournalEntry entry;
    entry.ops = ops;
    entry.inverse = apply_batch(ops);
    bump();
    entry.revision = revision_;
    journal_.push_back(entry);
    redo_.clear();
    return entry;
}

JournalEntry GraphStore::delete_node(const GlobalKey& key) { return apply({DeleteNode{key}}); }

JournalEntry GraphStore::merge_entities(const std::string& keep, const std::string& absorb) {
    return apply({MergeEntities{keep, absorb}});
}

std::int64_t GraphStore::undo() {
    if (journal_.empty()) throw Error(ErrorCode::EmptyHistory, "", "nothing to undo");
    JournalEntry entry = std::move(journal_.back());
    journal_.pop_back();
    apply_batch(entry.inverse);
    bump();
    entry.revision = revision_;
    redo_.push_back(std::move(entry));
    return revision_;
}

std::int64_t GraphStore::redo() {
    if (redo_.empty()) throw Error(ErrorCode::EmptyHistory, "", "nothing to redo");
    JournalEntry entry = std::move(redo_.back());
    redo_.pop_back();
    entry.inverse = apply_batch(entry.ops);
    bump();
    entry.revision = revision_;
    journal_.push_back(std::move(entry));
    return revision_;
}

GraphStore build_from_import(const ImportFile& file) {
    Graph g;
    for (const auto& d : file.documents) g.insert_document(d);
    for (const auto& m : file.mentions) g.insert_mention(m);
    for (const auto& e : file.entities) g.insert_entity(e);
    for (const auto& l : file.links) g.insert_link(l);
    if (file.collocations) {
        for (const auto& c : *file.collocations) g.insert_collocation(c);
    } else {
        std::map<std::string, std::vector<Mention>> by_doc;
        for (const auto& [id, m] : g.mentions()) by_doc[m.document].push_back(m);
        for (const auto& [doc, mentions] : by_doc) {
            for (auto& c : derive_collocations(g.documents().at(doc), mentions)) {
                g.insert_collocation(std::move(c));
            }
        }
    }
    return GraphStore(std::move(g));
}

}  // namespace entigraph
