#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "entigraph/graph.hpp"

namespace entigraph {

struct AddNode {
    std::variant<Document, Mention, Entity> node;
    bool operator==(const AddNode&) const = default;
};

/// Cascades: a document takes its mentions along; a mention takes its edges;
/// an entity takes its links but leaves the mentions in place.
struct DeleteNode {
    GlobalKey key;
    bool operator==(const DeleteNode&) const = default;
};

/// Only MentionEntity (a = mention, b = entity) and Collocation edges are
/// storable. MentionDocument edges exist by virtue of the mention itself.
struct AddEdge {
    EdgeKind kind = EdgeKind::MentionEntity;
    GlobalKey a;
    GlobalKey b;
    double confidence = 1.0;
    std::int64_t weight = 1;
    bool operator==(const AddEdge&) const = default;
};

struct DeleteEdge {
    EdgeKind kind = EdgeKind::MentionEntity;
    GlobalKey a;
    GlobalKey b;
    bool operator==(const DeleteEdge&) const = default;
};

struct SetEntityTerm {
    std::string entity;
    std::string term;
    bool operator==(const SetEntityTerm&) const = default;
};

struct SetNodeClass {
    GlobalKey key;
    EntityClass entity_class = EntityClass::Misc;
    bool operator==(const SetNodeClass&) const = default;
};

/// Re-points every link of `absorb` to `keep`, then deletes `absorb`.
/// When a mention already links `keep`, the higher confidence survives.
struct MergeEntities {
    std::string keep;
    std::string absorb;
    bool operator==(const MergeEntities&) const = default;
};

using MutationOp =
    std::variant<AddNode, DeleteNode, AddEdge, DeleteEdge, SetEntityTerm, SetNodeClass, MergeEntities>;

std::string_view op_name(const MutationOp& op);

/// One atomic batch: the ops as requested, the ops that exactly undo them
/// (to be applied in order), and the revision the batch produced.
struct JournalEntry {
    std::vector<MutationOp> ops;
    std::vector<MutationOp> inverse;
    std::int64_t revision = 0;

    /// Node keys created, removed or modified by the entry in either direction.
    std::vector<GlobalKey> touched_nodes() const;
};

/// Applies one op to `graph` and returns its inverse. Throws `Error` and
/// leaves the graph untouched if the op is invalid at this point.
std::vector<MutationOp> apply_op(Graph& graph, const MutationOp& op);

}  // namespace entigraph
