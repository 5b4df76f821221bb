#include "entigraph/mutation.hpp"

#include <algorithm>
#include <set>

namespace entigraph {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

[[noreturn]] void invalid(const std::string& subject, const std::string& what) {
    throw Error(ErrorCode::InvalidOp, subject, what + ": " + subject);
}

void require(const Graph& g, const GlobalKey& key) {
    if (!g.contains(key)) throw Error(ErrorCode::UnknownKey, key.str(), "unknown node: " + key.str());
}

AddEdge link_edge(const std::string& mention, const std::string& entity, double confidence) {
    return {EdgeKind::MentionEntity, GlobalKey::mention(mention), GlobalKey::entity(entity),
            confidence, 1};
}

AddEdge colloc_edge(const std::string& a, const std::string& b, std::int64_t weight) {
    return {EdgeKind::Collocation, GlobalKey::mention(a), GlobalKey::mention(b), 1.0, weight};
}

DeleteEdge unlink_edge(const std::string& mention, const std::string& entity) {
    return {EdgeKind::MentionEntity, GlobalKey::mention(mention), GlobalKey::entity(entity)};
}

// Validates that (kind, a, b) names a storable edge shape.
void check_storable(EdgeKind kind, const GlobalKey& a, const GlobalKey& b) {
    switch (kind) {
        case EdgeKind::EntityDocument:
            invalid(a.str() + "|" + b.str(), "entity-document edges are virtual and not storable");
        case EdgeKind::MentionDocument:
            invalid(a.str() + "|" + b.str(),
                    "mention-document edges are fixed by the mention's document");
        case EdgeKind::MentionEntity:
            if (a.kind != NodeKind::Mention || b.kind != NodeKind::Entity) {
                invalid(a.str() + "|" + b.str(), "mention-entity edge needs (mention, entity)");
            }
            return;
        case EdgeKind::Collocation:
            if (a.kind != NodeKind::Mention || b.kind != NodeKind::Mention) {
                invalid(a.str() + "|" + b.str(), "collocation edge needs two mentions");
            }
            return;
    }
}

// Removes every link and collocation of `mention`, recording AddEdge ops that
// restore them. Collocations shared by two cascaded mentions are recorded once.
void delete_mention_edges(Graph& g, const std::string& mention,
                          std::vector<MutationOp>& restore_edges, std::set<IdPair>& collocs_seen) {
    for (const auto& e : std::vector<std::string>(g.entities_of_mention(mention).begin(),
                                                  g.entities_of_mention(mention).end())) {
        restore_edges.push_back(link_edge(mention, e, g.links().at({mention, e})));
        g.remove_link(mention, e);
    }
    for (const auto& other : std::vector<std::string>(g.collocated_with(mention).begin(),
                                                      g.collocated_with(mention).end())) {
        auto pair = ordered_pair(mention, other);
        if (collocs_seen.insert(pair).second) {
            restore_edges.push_back(colloc_edge(pair.first, pair.second, g.collocations().at(pair)));
        }
        g.remove_collocation(pair.first, pair.second);
    }
}

std::vector<MutationOp> do_delete_node(Graph& g, const GlobalKey& key) {
    require(g, key);
    std::vector<MutationOp> inverse;
    std::vector<MutationOp> edges;
    std::set<IdPair> seen;
    switch (key.kind) {
        case NodeKind::Mention: {
            inverse.push_back(AddNode{g.mentions().at(key.id)});
            delete_mention_edges(g, key.id, edges, seen);
            g.remove_mention(key.id);
            break;
        }
        case NodeKind::Document: {
            inverse.push_back(AddNode{g.documents().at(key.id)});
            const std::vector<std::string> mentions(g.mentions_of_document(key.id).begin(),
                                                    g.mentions_of_document(key.id).end());
            for (const auto& m : mentions) inverse.push_back(AddNode{g.mentions().at(m)});
            for (const auto& m : mentions) delete_mention_edges(g, m, edges, seen);
            for (const auto& m : mentions) g.remove_mention(m);
            g.remove_document(key.id);
            break;
        }
        case NodeKind::Entity: {
            inverse.push_back(AddNode{g.entities().at(key.id)});
            const std::vector<std::string> mentions(g.mentions_of_entity(key.id).begin(),
                                                    g.mentions_of_entity(key.id).end());
            for (const auto& m : mentions) {
                edges.push_back(link_edge(m, key.id, g.links().at({m, key.id})));
                g.remove_link(m, key.id);
            }
            g.remove_entity(key.id);
            break;
        }
    }
    inverse.insert(inverse.end(), edges.begin(), edges.end());
    return inverse;
}

std::vector<MutationOp> do_merge(Graph& g, const MergeEntities& op) {
    require(g, GlobalKey::entity(op.keep));
    require(g, GlobalKey::entity(op.absorb));
    if (op.keep == op.absorb) invalid(op.keep, "cannot merge an entity into itself");

    std::vector<MutationOp> inverse;
    inverse.push_back(AddNode{g.entities().at(op.absorb)});
    const std::vector<std::string> mentions(g.mentions_of_entity(op.absorb).begin(),
                                            g.mentions_of_entity(op.absorb).end());
    for (const auto& m : mentions) {
        const double absorbed = g.links().at({m, op.absorb});
        g.remove_link(m, op.absorb);
        if (auto it = g.links().find({m, op.keep}); it != g.links().end()) {
            const double kept = it->second;
            if (absorbed > kept) {
                g.set_link_confidence(m, op.keep, absorbed);
                inverse.push_back(unlink_edge(m, op.keep));
                inverse.push_back(link_edge(m, op.keep, kept));
            }
        } else {
            g.insert_link({m, op.keep, absorbed});
            inverse.push_back(unlink_edge(m, op.keep));
        }
        inverse.push_back(link_edge(m, op.absorb, absorbed));
    }
    g.remove_entity(op.absorb);
    return inverse;
}

}  // namespace

std::string_view op_name(const MutationOp& op) {
    return std::visit(overloaded{
                          [](const AddNode&) { return std::string_view("addNode"); },
                          [](const DeleteNode&) { return std::string_view("deleteNode"); },
                          [](const AddEdge&) { return std::string_view("addEdge"); },
                          [](const DeleteEdge&) { return std::string_view("deleteEdge"); },
                          [](const SetEntityTerm&) { return std::string_view("setEntityTerm"); },
                          [](const SetNodeClass&) { return std::string_view("setNodeClass"); },
                          [](const MergeEntities&) { return std::string_view("mergeEntities"); },
                      },
                      op);
}

std::vector<MutationOp> apply_op(Graph& g, const MutationOp& op) {
    return std::visit(
        overloaded{
            [&](const AddNode& add) -> std::vector<MutationOp> {
                return std::visit(overloaded{
                                      [&](const Document& d) -> std::vector<MutationOp> {
                                          g.insert_document(d);
                                          return {DeleteNode{GlobalKey::document(d.id)}};
                                      },
                                      [&](const Mention& m) -> std::vector<MutationOp> {
                                          g.insert_mention(m);
                                          return {DeleteNode{GlobalKey::mention(m.id)}};
                                      },
                                      [&](const Entity& e) -> std::vector<MutationOp> {
                                          g.insert_entity(e);
                                          return {DeleteNode{GlobalKey::entity(e.id)}};
                                      },
                                  },
                                  add.node);
            },
            [&](const DeleteNode& del) { return do_delete_node(g, del.key); },
            [&](const AddEdge& add) -> std::vector<MutationOp> {
                check_storable(add.kind, add.a, add.b);
                if (add.kind == EdgeKind::MentionEntity) {
                    g.insert_link({add.a.id, add.b.id, add.confidence});
                } else {
                    g.insert_collocation({add.a.id, add.b.id, add.weight});
                }
                return {DeleteEdge{add.kind, add.a, add.b}};
            },
            [&](const DeleteEdge& del) -> std::vector<MutationOp> {
                check_storable(del.kind, del.a, del.b);
                if (del.kind == EdgeKind::MentionEntity) {
                    auto it = g.links().find({del.a.id, del.b.id});
                    const double conf = it == g.links().end() ? 1.0 : it->second;
                    g.remove_link(del.a.id, del.b.id);
                    return {link_edge(del.a.id, del.b.id, conf)};
                }
                auto pair = ordered_pair(del.a.id, del.b.id);
                auto it = g.collocations().find(pair);
                const std::int64_t weight = it == g.collocations().end() ? 1 : it->second;
                g.remove_collocation(del.a.id, del.b.id);
                return {colloc_edge(pair.first, pair.second, weight)};
            },
            [&](const SetEntityTerm& set) -> std::vector<MutationOp> {
                require(g, GlobalKey::entity(set.entity));
                std::string old = g.entities().at(set.entity).term;
                g.set_entity_term(set.entity, set.term);
                return {SetEntityTerm{set.entity, std::move(old)}};
            },
            [&](const SetNodeClass& set) -> std::vector<MutationOp> {
                require(g, set.key);
                auto old = g.node_class(set.key);
                if (!old) invalid(set.key.str(), "documents carry no entity class");
                g.set_node_class(set.key, set.entity_class);
                return {SetNodeClass{set.key, *old}};
            },
            [&](const MergeEntities& merge) { return do_merge(g, merge); },
        },
        op);
}

std::vector<GlobalKey> JournalEntry::touched_nodes() const {
    std::set<GlobalKey> keys;
    auto collect = [&](const MutationOp& op) {
        std::visit(overloaded{
                       [&](const AddNode& add) {
                           std::visit(overloaded{
                                          [&](const Document& d) { keys.insert(GlobalKey::document(d.id)); },
                                          [&](const Mention& m) { keys.insert(GlobalKey::mention(m.id)); },
                                          [&](const Entity& e) { keys.insert(GlobalKey::entity(e.id)); },
                                      },
                                      add.node);
                       },
                       [&](const DeleteNode& del) { keys.insert(del.key); },
                       [&](const AddEdge&) {},
                       [&](const DeleteEdge&) {},
                       [&](const SetEntityTerm& set) { keys.insert(GlobalKey::entity(set.entity)); },
                       [&](const SetNodeClass& set) { keys.insert(set.key); },
                       [&](const MergeEntities& merge) {
                           keys.insert(GlobalKey::entity(merge.keep));
                           keys.insert(GlobalKey::entity(merge.absorb));
                       },
                   },
                   op);
    };
    for (const auto& op : ops) collect(op);
    for (const auto& op : inverse) collect(op);
    return {keys.begin(), keys.end()};
}

}  // namespace entigraph
