#include "entigraph/types.hpp"

namespace entigraph {

std::string_view to_tag(EntityClass c) {
    switch (c) {
        case EntityClass::Person: return "PER";
        case EntityClass::Organization: return "ORG";
        case EntityClass::Location: return "LOC";
        case EntityClass::Misc: return "MISC";
    }
    return "MISC";
}

std::optional<EntityClass> entity_class_from_tag(std::string_view tag) {
    for (EntityClass c : kAllEntityClasses) {
        if (to_tag(c) == tag) return c;
    }
    return std::nullopt;
}

char kind_letter(NodeKind k) {
    switch (k) {
        case NodeKind::Document: return 'd';
        case NodeKind::Mention: return 'm';
        case NodeKind::Entity: return 'e';
    }
    return '?';
}

std::string_view kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Document: return "document";
        case NodeKind::Mention: return "mention";
        case NodeKind::Entity: return "entity";
    }
    return "?";
}

std::optional<NodeKind> node_kind_from_name(std::string_view name) {
    for (NodeKind k : kAllNodeKinds) {
        if (kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view edge_kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::MentionDocument: return "mention-document";
        case EdgeKind::MentionEntity: return "mention-entity";
        case EdgeKind::Collocation: return "collocation";
        case EdgeKind::EntityDocument: return "entity-document";
    }
    return "?";
}

std::optional<EdgeKind> edge_kind_from_name(std::string_view name) {
    for (EdgeKind k : kAllEdgeKinds) {
        if (edge_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::optional<GlobalKey> GlobalKey::parse(std::string_view text) {
    if (text.size() < 3 || text[1] != ':') return std::nullopt;
    GlobalKey key;
    switch (text[0]) {
        case 'd': key.kind = NodeKind::Document; break;
        case 'm': key.kind = NodeKind::Mention; break;
        case 'e': key.kind = NodeKind::Entity; break;
        default: return std::nullopt;
    }
    key.id = std::string(text.substr(2));
    return key;
}

std::string GlobalKey::str() const {
    std::string out;
    out.reserve(id.size() + 2);
    out.push_back(kind_letter(kind));
    out.push_back(':');
    out += id;
    return out;
}

std::strong_ordering GlobalKey::operator<=>(const GlobalKey& other) const {
    if (auto c = kind_letter(kind) <=> kind_letter(other.kind); c != 0) return c;
    return id <=> other.id;
}

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownKey: return "unknown-key";
        case ErrorCode::DuplicateId: return "duplicate-id";
        case ErrorCode::DanglingReference: return "dangling-reference";
        case ErrorCode::SpanViolation: return "span-violation";
        case ErrorCode::InvalidOp: return "invalid-op";
        case ErrorCode::RevisionConflict: return "revision-conflict";
        case ErrorCode::EmptyHistory: return "empty-history";
        case ErrorCode::InvalidArgument: return "invalid-argument";
    }
    return "error";
}

}  // namespace entigraph
