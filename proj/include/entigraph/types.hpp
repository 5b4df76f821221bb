#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace entigraph {

// CoNLL-2003 categories.
enum class EntityClass : std::uint8_t { Person, Organization, Location, Misc };

inline constexpr EntityClass kAllEntityClasses[] = {
    EntityClass::Person, EntityClass::Organization, EntityClass::Location, EntityClass::Misc};

/// Short wire tag: PER, ORG, LOC, MISC.
std::string_view to_tag(EntityClass c);
std::optional<EntityClass> entity_class_from_tag(std::string_view tag);

enum class NodeKind : std::uint8_t { Document, Mention, Entity };

inline constexpr NodeKind kAllNodeKinds[] = {NodeKind::Document, NodeKind::Mention,
                                             NodeKind::Entity};

/// Single-letter prefix used in "kind:id" keys ('d', 'm', 'e').
char kind_letter(NodeKind k);
std::string_view kind_name(NodeKind k);  // "document", "mention", "entity"
std::optional<NodeKind> node_kind_from_name(std::string_view name);

enum class EdgeKind : std::uint8_t { MentionDocument, MentionEntity, Collocation, EntityDocument };

inline constexpr EdgeKind kAllEdgeKinds[] = {EdgeKind::MentionDocument, EdgeKind::MentionEntity,
                                             EdgeKind::Collocation, EdgeKind::EntityDocument};

std::string_view edge_kind_name(EdgeKind k);  // "mention-document", ...
std::optional<EdgeKind> edge_kind_from_name(std::string_view name);

/// Identity of a node across the whole store. Ordered by the "kind:id"
/// string form, i.e. documents < entities < mentions, then by id.
struct GlobalKey {
    NodeKind kind = NodeKind::Document;
    std::string id;

    static GlobalKey document(std::string id) { return {NodeKind::Document, std::move(id)}; }
    static GlobalKey mention(std::string id) { return {NodeKind::Mention, std::move(id)}; }
    static GlobalKey entity(std::string id) { return {NodeKind::Entity, std::move(id)}; }

    /// Parses "d:x", "m:x" or "e:x". The id part is opaque and may contain ':'.
    static std::optional<GlobalKey> parse(std::string_view text);
    std::string str() const;

    bool operator==(const GlobalKey&) const = default;
    std::strong_ordering operator<=>(const GlobalKey& other) const;
};

/// Half-open character range [start, end).
struct CharSpan {
    std::int64_t start = 0;
    std::int64_t end = 0;

    bool intersects(const CharSpan& o) const { return start < o.end && o.start < end; }
    bool operator==(const CharSpan&) const = default;
};

enum class ErrorCode {
    UnknownKey,
    DuplicateId,
    DanglingReference,
    SpanViolation,
    InvalidOp,
    RevisionConflict,
    EmptyHistory,
    InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

/// Small bit set over one of the enums above.
template <typename E>
class EnumSet {
public:
    constexpr EnumSet() = default;
    constexpr EnumSet(std::initializer_list<E> values) {
        for (E v : values) insert(v);
    }

    template <std::size_t N>
    static constexpr EnumSet of(const E (&values)[N]) {
        EnumSet s;
        for (E v : values) s.insert(v);
        return s;
    }

    constexpr bool contains(E v) const { return (bits_ >> static_cast<unsigned>(v)) & 1u; }
    constexpr void insert(E v) { bits_ |= 1u << static_cast<unsigned>(v); }
    constexpr void erase(E v) { bits_ &= ~(1u << static_cast<unsigned>(v)); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool operator==(const EnumSet&) const = default;

private:
    std::uint32_t bits_ = 0;
};

using NodeKindSet = EnumSet<NodeKind>;
using EntityClassSet = EnumSet<EntityClass>;
using EdgeKindSet = EnumSet<EdgeKind>;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string subject, const std::string& message)
        : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

    ErrorCode code() const noexcept { return code_; }
    /// The offending id or key, when there is one.
    const std::string& subject() const noexcept { return subject_; }

private:
    ErrorCode code_;
    std::string subject_;
};

}  // namespace entigraph
