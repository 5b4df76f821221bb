#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entigraph/graph.hpp"

namespace entigraph {

/// Structural view: full document-mention-entity graph, or documents and
/// entities joined by derived entity-document edges.
enum class ViewMode : std::uint8_t { DME, DE };
enum class ColorScheme : std::uint8_t { ByType, ByClass };

std::string_view view_mode_name(ViewMode m);  // "dme" / "de"
std::optional<ViewMode> view_mode_from_name(std::string_view name);
std::string_view color_scheme_name(ColorScheme s);  // "byType" / "byClass"
std::optional<ColorScheme> color_scheme_from_name(std::string_view name);

struct RuleFilter {
    NodeKindSet node_kinds = NodeKindSet::of(kAllNodeKinds);
    EntityClassSet entity_classes = EntityClassSet::of(kAllEntityClasses);
    // Collocations start hidden.
    EdgeKindSet edge_kinds{EdgeKind::MentionDocument, EdgeKind::MentionEntity,
                           EdgeKind::EntityDocument};

    bool operator==(const RuleFilter&) const = default;
};

struct FocusState {
    std::optional<GlobalKey> selected;
    std::optional<GlobalKey> focused;

    bool operator==(const FocusState&) const = default;
};

struct ViewState {
    ViewMode mode = ViewMode::DME;
    RuleFilter rule;
    FocusState focus;
    ColorScheme scheme = ColorScheme::ByType;

    bool operator==(const ViewState&) const = default;
};

struct StructuralNode {
    GlobalKey key;
    std::optional<EntityClass> entity_class;  // unset for documents

    bool operator==(const StructuralNode&) const = default;
};

/// Nodes sorted by key; edges sorted by (kind, a, b).
struct StructuralGraph {
    std::vector<StructuralNode> nodes;
    std::vector<Edge> edges;

    bool contains(const GlobalKey& key) const;
    bool operator==(const StructuralGraph&) const = default;
};

/// Filter output; carries the focus state so emphasis can be mapped later.
struct FilteredGraph {
    std::vector<StructuralNode> nodes;
    std::vector<Edge> edges;
    FocusState focus;

    bool operator==(const FilteredGraph&) const = default;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    static constexpr Rgb from_hex(std::uint32_t v) {
        return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
                static_cast<std::uint8_t>(v)};
    }
    std::string hex() const;  // "#RRGGBB"
    bool operator==(const Rgb&) const = default;
};

enum class Pictogram : std::uint8_t { Document, Person, Organization, Location, Misc };
std::string_view pictogram_name(Pictogram p);

enum class EdgeStyle : std::uint8_t { Membership, Link, Collocation, Virtual };
std::string_view edge_style_name(EdgeStyle s);

struct VisualNode {
    GlobalKey key;
    double radius = 0.0;
    Rgb fill;
    Pictogram pictogram = Pictogram::Document;
    bool emphasis = false;

    bool operator==(const VisualNode&) const = default;
};

struct VisualEdge {
    GlobalKey a;
    GlobalKey b;
    EdgeKind kind = EdgeKind::MentionDocument;
    std::int64_t weight = 1;
    double confidence = 1.0;
    EdgeStyle style = EdgeStyle::Membership;

    std::string id() const;
    bool operator==(const VisualEdge&) const = default;
};

struct VisibleGraph {
    std::vector<VisualNode> nodes;
    std::vector<VisualEdge> edges;

    bool operator==(const VisibleGraph&) const = default;
};

namespace palette {
inline constexpr Rgb kDocument = Rgb::from_hex(0x607D8B);
inline constexpr Rgb kMention = Rgb::from_hex(0xFB8C00);
inline constexpr Rgb kEntity = Rgb::from_hex(0x43A047);
inline constexpr Rgb kPerson = Rgb::from_hex(0xE53935);
inline constexpr Rgb kOrganization = Rgb::from_hex(0x1E88E5);
inline constexpr Rgb kLocation = Rgb::from_hex(0x43A047);
inline constexpr Rgb kMisc = Rgb::from_hex(0xFDD835);
}  // namespace palette

inline constexpr double kDocumentRadius = 8.0;
inline constexpr double kEntityRadius = 6.0;
inline constexpr double kMentionRadius = 4.0;

StructuralGraph project_view(const Graph& graph, ViewMode mode);

/// Node n is visible iff it passes the rule filter and, when a focus node f is
/// set, n is f, a structural neighbor of f, or the selected node. Edge e is
/// visible iff its kind is allowed, both ends are visible and, when a node s
/// is selected, s or f is one of its ends. Throws UnknownKey if a focus key is
/// not part of `structural`.
FilteredGraph apply_filters(const StructuralGraph& structural, const RuleFilter& rule,
                            const FocusState& focus);

VisibleGraph map_visuals(const FilteredGraph& filtered, ColorScheme scheme);

/// project_view, apply_filters and map_visuals in one go.
VisibleGraph build_view(const Graph& graph, const ViewState& state);

}  // namespace entigraph
