#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entigraph/graph.hpp"
#include "entigraph/interchange.hpp"

namespace entigraph {

enum class ViolationKind {
    MalformedSyntax,
    UnknownVersion,
    Schema,
    DanglingReference,
    DuplicateId,
    SpanViolation,
    OutOfRange,
};

std::string_view violation_kind_name(ViolationKind k);

/// One problem in an interchange file. `path` uses JSON-pointer-like dotted
/// notation, e.g. "links[2].confidence".
struct Violation {
    ViolationKind kind = ViolationKind::Schema;
    std::string path;
    std::string reason;

    bool operator==(const Violation&) const = default;
};

class ImportError : public std::runtime_error {
public:
    explicit ImportError(Violation v)
        : std::runtime_error(v.path.empty() ? v.reason : v.path + ": " + v.reason),
          violation_(std::move(v)) {}
    const Violation& violation() const noexcept { return violation_; }

private:
    Violation violation_;
};

/// Syntax and schema only; semantic checks are left to `validate`.
/// Throws ImportError on the first problem found.
ImportFile parse_import_unchecked(std::string_view bytes);

/// Every semantic violation, in file order (documents, mentions, entities,
/// links, collocations, positions). Empty means the file builds cleanly.
std::vector<Violation> validate(const ImportFile& file);

/// parse_import_unchecked followed by validate; throws the first violation.
ImportFile parse_import(std::string_view bytes);

/// Canonical serialization: sorted keys, arrays sorted by id, no
/// insignificant whitespace, UTF-8, terminated by a single LF.
std::string serialize(const ImportFile& file);

/// Self-contained export of the graph with explicit collocations and,
/// when given, positions and view state.
ExportFile to_export_file(const Graph& graph, const std::optional<ViewState>& view_state = std::nullopt,
                          const std::optional<std::map<GlobalKey, Vec2>>& positions = std::nullopt);

std::string export_graph(const Graph& graph, const std::optional<ViewState>& view_state = std::nullopt,
                         const std::optional<std::map<GlobalKey, Vec2>>& positions = std::nullopt);

/// Canonical bytes of the graph alone; equal graphs give equal bytes.
inline std::string canonical_json(const Graph& graph) { return export_graph(graph); }

}  // namespace entigraph
