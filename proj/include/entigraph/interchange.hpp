#pragma once

#include <map>
#include <optional>
#include <vector>

#include "entigraph/graph.hpp"
#include "entigraph/vec2.hpp"
#include "entigraph/view.hpp"

namespace entigraph {

inline constexpr int kFormatVersion = 1;

/// In-memory form of the version 1 JSON interchange file. Used for both
/// import and export; `view_state` is only written on export.
struct ImportFile {
    int version = kFormatVersion;
    std::vector<Document> documents;
    std::vector<Mention> mentions;
    std::vector<Entity> entities;
    std::vector<Link> links;
    std::optional<std::vector<Collocation>> collocations;
    std::optional<std::map<GlobalKey, Vec2>> positions;
    std::optional<ViewState> view_state;

    bool operator==(const ImportFile&) const = default;
};

using ExportFile = ImportFile;

}  // namespace entigraph
