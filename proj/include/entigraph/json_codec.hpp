#pragma once

// nlohmann/json encoders and decoders for the wire dialect shared by the
// interchange files, the HTTP service and the Python bindings.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entigraph/interchange.hpp"
#include "entigraph/layout.hpp"
#include "entigraph/mutation.hpp"
#include "entigraph/search_index.hpp"
#include "entigraph/view.hpp"

namespace entigraph::codec {

using nlohmann::json;

json to_json(const ImportFile& file);
json to_json(const ViewState& state);
json to_json(const RuleFilter& rule);
json to_json(const FocusState& focus);
json to_json(const MutationOp& op);
json to_json(const SearchHit& hit);
json to_json(const VisibleGraph& view);
json to_json(const std::map<GlobalKey, Vec2>& positions);
json to_json(const LayoutParams& params);

// Decoders throw ImportError with the offending path.
ViewState view_state_from_json(const json& j, const std::string& path = "viewState");
RuleFilter rule_filter_from_json(const json& j, const std::string& path = "ruleFilter");
FocusState focus_state_from_json(const json& j, const std::string& path = "focusState");
LayoutParams layout_params_from_json(const json& j, const std::string& path = "params");

// Decoders for ops throw Error(InvalidOp) naming the bad field.
MutationOp op_from_json(const json& j);
std::vector<MutationOp> ops_from_json(const json& j);

}  // namespace entigraph::codec
