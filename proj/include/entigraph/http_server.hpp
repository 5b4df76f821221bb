#pragma once

#include <string>

#include <httplib.h>

#include "entigraph/session.hpp"

namespace entigraph {

/// Installs the session endpoints on `server`. `sessions` must outlive it.
///
///   POST   /sessions                    import file -> 201 {id, revision}
///   DELETE /sessions/{id}
///   GET    /sessions/{id}/graph         ?mode=dme|de&scheme=byType|byClass
///   PUT    /sessions/{id}/filters       partial viewState
///   POST   /sessions/{id}/ops           {expectedRevision, ops}
///   POST   /sessions/{id}/undo, /redo   {expectedRevision?}
///   POST   /sessions/{id}/layout        {action: start|stop|step|pin|unpin, ...}
///   GET    /sessions/{id}/layout/stream server-sent events, one frame each
///   GET    /sessions/{id}/search        ?q=...&limit=10
///   GET    /sessions/{id}/export
void register_routes(httplib::Server& server, SessionManager& sessions);

/// Error body used by every non-2xx response: {"error": code, "message": text}.
std::string error_body(std::string_view code, std::string_view message);

}  // namespace entigraph
