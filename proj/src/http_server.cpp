#include "entigraph/http_server.hpp"

#include <functional>

#include "entigraph/io.hpp"
#include "entigraph/json_codec.hpp"

namespace entigraph {

namespace {

using nlohmann::json;
constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump() + "\n", kJson);
}

json violation_json(const Violation& v) {
    return {{"kind", std::string(violation_kind_name(v.kind))}, {"path", v.path}, {"reason", v.reason}};
}

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::RevisionConflict:
        case ErrorCode::EmptyHistory: return 409;
        default: return 400;
    }
}

json body_json(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    return json::parse(req.body);
}

// Runs `fn` and maps every library exception onto a status code.
void guarded(httplib::Response& res, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const SessionNotFound& e) {
        res.status = 404;
        res.set_content(error_body("unknown-session", e.what()), kJson);
    } catch (const SessionLimitReached& e) {
        res.status = 503;
        res.set_content(error_body("session-limit", e.what()), kJson);
    } catch (const LayoutBusy& e) {
        res.status = 409;
        res.set_content(error_body("layout-running", e.what()), kJson);
    } catch (const ImportError& e) {
        send(res, 400, {{"error", "invalid-file"},
                        {"message", e.what()},
                        {"violations", json::array({violation_json(e.violation())})}});
    } catch (const Error& e) {
        res.status = status_for(e.code());
        res.set_content(error_body(error_code_name(e.code()), e.what()), kJson);
    } catch (const json::exception& e) {
        res.status = 400;
        res.set_content(error_body("malformed-request", e.what()), kJson);
    } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(error_body("internal", e.what()), kJson);
    }
}

std::int64_t required_int(const json& body, const char* name) {
    auto it = body.find(name);
    if (it == body.end() || !it->is_number_integer()) {
        throw Error(ErrorCode::InvalidArgument, name, std::string(name) + " must be an integer");
    }
    return it->get<std::int64_t>();
}

std::optional<std::int64_t> optional_int(const json& body, const char* name) {
    if (!body.contains(name)) return std::nullopt;
    return required_int(body, name);
}

GlobalKey required_key(const json& body, const char* name) {
    auto it = body.find(name);
    std::optional<GlobalKey> key;
    if (it != body.end() && it->is_string()) key = GlobalKey::parse(it->get<std::string>());
    if (!key) throw Error(ErrorCode::InvalidArgument, name, std::string(name) + " must be a node key");
    return *key;
}

json frame_json(const LayoutFrame& f) {
    json j = {{"seq", f.seq},
              {"iteration", f.iteration},
              {"revision", f.revision},
              {"terminal", f.terminal},
              {"positions", codec::to_json(f.positions)},
              {"meanSwinging", f.stats.mean_swinging},
              {"meanTraction", f.stats.mean_traction},
              {"maxDisplacement", f.stats.max_displacement}};
    if (f.terminal) j["reason"] = f.reason;
    return j;
}

json view_json(const ViewSnapshot& v) {
    json j = codec::to_json(v.graph);
    j["revision"] = v.revision;
    j["viewState"] = codec::to_json(v.state);
    j["positions"] = codec::to_json(v.positions);
    return j;
}

json layout_response(const StepResult& r) {
    return {{"revision", r.revision},
            {"iteration", r.iteration},
            {"positions", codec::to_json(r.positions)},
            {"meanSwinging", r.metrics.mean_swinging},
            {"meanTraction", r.metrics.mean_traction},
            {"maxDisplacement", r.metrics.max_displacement}};
}

void handle_layout(Session& session, const json& body, httplib::Response& res) {
    if (!body.is_object() || !body.contains("action") || !body["action"].is_string()) {
        throw Error(ErrorCode::InvalidArgument, "action", "action must be a string");
    }
    const std::string action = body["action"].get<std::string>();
    std::optional<LayoutParams> params;
    if (body.contains("params")) params = codec::layout_params_from_json(body["params"]);

    if (action == "start") {
        LayoutStartOptions options;
        options.params = params;
        if (auto n = optional_int(body, "maxIterations")) options.max_iterations = *n;
        if (body.contains("convergenceThreshold")) {
            const json& t = body["convergenceThreshold"];
            if (!t.is_number() || t.get<double>() < 0.0) {
                throw Error(ErrorCode::InvalidArgument, "convergenceThreshold", "convergenceThreshold must be >= 0");
            }
            options.convergence_threshold = t.get<double>();
        }
        session.start_layout(options);
        send(res, 202, {{"running", true}, {"revision", session.revision()}});
    } else if (action == "stop") {
        const bool was_running = session.stop_layout();
        send(res, 200, {{"stopped", was_running}, {"revision", session.revision()}});
    } else if (action == "step") {
        const std::int64_t steps = optional_int(body, "steps").value_or(1);
        send(res, 200, layout_response(session.step(steps, params)));
    } else if (action == "pin") {
        const GlobalKey key = required_key(body, "key");
        auto pos = body.find("position");
        if (pos == body.end() || !pos->is_array() || pos->size() != 2 || !(*pos)[0].is_number() ||
            !(*pos)[1].is_number()) {
            throw Error(ErrorCode::InvalidArgument, "position", "position must be [x, y]");
        }
        session.pin(key, {(*pos)[0].get<double>(), (*pos)[1].get<double>()});
        send(res, 200, {{"pinned", key.str()}, {"revision", session.revision()}});
    } else if (action == "unpin") {
        const GlobalKey key = required_key(body, "key");
        session.unpin(key);
        send(res, 200, {{"unpinned", key.str()}, {"revision", session.revision()}});
    } else {
        throw Error(ErrorCode::InvalidArgument, "action", "unknown action '" + action + "'");
    }
}

}  // namespace

std::string error_body(std::string_view code, std::string_view message) {
    return json{{"error", std::string(code)}, {"message", std::string(message)}}.dump() + "\n";
}

void register_routes(httplib::Server& server, SessionManager& sessions) {
    server.Post("/sessions", [&sessions](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            ImportFile file;
            try {
                file = parse_import_unchecked(req.body);
            } catch (const ImportError& e) {
                send(res, 400, {{"error", "invalid-file"},
                                {"message", e.what()},
                                {"violations", json::array({violation_json(e.violation())})}});
                return;
            }
            if (auto violations = validate(file); !violations.empty()) {
                json list = json::array();
                for (const auto& v : violations) list.push_back(violation_json(v));
                send(res, 400, {{"error", "invalid-file"},
                                {"message", std::to_string(violations.size()) + " violation(s)"},
                                {"violations", std::move(list)}});
                return;
            }
            auto session = sessions.create(file);
            res.set_header("Location", "/sessions/" + session->id());
            send(res, 201, {{"id", session->id()}, {"revision", session->revision()}});
        });
    });

    server.Delete(R"(/sessions/([^/]+))", [&sessions](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (!sessions.remove(req.matches[1])) throw SessionNotFound(req.matches[1]);
            res.status = 204;
        });
    });

    server.Get(R"(/sessions/([^/]+)/graph)", [&sessions](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto session = sessions.get(req.matches[1]);
            std::optional<ViewMode> mode;
            std::optional<ColorScheme> scheme;
            if (req.has_param("mode")) {
                mode = view_mode_from_name(req.get_param_value("mode"));
                if (!mode) throw Error(ErrorCode::InvalidArgument, "mode", "mode must be 'dme' or 'de'");
            }
            if (req.has_param("scheme")) {
                scheme = color_scheme_from_name(req.get_param_value("scheme"));
                if (!scheme) {
                    throw Error(ErrorCode::InvalidArgument, "scheme", "scheme must be 'byType' or 'byClass'");
                }
            }
            send(res, 200, view_json(session->view(mode, scheme)));
        });
    });

    server.Put(R"(/sessions/([^/]+)/filters)", [&sessions](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto session = sessions.get(req.matches[1]);
            const json body = body_json(req);
            if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "body", "expected an object");
            // Fields left out keep their current value.
            json merged = codec::to_json(session->view_state());
            for (const auto& [k, v] : body.items()) merged[k] = v;
            const ViewState state = codec::view_state_from_json(merged, "filters");
            const std::int64_t revision = session->set_view(state);
            send(res, 200, {{"revision", revision}, {"viewState", codec::to_json(state)}});
        });
    });

    server.Post(R"(/sessions/([^/]+)/ops)", [&sessions](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto session = sessions.get(req.matches[1]);
            const json body = body_json(req);
            if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "body", "expected an object");
            const std::int64_t expected = required_int(body, "expectedRevision");
            if (!body.contains("ops")) throw Error(ErrorCode::InvalidOp, "ops", "missing ops");
            const auto ops = codec::ops_from_json(body["ops"]);
            const JournalEntry entry = session->mutate(ops, expected);
            json touched = json::array();
            for (const auto& k : entry.touched_nodes()) touched.push_back(k.str());
            send(res, 200, {{"revision", entry.revision}, {"touched", std::move(touched)}});
        });
    });

    for (const char* verb : {"undo", "redo"}) {
        const bool is_undo = std::string_view(verb) == "undo";
        server.Post(std::string(R"(/sessions/([^/]+)/)") + verb,
                    [&sessions, is_undo](const httplib::Request& req, httplib::Response& res) {
                        guarded(res, [&] {
                            auto session = sessions.get(req.matches[1]);
                            const json body = body_json(req);
                            const auto expected = optional_int(body, "expectedRevision");
                            const std::int64_t revision = is_undo ? session->undo(expected) : session->redo(expected);
                            send(res, 200, {{"revision", revision}});
                        });
                    });
    }

    server.Post(R"(/sessions/([^/]+)/layout)", [&sessions](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto session = sessions.get(req.matches[1]);
            handle_layout(*session, body_json(req), res);
        });
    });

    server.Get(R"(/sessions/([^/]+)/layout/stream)",
               [&sessions](const httplib::Request& req, httplib::Response& res) {
                   guarded(res, [&] {
                       auto session = sessions.get(req.matches[1]);
                       auto last = std::make_shared<std::int64_t>(0);
                       if (req.has_param("after")) {
                           try {
                               *last = std::stoll(req.get_param_value("after"));
                           } catch (const std::exception&) {
                               throw Error(ErrorCode::InvalidArgument, "after", "after must be an integer");
                           }
                       }
                       res.set_header("Cache-Control", "no-cache");
                       res.set_chunked_content_provider(
                           "text/event-stream", [session, last](std::size_t, httplib::DataSink& sink) {
                               auto frame = session->next_frame(*last, std::chrono::milliseconds(500));
                               if (!sink.is_writable()) return false;
                               if (!frame) {
                                   const std::string ping = ": keepalive\n\n";
                                   return sink.write(ping.data(), ping.size());
                               }
                               *last = frame->seq;
                               const std::string event = "event: frame\ndata: " + frame_json(*frame).dump() + "\n\n";
                               if (!sink.write(event.data(), event.size())) return false;
                               if (frame->terminal) sink.done();
                               return true;
                           });
                   });
               });

    server.Get(R"(/sessions/([^/]+)/search)", [&sessions](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto session = sessions.get(req.matches[1]);
            if (!req.has_param("q")) throw Error(ErrorCode::InvalidArgument, "q", "missing query parameter q");
            std::size_t limit = 10;
            if (req.has_param("limit")) {
                const std::string raw = req.get_param_value("limit");
                std::size_t used = 0;
                long long n = 0;
                try {
                    n = std::stoll(raw, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != raw.size() || n < 1) {
                    throw Error(ErrorCode::InvalidArgument, "limit", "limit must be a positive integer");
                }
                limit = static_cast<std::size_t>(n);
            }
            json hits = json::array();
            for (const auto& h : session->search(req.get_param_value("q"), limit)) hits.push_back(codec::to_json(h));
            send(res, 200, {{"revision", session->revision()}, {"hits", std::move(hits)}});
        });
    });

    server.Get(R"(/sessions/([^/]+)/export)", [&sessions](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto session = sessions.get(req.matches[1]);
            res.status = 200;
            res.set_content(session->export_json(), kJson);
        });
    });
}

}  // namespace entigraph
