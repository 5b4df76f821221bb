// Python module: JSON strings in and out, in the same dialect as the HTTP
// service. The package __init__ decodes them into plain Python values.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entigraph/graph_store.hpp"
#include "entigraph/io.hpp"
#include "entigraph/json_codec.hpp"
#include "entigraph/layout.hpp"
#include "entigraph/search_index.hpp"
#include "entigraph/session.hpp"

namespace py = pybind11;
using namespace entigraph;
using nlohmann::json;

namespace {

json violation_json(const Violation& v) {
    return {{"kind", std::string(violation_kind_name(v.kind))}, {"path", v.path}, {"reason", v.reason}};
}

std::string hits_json(const std::vector<SearchHit>& hits) {
    json out = json::array();
    for (const auto& h : hits) out.push_back(codec::to_json(h));
    return out.dump();
}

std::optional<LayoutParams> params_from(const std::optional<std::string>& text) {
    if (!text) return std::nullopt;
    return codec::layout_params_from_json(json::parse(*text));
}

std::string step_json(const StepResult& r) {
    return json{{"revision", r.revision},
                {"iteration", r.iteration},
                {"positions", codec::to_json(r.positions)},
                {"meanSwinging", r.metrics.mean_swinging},
                {"meanTraction", r.metrics.mean_traction},
                {"maxDisplacement", r.metrics.max_displacement}}
        .dump();
}

class PySession {
public:
    explicit PySession(const std::string& text) {
        const ImportFile file = parse_import(text);
        session_ = std::make_unique<Session>("py", build_from_import(file), file);
    }

    std::int64_t revision() const { return session_->revision(); }

    std::string view(const std::optional<std::string>& mode, const std::optional<std::string>& scheme) {
        std::optional<ViewMode> m;
        std::optional<ColorScheme> s;
        if (mode) {
            m = view_mode_from_name(*mode);
            if (!m) throw Error(ErrorCode::InvalidArgument, *mode, "mode must be 'dme' or 'de'");
        }
        if (scheme) {
            s = color_scheme_from_name(*scheme);
            if (!s) throw Error(ErrorCode::InvalidArgument, *scheme, "scheme must be 'byType' or 'byClass'");
        }
        const ViewSnapshot v = session_->view(m, s);
        json j = codec::to_json(v.graph);
        j["revision"] = v.revision;
        j["viewState"] = codec::to_json(v.state);
        j["positions"] = codec::to_json(v.positions);
        return j.dump();
    }

    std::string view_state() const { return codec::to_json(session_->view_state()).dump(); }

    std::int64_t set_view(const std::string& text) {
        json merged = codec::to_json(session_->view_state());
        const json patch = json::parse(text);
        for (const auto& [k, v] : patch.items()) merged[k] = v;
        return session_->set_view(codec::view_state_from_json(merged));
    }

    std::string mutate(const std::string& ops, std::int64_t expected) {
        const JournalEntry e = session_->mutate(codec::ops_from_json(json::parse(ops)), expected);
        json touched = json::array();
        for (const auto& k : e.touched_nodes()) touched.push_back(k.str());
        return json{{"revision", e.revision}, {"touched", touched}}.dump();
    }

    std::int64_t undo(std::optional<std::int64_t> expected) { return session_->undo(expected); }
    std::int64_t redo(std::optional<std::int64_t> expected) { return session_->redo(expected); }

    std::string step(std::int64_t steps, const std::optional<std::string>& params) {
        const auto p = params_from(params);
        StepResult r;
        {
            py::gil_scoped_release release;
            r = session_->step(steps, p);
        }
        return step_json(r);
    }

    void pin(const std::string& key, double x, double y) { session_->pin(parse_key(key), {x, y}); }
    void unpin(const std::string& key) { session_->unpin(parse_key(key)); }

    std::string search(const std::string& q, std::size_t limit) const { return hits_json(session_->search(q, limit)); }
    std::string export_json() { return session_->export_json(); }

private:
    static GlobalKey parse_key(const std::string& s) {
        auto k = GlobalKey::parse(s);
        if (!k) throw Error(ErrorCode::InvalidArgument, s, "expected a node key like 'e:e1'");
        return *k;
    }

    std::unique_ptr<Session> session_;
};

}  // namespace

PYBIND11_MODULE(_entigraph, m) {
    m.doc() = "Entity graph core: import, views, layout, search, sessions";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> graph_error;
    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> file_error;
    graph_error.call_once_and_store_result(
        [&] { return py::exception<Error>(m, "GraphError", PyExc_RuntimeError); });
    file_error.call_once_and_store_result(
        [&] { return py::exception<ImportError>(m, "InvalidFileError", PyExc_ValueError); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ImportError& e) {
            py::set_error(file_error.get_stored(), (violation_json(e.violation()).dump()).c_str());
        } catch (const Error& e) {
            py::set_error(graph_error.get_stored(), (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
        } catch (const json::exception& e) {
            py::set_error(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "validate",
        [](const std::string& text) {
            json out = json::array();
            try {
                for (const auto& v : validate(parse_import_unchecked(text))) out.push_back(violation_json(v));
            } catch (const ImportError& e) {
                out.push_back(violation_json(e.violation()));
            }
            return out.dump();
        },
        py::arg("text"), "Every violation in an interchange file, as a JSON list.");

    m.def(
        "canonicalize",
        [](const std::string& text) {
            const ImportFile f = parse_import(text);
            return export_graph(build_from_import(f).graph(), f.view_state, f.positions);
        },
        py::arg("text"), "Import then export: canonical bytes with explicit collocations.");

    m.def(
        "search",
        [](const std::string& text, const std::string& query, std::size_t limit) {
            return hits_json(SearchIndex::build(build_from_import(parse_import(text)).graph()).query(query, limit));
        },
        py::arg("text"), py::arg("query"), py::arg("limit") = 10);

    m.def(
        "layout",
        [](const std::string& text, std::int64_t steps, const std::optional<std::string>& mode,
           const std::optional<std::string>& params) {
            const GraphStore store = build_from_import(parse_import(text));
            ViewState vs;
            if (mode) {
                auto m = view_mode_from_name(*mode);
                if (!m) throw Error(ErrorCode::InvalidArgument, *mode, "mode must be 'dme' or 'de'");
                vs.mode = *m;
            }
            const LayoutParams p = params_from(params).value_or(LayoutParams{});
            const LayoutGraph g = LayoutGraph::from_visible(build_view(store.graph(), vs));
            LayoutState state = LayoutState::initial(g.nodes, p.seed);
            {
                py::gil_scoped_release release;
                run(state, g, p, steps);
            }
            return codec::to_json(state.position_map()).dump();
        },
        py::arg("text"), py::arg("steps"), py::arg("mode") = py::none(), py::arg("params") = py::none(),
        "Fresh seeded layout of the default view, run for `steps` iterations.");

    py::class_<PySession>(m, "Session")
        .def(py::init<const std::string&>(), py::arg("text"))
        .def_property_readonly("revision", &PySession::revision)
        .def("view", &PySession::view, py::arg("mode") = py::none(), py::arg("scheme") = py::none())
        .def("view_state", &PySession::view_state)
        .def("set_view", &PySession::set_view, py::arg("state"))
        .def("mutate", &PySession::mutate, py::arg("ops"), py::arg("expected_revision"))
        .def("undo", &PySession::undo, py::arg("expected_revision") = py::none())
        .def("redo", &PySession::redo, py::arg("expected_revision") = py::none())
        .def("step", &PySession::step, py::arg("steps") = 1, py::arg("params") = py::none())
        .def("pin", &PySession::pin, py::arg("key"), py::arg("x"), py::arg("y"))
        .def("unpin", &PySession::unpin, py::arg("key"))
        .def("search", &PySession::search, py::arg("query"), py::arg("limit") = 10)
        .def("export", &PySession::export_json);
}
