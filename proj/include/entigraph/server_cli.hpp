#pragma once

// Command-line surface of entigraph_server, kept in a header so tests can
// parse argument lists without starting a server.

#include <cstddef>
#include <string>

#include <CLI11.hpp>

namespace entigraph {

struct ServerOptions {
    std::string host = "0.0.0.0";
    int port = 8080;  // 0 picks a free port
    std::size_t max_sessions = 32;
    bool demo = false;
};

inline void add_server_options(CLI::App& app, ServerOptions& opts) {
    app.add_option("--host", opts.host, "Address to bind")->capture_default_str();
    app.add_option("--port", opts.port, "TCP port to listen on (0: any free port)")
        ->check(CLI::Range(0, 65535))
        ->capture_default_str();
    app.add_option("--max-sessions", opts.max_sessions, "Concurrent session limit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--demo", opts.demo, "Preload the bundled sample corpus as session 'demo'");
}

}  // namespace entigraph
