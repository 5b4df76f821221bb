// HTTP session service.
//
//   entigraph_server [--host 0.0.0.0] [--port 8080] [--max-sessions 32] [--demo]

#include <csignal>
#include <cstdio>

#include "entigraph/fixtures.hpp"
#include "entigraph/http_server.hpp"
#include "entigraph/server_cli.hpp"

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entity graph session service"};
    entigraph::ServerOptions opts;
    entigraph::add_server_options(app, opts);
    CLI11_PARSE(app, argc, argv);
    const std::string& host = opts.host;
    int port = opts.port;

    entigraph::SessionManager sessions(opts.max_sessions);
    if (opts.demo) {
        auto session = sessions.create(entigraph::fixtures::g0(), "demo");
        std::printf("demo session: %s\n", session->id().c_str());
    }

    httplib::Server server;
    entigraph::register_routes(server, sessions);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    if (port == 0) {
        port = server.bind_to_any_port(host);
        if (port < 0) {
            std::fprintf(stderr, "cannot bind %s\n", host.c_str());
            return 1;
        }
    } else if (!server.bind_to_port(host, port)) {
        std::fprintf(stderr, "cannot bind %s:%d\n", host.c_str(), port);
        return 1;
    }
    std::printf("listening on %s:%d\n", host.c_str(), port);
    std::fflush(stdout);
    server.listen_after_bind();
    return 0;
}
