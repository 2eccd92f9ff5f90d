#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <string>
#include <unistd.h>

#include "snebr/service.hpp"
#include "snebr/session.hpp"

namespace {

snebr::Service* running_service = nullptr;

void on_signal(int)
{
    if (running_service) running_service->stop();
}

int serve(const std::string& address, const snebr::ServiceOptions& options)
{
    auto colon = address.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "--serve expects host:port, got " << address << "\n";
        return 2;
    }
    std::string host = address.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(address.substr(colon + 1));
    } catch (const std::exception&) {
        std::cerr << "bad port in " << address << "\n";
        return 2;
    }
    snebr::Service service(options);
    int bound = service.bind(host.empty() ? "0.0.0.0" : host, port);
    if (bound < 0) {
        std::cerr << "cannot listen on " << address << "\n";
        return 1;
    }
    running_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "snebr service listening on " << (host.empty() ? "0.0.0.0" : host) << ":" << bound << "\n";
    bool ok = service.run();
    running_service = nullptr;
    return ok ? 0 : 1;
}

int repl(std::istream& in, snebr::Session& session, bool interactive, bool stop_on_error)
{
    int status = 0;
    std::string line;
    while (true) {
        if (interactive) std::cout << (session.kb().revision_pending() ? "revise> " : ": ") << std::flush;
        if (!std::getline(in, line)) break;
        if (line == "exit." || line == "quit.") break;
        auto result = session.eval_line(line);
        std::cout << session.render(result.events);
        if (result.status != snebr::EvalStatus::ok) {
            status = 1;
            if (stop_on_error) break;
        }
    }
    if (interactive) std::cout << "\n";
    return status;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"snebr: belief revision shell and HTTP service"};
    std::string serve_address;
    std::string script;
    std::size_t firing_cap = 10'000;
    std::size_t depth_limit = 10;
    std::size_t max_sessions = 64;
    long idle_minutes = 60;
    bool stop_on_error = false;
    app.add_option("--serve", serve_address, "Run the HTTP service on host:port instead of the shell");
    app.add_option("--script", script, "Run commands from a file, then exit");
    app.add_flag("--stop-on-error", stop_on_error, "Stop at the first rejected command");
    app.add_option("--firing-cap", firing_cap, "Rule firings allowed per inference run")->check(CLI::PositiveNumber);
    app.add_option("--depth-limit", depth_limit, "Backward chaining depth limit")->check(CLI::PositiveNumber);
    app.add_option("--max-sessions", max_sessions, "Service session capacity")->check(CLI::PositiveNumber);
    app.add_option("--idle-timeout", idle_minutes, "Service session idle timeout in minutes")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    snebr::KnowledgeBaseOptions kb;
    kb.limits.firing_cap = firing_cap;
    kb.limits.depth_limit = depth_limit;

    if (!serve_address.empty()) {
        snebr::ServiceOptions options;
        options.kb = kb;
        options.max_sessions = max_sessions;
        options.idle_timeout = std::chrono::minutes(idle_minutes);
        return serve(serve_address, options);
    }

    snebr::SessionOptions options;
    options.kb = kb;
    snebr::Session session(options);
    if (!script.empty()) {
        std::ifstream in(script);
        if (!in) {
            std::cerr << "cannot read " << script << "\n";
            return 1;
        }
        return repl(in, session, false, stop_on_error);
    }
    return repl(std::cin, session, isatty(STDIN_FILENO) != 0, stop_on_error);
}
