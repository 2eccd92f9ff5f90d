#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "snebr/session.hpp"

namespace snebr {

struct ServiceOptions {
    std::size_t max_sessions = 64;
    std::chrono::seconds idle_timeout = std::chrono::minutes(60);
    KnowledgeBaseOptions kb;
};

struct HttpResponse {
    int status = 200;
    std::string body;  // JSON
    std::map<std::string, std::string> headers;
};

/// A session as held by the service. Mutations take `mutex` exclusively;
/// reads share it.
struct SessionEntry {
    explicit SessionEntry(SessionOptions options) : session(std::move(options)) {}

    std::shared_mutex mutex;
    Session session;
    std::vector<std::string> event_log;  // serialized JSON events, guarded by `mutex`
    std::atomic<std::int64_t> last_used{0};
};

class SessionRegistry {
public:
    explicit SessionRegistry(ServiceOptions options);

    /// Empty when at capacity.
    std::string create();
    std::shared_ptr<SessionEntry> find(const std::string& id);
    bool erase(const std::string& id);
    std::size_t size() const;
    void sweep();

private:
    std::int64_t now() const;

    ServiceOptions options_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
};

/// HTTP/JSON front end over many sessions.
///
///   POST   /sessions                  create
///   DELETE /sessions/{id}
///   POST   /sessions/{id}/input       {"text": "<command>"}
///   GET    /sessions/{id}/revision
///   POST   /sessions/{id}/revision    {"retract": ["wff10", ...]} | {"keep": true}
///   GET    /sessions/{id}/beliefs
///   PUT    /sessions/{id}/mode        {"mode": "auto" | "manual"}
///   GET    /sessions/{id}/events
class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    HttpResponse handle(const std::string& method, const std::string& path, const std::string& body);

    /// Binds the listening socket; port 0 picks a free one. Returns the bound
    /// port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until `stop`.
    bool run();
    void stop();

    SessionRegistry& registry() { return registry_; }
    const ServiceOptions& options() const { return options_; }

private:
    struct Server;

    ServiceOptions options_;
    SessionRegistry registry_;
    std::unique_ptr<Server> server_;
};

}  // namespace snebr
