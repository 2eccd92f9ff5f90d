#include "snebr/service.hpp"

#include <httplib.h>

#include <random>
#include <regex>

#include "snebr/json_events.hpp"

namespace snebr {

using nlohmann::json;

SessionRegistry::SessionRegistry(ServiceOptions options)
    : options_(std::move(options))
{
}

std::int64_t SessionRegistry::now() const
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void SessionRegistry::sweep()
{
    std::lock_guard lock(mutex_);
    auto limit = std::chrono::duration_cast<std::chrono::milliseconds>(options_.idle_timeout).count();
    auto t = now();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        if (t - it->second->last_used.load() > limit)
            it = sessions_.erase(it);
        else
            ++it;
    }
}

std::string SessionRegistry::create()
{
    sweep();
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mutex_);
    if (sessions_.size() >= options_.max_sessions) return {};
    std::string id;
    do {
        char buf[33];
        std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()), static_cast<unsigned long long>(rng()));
        id = buf;
    } while (sessions_.count(id));
    SessionOptions so;
    so.kb = options_.kb;
    so.allow_files = false;
    auto entry = std::make_shared<SessionEntry>(so);
    entry->last_used = now();
    sessions_.emplace(id, std::move(entry));
    return id;
}

std::shared_ptr<SessionEntry> SessionRegistry::find(const std::string& id)
{
    sweep();
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    it->second->last_used = now();
    return it->second;
}

bool SessionRegistry::erase(const std::string& id)
{
    std::lock_guard lock(mutex_);
    return sessions_.erase(id) != 0;
}

std::size_t SessionRegistry::size() const
{
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

namespace {

HttpResponse reply(int status, const json& body)
{
    HttpResponse r;
    r.status = status;
    r.body = body.dump();
    return r;
}

HttpResponse error_reply(int status, const std::string& error, const std::string& message, json extra = json::object())
{
    extra["error"] = error;
    extra["message"] = message;
    return reply(status, extra);
}

void log_events(SessionEntry& entry, const json& events)
{
    for (const auto& e : events) entry.event_log.push_back(e.dump());
}

int status_for(EvalStatus status)
{
    switch (status) {
    case EvalStatus::ok: return 200;
    case EvalStatus::rejected_pending:
    case EvalStatus::nothing_pending: return 409;
    case EvalStatus::parse_error:
    case EvalStatus::coverage_error:
    case EvalStatus::error: return 422;
    }
    return 500;
}

HttpResponse eval_reply(SessionEntry& entry, const EvalResult& result)
{
    auto events = events_json(entry.session, result.events);
    log_events(entry, events);
    json body = {{"events", events}, {"pending", entry.session.kb().revision_pending()}};
    if (result.status == EvalStatus::ok) return reply(200, body);
    const auto* err = result.events.empty() ? nullptr : std::get_if<ErrorEvent>(&result.events.back());
    body["error"] = err ? err->kind : to_string(result.status);
    body["message"] = err ? err->message : to_string(result.status);
    if (err && err->line) {
        body["line"] = err->line;
        body["column"] = err->column;
    }
    if (result.status == EvalStatus::coverage_error) {
        json uncovered = json::array();
        for (const auto& os : result.uncovered) {
            json ids = json::array();
            for (const auto& w : wff_list_json(entry.session, os.ids())) ids.push_back(w["id"]);
            uncovered.push_back(std::move(ids));
        }
        body["uncovered"] = std::move(uncovered);
    }
    return reply(status_for(result.status), body);
}

std::optional<json> parse_body(const std::string& body)
{
    auto j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    return j;
}

}  // namespace

struct Service::Server {
    httplib::Server http;
};

Service::Service(ServiceOptions options)
    : options_(options)
    , registry_(options)
    , server_(std::make_unique<Server>())
{
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        auto r = handle(req.method, req.path, req.body);
        res.status = r.status;
        for (const auto& [k, v] : r.headers) res.set_header(k, v);
        res.set_content(r.body, "application/json");
    };
    server_->http.Get(".*", forward);
    server_->http.Post(".*", forward);
    server_->http.Put(".*", forward);
    server_->http.Delete(".*", forward);
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port)
{
    if (port == 0) return server_->http.bind_to_any_port(host);
    return server_->http.bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return server_->http.listen_after_bind(); }

void Service::stop()
{
    if (server_) server_->http.stop();
}

HttpResponse Service::handle(const std::string& method, const std::string& path, const std::string& body)
{
    static const std::regex session_route(R"(^/sessions/([0-9a-f]+)(?:/([a-z]+))?/?$)");

    if (path == "/sessions" || path == "/sessions/") {
        if (method != "POST") return error_reply(405, "method_not_allowed", "use POST to create a session");
        auto id = registry_.create();
        if (id.empty()) {
            auto r = error_reply(503, "capacity", "session limit reached; retry later", {{"retry_after_seconds", 60}});
            r.headers["Retry-After"] = "60";
            return r;
        }
        return reply(201, {{"session_id", id}});
    }

    std::smatch m;
    if (!std::regex_match(path, m, session_route)) return error_reply(404, "not_found", "no such route");
    auto entry = registry_.find(m[1].str());
    if (!entry) return error_reply(404, "unknown_session", "no such session: " + m[1].str());
    const std::string action = m[2].str();

    if (action.empty()) {
        if (method != "DELETE") return error_reply(405, "method_not_allowed", "use DELETE");
        std::unique_lock lock(entry->mutex);
        registry_.erase(m[1].str());
        return reply(200, {{"deleted", m[1].str()}});
    }

    if (action == "input") {
        if (method != "POST") return error_reply(405, "method_not_allowed", "use POST");
        auto req = parse_body(body);
        if (!req || !req->contains("text") || !(*req)["text"].is_string())
            return error_reply(400, "bad_request", "expected {\"text\": \"<command>\"}");
        std::unique_lock lock(entry->mutex);
        auto& session = entry->session;
        if (session.kb().revision_pending())
            return error_reply(409, "revision_pending", "answer the pending revision through /revision first",
                               {{"revision", revision_json(session)}});
        return eval_reply(*entry, session.eval_line((*req)["text"].get<std::string>()));
    }

    if (action == "revision") {
        if (method == "GET") {
            std::shared_lock lock(entry->mutex);
            return reply(200, revision_json(entry->session));
        }
        if (method != "POST") return error_reply(405, "method_not_allowed", "use GET or POST");
        auto req = parse_body(body);
        if (!req) return error_reply(400, "bad_request", "expected {\"retract\": [...]} or {\"keep\": true}");
        std::unique_lock lock(entry->mutex);
        auto& session = entry->session;
        if (!session.kb().revision_pending()) return error_reply(409, "nothing_pending", "no belief revision is pending");
        ManualChoice choice;
        if (req->value("keep", false)) {
            choice.keep_inconsistent = true;
        } else if (req->contains("retract") && (*req)["retract"].is_array()) {
            for (const auto& item : (*req)["retract"]) {
                std::optional<TermId> id;
                if (item.is_number_integer()) {
                    id = session.kb().terms().by_display_index(item.get<int>());
                } else if (item.is_string()) {
                    auto text = item.get<std::string>();
                    if (text.size() > 3 && text.size() < 13 && (text.rfind("wff", 0) == 0 || text.rfind("WFF", 0) == 0) &&
                        text.find_first_not_of("0123456789", 3) == std::string::npos)
                        id = session.kb().terms().by_display_index(std::stoi(text.substr(3)));
                }
                if (!id) return error_reply(422, "selection", "not a wff reference: " + item.dump());
                choice.retract.push_back(*id);
            }
        } else {
            return error_reply(400, "bad_request", "expected {\"retract\": [...]} or {\"keep\": true}");
        }
        return eval_reply(*entry, session.resolve(choice));
    }

    if (action == "beliefs") {
        if (method != "GET") return error_reply(405, "method_not_allowed", "use GET");
        std::shared_lock lock(entry->mutex);
        return reply(200, beliefs_json(entry->session));
    }

    if (action == "mode") {
        if (method == "GET") {
            std::shared_lock lock(entry->mutex);
            return reply(200, {{"mode", entry->session.kb().context().mode == BrMode::automatic ? "auto" : "manual"}});
        }
        if (method != "PUT") return error_reply(405, "method_not_allowed", "use GET or PUT");
        auto req = parse_body(body);
        std::string mode = req && req->contains("mode") && (*req)["mode"].is_string() ? (*req)["mode"].get<std::string>() : "";
        if (mode != "auto" && mode != "manual") return error_reply(400, "bad_request", "expected {\"mode\": \"auto\" | \"manual\"}");
        std::unique_lock lock(entry->mutex);
        auto result = entry->session.set_mode(mode == "auto" ? BrMode::automatic : BrMode::manual);
        if (result.status != EvalStatus::ok) return eval_reply(*entry, result);
        log_events(*entry, events_json(entry->session, result.events));
        return reply(200, {{"mode", mode}});
    }

    if (action == "events") {
        if (method != "GET") return error_reply(405, "method_not_allowed", "use GET");
        std::shared_lock lock(entry->mutex);
        json events = json::array();
        for (const auto& e : entry->event_log) events.push_back(json::parse(e));
        return reply(200, {{"events", std::move(events)}});
    }

    return error_reply(404, "not_found", "no such route");
}

}  // namespace snebr
