#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "scenarios.hpp"
#include "snebr/service.hpp"

using namespace snebr;
using nlohmann::json;

namespace {

struct Reply {
    int status;
    json body;
};

Reply call(Service& svc, const std::string& method, const std::string& path, const json& body = nullptr)
{
    auto r = svc.handle(method, path, body.is_null() ? "" : body.dump());
    return {r.status, json::parse(r.body)};
}

std::string open(Service& svc)
{
    auto r = call(svc, "POST", "/sessions");
    REQUIRE(r.status == 201);
    return "/sessions/" + r.body["session_id"].get<std::string>();
}

Reply input(Service& svc, const std::string& base, const std::string& text)
{
    return call(svc, "POST", base + "/input", {{"text", text}});
}

std::string id_for(const json& wffs, const std::string& text)
{
    for (const auto& w : wffs)
        if (w["text"] == text) return w["id"];
    return "";
}

std::vector<json> of_type(const json& events, const std::string& type)
{
    std::vector<json> out;
    for (const auto& e : events)
        if (e["type"] == type) out.push_back(e);
    return out;
}

const char* kFemaleText = "all(X)(FEMALE(X) => (~SMART(X)))";
const char* kJockText = "all(X)(JOCK(X) => (~SMART(X)))";
const char* kOldText = "all(X)(OLD(X) => SMART(X))";
const char* kGradText = "all(X)(GRAD(X) => SMART(X))";

}  // namespace

TEST_CASE("session lifecycle and routing errors")
{
    Service svc({2, std::chrono::minutes(60), {}});
    auto a = open(svc);
    auto b = open(svc);
    auto full = svc.handle("POST", "/sessions", "");
    CHECK(full.status == 503);
    CHECK(full.headers.at("Retry-After") == "60");

    CHECK(call(svc, "GET", "/nowhere").status == 404);
    CHECK(call(svc, "POST", "/sessions/abc123/input", {{"text", "P(A)."}}).status == 404);
    CHECK(call(svc, "GET", a + "/input").status == 405);
    CHECK(svc.handle("POST", a + "/input", "not json").status == 400);
    CHECK(call(svc, "POST", a + "/input", {{"words", "P(A)."}}).status == 400);

    auto bad = input(svc, a, "P(A) and .");
    CHECK(bad.status == 422);
    CHECK(bad.body["error"] == "parse");
    CHECK(bad.body["column"] == 10);

    CHECK(call(svc, "DELETE", b).status == 200);
    CHECK(call(svc, "GET", b + "/beliefs").status == 404);
    CHECK(call(svc, "POST", "/sessions").status == 201);
}

TEST_CASE("idle sessions are swept")
{
    Service svc({4, std::chrono::seconds(0), {}});
    auto a = open(svc);
    std::this_thread::sleep_for(std::chrono::milliseconds(1100));
    CHECK(call(svc, "GET", a + "/beliefs").status == 404);
    CHECK(svc.registry().size() == 0);
}

TEST_CASE("fran in auto mode retracts the female rule, then the jock rule")
{
    Service svc;
    auto s = open(svc);
    CHECK(call(svc, "GET", s + "/mode").body["mode"] == "manual");
    CHECK(call(svc, "PUT", s + "/mode", {{"mode", "auto"}}).status == 200);
    CHECK(call(svc, "PUT", s + "/mode", {{"mode", "sometimes"}}).status == 400);
    CHECK(call(svc, "GET", s + "/mode").body["mode"] == "auto");

    json all = json::array();
    for (const auto& line : scenarios::fran_lines()) {
        auto r = input(svc, s, line);
        INFO(line << " " << r.body.dump());
        REQUIRE(r.status == 200);
        CHECK(r.body["pending"] == false);
        for (const auto& e : r.body["events"]) all.push_back(e);
    }
    auto retracted = of_type(all, "auto_retract");
    REQUIRE(retracted.size() == 2);
    CHECK(retracted[0]["wff"]["text"] == kFemaleText);
    CHECK(retracted[1]["wff"]["text"] == kJockText);
    auto lists = of_type(all, "lists");
    REQUIRE(lists.size() == 2);
    CHECK(lists[0]["cl"].size() == 1);
    CHECK(lists[0]["cl"][0]["text"] == kFemaleText);
    CHECK(lists[1]["inconsistent_sets"].size() == 2);

    auto answer = input(svc, s, "SMART(FRAN)?");
    REQUIRE(answer.status == 200);
    auto ans = of_type(answer.body["events"], "answer");
    REQUIRE(ans.size() == 1);
    CHECK(ans[0]["result"] == "yes");
    CHECK(ans[0]["origin_sets"].size() == 2);
    CHECK(of_type(input(svc, s, "~SMART(FRAN)?").body["events"], "answer")[0]["result"] == "unknown");

    auto beliefs = call(svc, "GET", s + "/beliefs");
    REQUIRE(beliefs.status == 200);
    bool jock_seen = false;
    for (const auto& row : beliefs.body["beliefs"]) {
        if (row["text"] == kJockText) {
            jock_seen = true;
            CHECK(row["hypothesis"] == false);
            CHECK(row["believed"] == false);
            CHECK(row["source"] == "NERD");
        }
    }
    CHECK(jock_seen);

    auto log = call(svc, "GET", s + "/events").body["events"];
    CHECK(of_type(log, "auto_retract").size() == 2);
    CHECK(of_type(log, "answer").size() == 2);
    CHECK(call(svc, "GET", s + "/revision").body == json{{"pending", false}});
}

TEST_CASE("manual revision over the API")
{
    Service svc;
    auto s = open(svc);
    auto lines = scenarios::fran_lines();
    lines.pop_back();
    Reply last{0, {}};
    for (const auto& line : lines) last = input(svc, s, line);
    REQUIRE(last.status == 200);
    CHECK(last.body["pending"] == true);
    CHECK(of_type(last.body["events"], "pending_revision").size() == 1);

    auto blocked = input(svc, s, "P(K).");
    CHECK(blocked.status == 409);
    CHECK(blocked.body["revision"]["pending"] == true);

    auto state = call(svc, "GET", s + "/revision").body;
    REQUIRE(state["pending"] == true);
    CHECK(state["mode"] == "manual");
    REQUIRE(state["cl"].size() == 1);
    CHECK(state["cl"][0]["text"] == kFemaleText);
    auto female = state["cl"][0]["id"].get<std::string>();

    CHECK(call(svc, "POST", s + "/revision", {{"retract", {"wff999"}}}).status == 422);
    CHECK(call(svc, "POST", s + "/revision", {{"nothing", 1}}).status == 400);

    auto first = call(svc, "POST", s + "/revision", {{"retract", {female}}});
    REQUIRE(first.status == 200);
    CHECK(first.body["pending"] == true);
    CHECK(of_type(first.body["events"], "retract").size() == 1);

    state = call(svc, "GET", s + "/revision").body;
    REQUIRE(state["inconsistent_sets"].size() == 2);
    auto beliefs = call(svc, "GET", s + "/beliefs").body["beliefs"];
    auto old_rule = id_for(beliefs, kOldText);
    auto grad_rule = id_for(beliefs, kGradText);
    auto jock_rule = id_for(beliefs, kJockText);
    REQUIRE_FALSE(old_rule.empty());

    auto partial = call(svc, "POST", s + "/revision", {{"retract", {old_rule}}});
    CHECK(partial.status == 422);
    CHECK(partial.body["error"] == "coverage");
    REQUIRE(partial.body["uncovered"].size() == 1);
    auto uncovered = partial.body["uncovered"][0];
    CHECK(std::find(uncovered.begin(), uncovered.end(), json(grad_rule)) != uncovered.end());
    CHECK(call(svc, "GET", s + "/revision").body["pending"] == true);

    int jock_number = std::stoi(jock_rule.substr(3));
    auto done = call(svc, "POST", s + "/revision", {{"retract", {jock_number}}});
    REQUIRE(done.status == 200);
    CHECK(done.body["pending"] == false);
    CHECK(call(svc, "POST", s + "/revision", {{"keep", true}}).status == 409);
    CHECK(input(svc, s, "P(K).").status == 200);
}

TEST_CASE("keep leaves the context inconsistent")
{
    Service svc;
    auto s = open(svc);
    input(svc, s, "P(K).");
    auto r = input(svc, s, "~P(K).");
    REQUIRE(r.body["pending"] == true);
    auto kept = call(svc, "POST", s + "/revision", {{"keep", true}});
    REQUIRE(kept.status == 200);
    CHECK(kept.body["pending"] == false);
    auto info = of_type(kept.body["events"], "info");
    REQUIRE(info.size() == 1);
    CHECK(info[0]["kind"] == "kept");
    int believed = 0;
    auto rows = call(svc, "GET", s + "/beliefs").body["beliefs"];
    for (const auto& row : rows) believed += row["believed"].get<bool>();
    CHECK(believed == 2);
}

TEST_CASE("save and load are not available to service sessions")
{
    Service svc;
    auto s = open(svc);
    auto r = input(svc, s, "save \"/tmp/x.snebr\".");
    CHECK(r.status == 422);
    CHECK(r.body["error"] == "files_disabled");
}

TEST_CASE("live server handles concurrent sessions")
{
    Service svc;
    int port = svc.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread server([&] { svc.run(); });

    constexpr int kClients = 8;
    std::vector<int> answers(kClients, 0);
    std::vector<std::thread> clients;
    for (int i = 0; i < kClients; ++i) {
        clients.emplace_back([&, i] {
            httplib::Client c("127.0.0.1", port);
            auto created = c.Post("/sessions", "", "application/json");
            if (!created || created->status != 201) return;
            auto base = "/sessions/" + json::parse(created->body)["session_id"].get<std::string>();
            auto send = [&](const std::string& text) {
                return c.Post((base + "/input").c_str(), json{{"text", text}}.dump(), "application/json");
            };
            send("br-mode auto.");
            for (const auto& line : scenarios::two_against_one_lines()) {
                if (line.back() == '?' || line.find('~') != std::string::npos) continue;
                send(line);
            }
            auto res = send("C(K)?");
            if (res && res->status == 200) {
                auto ev = json::parse(res->body)["events"];
                for (const auto& e : ev)
                    if (e["type"] == "answer" && e["result"] == "yes") answers[i] = 1;
            }
        });
    }
    for (auto& t : clients) t.join();

    httplib::Client c("127.0.0.1", port);
    auto missing = c.Get("/sessions/ffff/beliefs");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    svc.stop();
    server.join();
    for (int i = 0; i < kClients; ++i) CHECK(answers[i] == 1);
    CHECK(svc.registry().size() == kClients);
}
