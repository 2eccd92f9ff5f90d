#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "scenarios.hpp"
#include "snebr/parser.hpp"
#include "snebr/session.hpp"

using namespace snebr;

namespace {

std::vector<Event> run_all(Session& s, const std::vector<std::string>& lines)
{
    std::vector<Event> all;
    for (const auto& line : lines) {
        auto r = s.eval_line(line);
        INFO(line << "\n" << s.render(r.events));
        REQUIRE(r.status == EvalStatus::ok);
        all.insert(all.end(), r.events.begin(), r.events.end());
    }
    return all;
}

TermId id_of(Session& s, const std::string& text) { return *s.kb().terms().find(parse(text)); }

template <typename T>
std::vector<T> only(const std::vector<Event>& events)
{
    std::vector<T> out;
    for (const auto& e : events)
        if (const auto* t = std::get_if<T>(&e)) out.push_back(*t);
    return out;
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("snebr-" + std::to_string(::getpid()) + "-" + name)).string();
}

}  // namespace

TEST_CASE("fran in manual mode stops at the first revision")
{
    Session s;
    auto lines = scenarios::fran_lines();
    lines.pop_back();
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) REQUIRE(s.eval_line(lines[i]).status == EvalStatus::ok);
    auto r = s.eval_line(lines.back());
    REQUIRE(r.status == EvalStatus::ok);
    REQUIRE(s.kb().revision_pending());
    auto pending = only<PendingRevisionEvent>(r.events);
    REQUIRE(pending.size() == 1);
    CHECK(pending[0].culprits == std::vector<TermId>{id_of(s, scenarios::kFemaleRule)});

    auto blocked = s.eval_line("P(K).");
    CHECK(blocked.status == EvalStatus::rejected_pending);
    CHECK(s.eval_line("br-mode auto.").status == EvalStatus::rejected_pending);
    CHECK(s.eval_line("list-all.").status == EvalStatus::rejected_pending);

    auto wrong = s.eval_line("retract wff999.");
    CHECK(wrong.status == EvalStatus::error);

    auto female = s.reference(id_of(s, scenarios::kFemaleRule));
    auto second = s.eval_line("retract " + female + ".");
    REQUIRE(second.status == EvalStatus::ok);
    // The paused inference resumes and finds the contradiction again.
    REQUIRE(s.kb().revision_pending());
    const auto& state = *s.kb().pending_revision();
    CHECK(state.current().inconsistent_sets.size() == 2);

    auto old_rule = s.reference(id_of(s, scenarios::kOldRule));
    auto partial = s.eval_line("retract " + old_rule + ".");
    CHECK(partial.status == EvalStatus::coverage_error);
    REQUIRE(partial.uncovered.size() == 1);
    CHECK(partial.uncovered[0].contains(id_of(s, scenarios::kGradRule)));

    auto jock = s.reference(id_of(s, scenarios::kJockRule));
    REQUIRE(s.eval_line("retract " + jock + ".").status == EvalStatus::ok);
    CHECK_FALSE(s.kb().revision_pending());
    CHECK(s.kb().believed(id_of(s, "SMART(FRAN)")));
    CHECK_FALSE(s.kb().believed(id_of(s, "~SMART(FRAN)")));
    CHECK(s.eval_line("retract " + jock + ".").status == EvalStatus::nothing_pending);
}

TEST_CASE("transcript text follows the paper's wording")
{
    Session s;
    s.eval_line("br-mode auto.");
    auto events = run_all(s, scenarios::fran_lines());
    auto text = s.render(events);
    CHECK(text.find("The contradiction involves the newly derived proposition:") != std::string::npos);
    CHECK(text.find("and the previously existing proposition:") != std::string::npos);
    CHECK(text.find("The least believed hypothesis:") != std::string::npos);
    CHECK(text.find("The most common hypotheses:") != std::string::npos);
    CHECK(text.find("The hypotheses supporting the fewest nodes:") != std::string::npos);
    CHECK(text.find("The following sets are known to be inconsistent. To make the context consistent, remove at least one "
                    "hypothesis from each of the sets:") != std::string::npos);
    CHECK(text.find("I will remove the following node:\n    " + s.kb().terms().label(id_of(s, scenarios::kFemaleRule)) +
                    ":  all(X)(FEMALE(X) => (~SMART(X)))") != std::string::npos);
    auto answer = s.render(s.eval_line("SMART(FRAN)?").events);
    CHECK(answer.rfind("yes  ", 0) == 0);
    CHECK(s.render(s.eval_line("~SMART(FRAN)?").events).rfind("I don't know", 0) == 0);
}

TEST_CASE("identical input gives identical transcripts")
{
    auto transcript = [] {
        Session s;
        std::string out;
        s.eval_line("br-mode auto.");
        for (const auto& line : scenarios::fran_lines()) out += s.render(s.eval_line(line).events);
        for (const auto& line : scenarios::two_against_one_lines()) out += s.render(s.eval_line(line).events);
        return out;
    };
    CHECK(transcript() == transcript());
}

TEST_CASE("parse errors report the column within the line")
{
    Session s;
    auto r = s.eval_line("   P(A) and .");
    CHECK(r.status == EvalStatus::parse_error);
    auto err = only<ErrorEvent>(r.events);
    REQUIRE(err.size() == 1);
    CHECK(err[0].line == 1);
    CHECK(err[0].column == 13);
    CHECK(s.render(r.events).rfind("Parse error at line 1, column 13", 0) == 0);

    auto missing = s.eval_line("P(A)");
    CHECK(missing.status == EvalStatus::parse_error);
    CHECK(only<ErrorEvent>(missing.events)[0].column == 5);
    CHECK(s.kb().terms().size() == 0);
    CHECK(s.journal().empty());
    CHECK(s.eval_line("").events.empty());
    CHECK(s.eval_line("; comment").events.empty());
}

TEST_CASE("mode and listing commands")
{
    Session s;
    CHECK(s.eval_line("br-mode auto.").status == EvalStatus::ok);
    CHECK(s.kb().context().mode == BrMode::automatic);
    CHECK(s.eval_line("br-mode sometimes.").status == EvalStatus::parse_error);
    CHECK(s.eval_line("br-mode manual.").status == EvalStatus::ok);
    CHECK(s.kb().context().mode == BrMode::manual);

    run_all(s, {"P(A).", "P(A) => Q(A).", "Q(A)?"});
    auto asserted = only<InfoEvent>(s.eval_line("list-asserted.").events);
    REQUIRE(asserted.size() == 1);
    CHECK(asserted[0].wffs.size() == 2);
    auto all = only<InfoEvent>(s.eval_line("list-all.").events);
    REQUIRE(all.size() == 1);
    CHECK(all[0].wffs.size() == 3);

    CHECK(s.eval_line("clear.").status == EvalStatus::ok);
    CHECK(s.kb().terms().size() == 0);
    CHECK(s.journal().empty());
}

TEST_CASE("rejected assertions leave the belief space alone")
{
    Session s;
    run_all(s, {"GREATER(A1,B1).", "GREATER(B1,C1).", "P(K).", "SOURCE(A1, P(K))."});
    auto before = s.kb().context().hypotheses;
    auto cycle = s.eval_line("GREATER(C1,A1).");
    CHECK(cycle.status == EvalStatus::error);
    CHECK(only<ErrorEvent>(cycle.events)[0].kind == "cycle");
    CHECK(s.eval_line("GREATER(A1, P(K)).").status == EvalStatus::error);
    CHECK(s.eval_line("SOURCE(B1, P(K)).").status == EvalStatus::error);
    CHECK(s.eval_line("SOURCE(A1, P(K)).").status == EvalStatus::ok);
    CHECK(s.kb().context().hypotheses == before);
}

TEST_CASE("snapshot round trip")
{
    Session s;
    s.eval_line("br-mode auto.");
    run_all(s, scenarios::fran_lines());
    run_all(s, {"SMART(FRAN)?", "GREATER(FRAN, HOLYBOOK)."});
    auto text = s.snapshot();
    CHECK(text.rfind(std::string(kSnapshotHeader) + "\n", 0) == 0);
    CHECK(text.size() > 5);
    CHECK(text.compare(text.size() - 5, 5, "end.\n") == 0);

    Session loaded;
    loaded.load_snapshot_text(text);
    CHECK(loaded.snapshot() == text);
    auto believed = [](const Session& x) {
        std::vector<std::string> out;
        for (TermId id : x.kb().beliefs().believed_propositions(x.kb().context())) out.push_back(x.kb().terms().render(id));
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(believed(loaded) == believed(s));
    CHECK(loaded.kb().context().mode == BrMode::automatic);
    auto answer = only<AnswerEvent>(loaded.eval_line("SMART(FRAN)?").events);
    REQUIRE(answer.size() == 1);
    CHECK(answer[0].yes);
}

TEST_CASE("snapshot keeps manual decisions and wff numbering")
{
    Session s;
    run_all(s, scenarios::two_against_one_lines());
    REQUIRE(s.kb().revision_pending());
    auto d = s.reference(id_of(s, "D(K)"));
    REQUIRE(s.eval_line("retract " + d + ".").status == EvalStatus::ok);
    run_all(s, {"Z(K).", "~Z(K)."});
    REQUIRE(s.eval_line("keep.").status == EvalStatus::ok);

    Session loaded;
    loaded.load_snapshot_text(s.snapshot());
    CHECK(loaded.snapshot() == s.snapshot());
    CHECK(loaded.kb().context().hypotheses.size() == s.kb().context().hypotheses.size());
    CHECK(loaded.reference(id_of(loaded, "D(K)")) == d);
    CHECK_FALSE(loaded.kb().believed(id_of(loaded, "D(K)")));
    CHECK(loaded.kb().believed(id_of(loaded, "Z(K)")));
    CHECK(loaded.kb().believed(id_of(loaded, "~Z(K)")));
}

TEST_CASE("snapshot files and their failure modes")
{
    Session empty;
    CHECK(empty.snapshot() == "snebr-snapshot v1\nend.\n");

    auto path = temp_path("kb.snebr");
    Session s;
    run_all(s, {"P(A).", "P(A) => Q(A).", "save \"" + path + "\"."});
    Session t;
    auto r = t.eval_line("load \"" + path + "\".");
    REQUIRE(r.status == EvalStatus::ok);
    CHECK(t.snapshot() == s.snapshot());

    Session victim;
    run_all(victim, {"R(A)."});
    auto before = victim.snapshot();
    CHECK_THROWS_AS(victim.load_snapshot_text("snebr-snapshot v2\nend.\n"), SnapshotError);
    CHECK_THROWS_AS(victim.load_snapshot_text("hello\n"), SnapshotError);
    CHECK_THROWS_AS(victim.load_snapshot_text("snebr-snapshot v1\nP(A).\n"), SnapshotError);
    CHECK_THROWS_AS(victim.load_snapshot_text("snebr-snapshot v1\nP(A).\nend."), SnapshotError);
    CHECK_THROWS_AS(victim.load_snapshot_text("snebr-snapshot v1\nP(A) and.\nend.\n"), SnapshotError);
    CHECK_THROWS_AS(victim.load_snapshot_text("snebr-snapshot v1\nlist-all.\nend.\n"), SnapshotError);
    CHECK_THROWS_AS(victim.load_snapshot(temp_path("missing")), SnapshotError);
    CHECK(victim.snapshot() == before);
    CHECK(victim.eval_line("load \"" + temp_path("missing") + "\".").status == EvalStatus::error);
    std::remove(path.c_str());

    SessionOptions no_files;
    no_files.allow_files = false;
    Session locked(no_files);
    CHECK(locked.eval_line("save \"" + path + "\".").status == EvalStatus::error);
    CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("adding a hypothesis can shrink the belief space")
{
    Session s;
    s.eval_line("br-mode auto.");
    run_all(s, {"GREATER(ENCYCLOPEDIA, TABLOID).", "BIRD(TWEETY).", "BIRD(TWEETY) => FLIES(TWEETY)!",
                "SOURCE(TABLOID, BIRD(TWEETY) => FLIES(TWEETY)).", "FLIES(TWEETY)?"});
    auto flies = id_of(s, "FLIES(TWEETY)");
    REQUIRE(s.kb().believed(flies));
    auto before = s.kb().beliefs().believed_propositions(s.kb().context());
    run_all(s, {"~FLIES(TWEETY)!"});
    auto after = s.kb().beliefs().believed_propositions(s.kb().context());
    CHECK_FALSE(s.kb().believed(flies));
    CHECK_FALSE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    CHECK(s.kb().believed(id_of(s, "~FLIES(TWEETY)")));
}
