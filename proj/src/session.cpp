#include "snebr/session.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "snebr/parser.hpp"

namespace snebr {

std::string to_string(EvalStatus status)
{
    switch (status) {
    case EvalStatus::ok: return "ok";
    case EvalStatus::parse_error: return "parse_error";
    case EvalStatus::rejected_pending: return "rejected_pending";
    case EvalStatus::nothing_pending: return "nothing_pending";
    case EvalStatus::coverage_error: return "coverage_error";
    case EvalStatus::error: return "error";
    }
    return "?";
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> words(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

bool starts_with_word(std::string_view body, std::string_view keyword)
{
    if (lower(body.substr(0, keyword.size())) != keyword) return false;
    return body.size() == keyword.size() || is_space(body[keyword.size()]) || body[keyword.size()] == '"';
}

EvalResult failure(EvalStatus status, std::string kind, std::string message, std::size_t line = 0, std::size_t column = 0)
{
    EvalResult r;
    r.status = status;
    r.events.emplace_back(ErrorEvent{std::move(kind), std::move(message), line, column});
    return r;
}

std::string pad(const std::string& label) { return label + ":  "; }

}  // namespace

Session::Session(SessionOptions options)
    : options_(std::move(options))
    , kb_(std::make_unique<KnowledgeBase>(options_.kb))
{
}

void Session::reset()
{
    BrMode mode = kb_->context().mode;
    kb_ = std::make_unique<KnowledgeBase>(options_.kb);
    journal_.clear();
    if (mode == BrMode::automatic) {
        kb_->set_mode(mode);
        journal_.push_back("br-mode auto.");
    }
}

std::string Session::reference(TermId id) const
{
    return "wff" + std::to_string(kb_->terms().node(id).display_index);
}

TermId Session::resolve_reference(std::string_view token) const
{
    auto t = lower(trim(token));
    if (t.size() < 4 || t.compare(0, 3, "wff") != 0 ||
        !std::all_of(t.begin() + 3, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }))
        throw UnknownSelectionError("expected a wff reference such as wff12, found '" + std::string(trim(token)) + "'");
    int index = 0;
    try {
        index = std::stoi(t.substr(3));
    } catch (const std::out_of_range&) {
        throw UnknownSelectionError(std::string(trim(token)) + " does not name a wff");
    }
    auto id = kb_->terms().by_display_index(index);
    if (!id) throw UnknownSelectionError(std::string(trim(token)) + " does not name a wff");
    return *id;
}

EvalResult Session::eval_line(std::string_view line)
{
    auto command = trim(line);
    if (command.empty() || command.front() == ';') return {};
    return run(command, static_cast<std::size_t>(command.data() - line.data()));
}

EvalResult Session::run(std::string_view command, std::size_t offset)
{
    char terminator = command.back();
    if (terminator != '.' && terminator != '!' && terminator != '?')
        return failure(EvalStatus::parse_error, "parse", "expected '.', '!' or '?' at end of command", 1, offset + command.size() + 1);
    auto body = trim(command.substr(0, command.size() - 1));
    auto w = words(body);
    auto key = w.empty() ? std::string() : lower(w.front());
    bool keyword = terminator == '.';

    if (keyword && (key == "keep" || key == "retract") && (w.size() == 1 || key == "retract")) {
        if (key == "keep") return resolve(ManualChoice::keep());
        if (!starts_with_word(body, "retract")) keyword = false;
        if (keyword) {
            auto rest = trim(body.substr(7));
            if (rest.empty()) return failure(EvalStatus::parse_error, "parse", "expected wff references after retract", 1, offset + body.size() + 1);
            ManualChoice choice;
            try {
                std::size_t start = 0;
                while (start <= rest.size()) {
                    auto comma = rest.find(',', start);
                    auto piece = rest.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
                    choice.retract.push_back(resolve_reference(piece));
                    if (comma == std::string_view::npos) break;
                    start = comma + 1;
                }
            } catch (const UnknownSelectionError& e) {
                if (!kb_->revision_pending()) return failure(EvalStatus::nothing_pending, "nothing_pending", NothingPendingError().what());
                return failure(EvalStatus::error, "selection", e.what());
            }
            return resolve(choice);
        }
    }

    if (kb_->revision_pending())
        return failure(EvalStatus::rejected_pending, "pending", PendingRevisionError().what());

    if (keyword && key == "br-mode") {
        if (w.size() == 2 && lower(w[1]) == "auto") return set_mode(BrMode::automatic);
        if (w.size() == 2 && lower(w[1]) == "manual") return set_mode(BrMode::manual);
        return failure(EvalStatus::parse_error, "parse", "expected br-mode auto or br-mode manual", 1, offset + 1);
    }
    if (keyword && w.size() == 1 && key == "list-asserted") {
        std::vector<TermId> hyps;
        for (TermId h : kb_->beliefs().hypotheses())
            if (kb_->context().hypotheses.count(h)) hyps.push_back(h);
        EvalResult r;
        r.events.emplace_back(InfoEvent{"list_asserted", "Asserted hypotheses:", std::move(hyps)});
        return r;
    }
    if (keyword && w.size() == 1 && key == "list-all") {
        EvalResult r;
        r.events.emplace_back(InfoEvent{"list_all", "Believed propositions:", kb_->beliefs().believed_propositions(kb_->context())});
        return r;
    }
    if (keyword && w.size() == 1 && key == "clear") {
        reset();
        EvalResult r;
        r.events.emplace_back(InfoEvent{"cleared", "The knowledge base is empty.", {}});
        return r;
    }
    if (keyword && (starts_with_word(body, "save") || starts_with_word(body, "load"))) {
        auto rest = trim(body.substr(4));
        if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"' || rest.substr(1, rest.size() - 2).find('"') != std::string_view::npos)
            return failure(EvalStatus::parse_error, "parse", "expected a double-quoted path", 1, offset + 6);
        std::string path(rest.substr(1, rest.size() - 2));
        if (!options_.allow_files) return failure(EvalStatus::error, "files_disabled", "save and load are disabled here");
        EvalResult r;
        try {
            if (key == "save") {
                save_snapshot(path);
                r.events.emplace_back(InfoEvent{"saved", "Saved " + std::to_string(journal_.size()) + " commands to " + path, {}});
            } else {
                load_snapshot(path);
                r.events.emplace_back(InfoEvent{"loaded", "Loaded " + std::to_string(journal_.size()) + " commands from " + path, {}});
            }
        } catch (const SnapshotError& e) {
            return failure(EvalStatus::error, "snapshot", e.what());
        }
        return r;
    }
    return run_wff(command.substr(0, command.size() - 1), terminator, offset);
}

EvalResult Session::run_wff(std::string_view body, char terminator, std::size_t offset)
{
    Term term;
    try {
        term = parse(body, [this](int index) -> std::optional<Term> {
            auto id = kb_->terms().by_display_index(index);
            if (!id) return std::nullopt;
            return kb_->terms().to_term(*id);
        });
    } catch (const ParseError& e) {
        return failure(EvalStatus::parse_error, "parse", e.detail(), e.line(), e.column() + offset);
    }

    auto& terms = kb_->terms();
    std::size_t before = terms.size();
    std::string text = std::string(trim(body)) + terminator;
    EvalResult r;
    try {
        TermId id = terms.intern(term);
        if (terminator == '?')
            r.events = kb_->query(id);
        else
            r.events = kb_->assert_wff(id, terminator == '!');
        journal_.push_back(text);
        return r;
    } catch (const CycleError& e) {
        r = failure(EvalStatus::error, "cycle", e.what());
    } catch (const OrderKindError& e) {
        r = failure(EvalStatus::error, "order_kind", e.what());
    } catch (const MultipleSourceError& e) {
        r = failure(EvalStatus::error, "multiple_source", e.what());
    } catch (const std::invalid_argument& e) {
        r = failure(EvalStatus::error, "invalid", e.what());
    }
    // A rejected command that still interned new terms is journaled so that
    // replay keeps the same wff numbering.
    if (terms.size() != before) journal_.push_back(text);
    return r;
}

EvalResult Session::resolve(const ManualChoice& choice)
{
    if (!kb_->revision_pending()) return failure(EvalStatus::nothing_pending, "nothing_pending", NothingPendingError().what());
    EvalResult r;
    try {
        r.events = kb_->resolve(choice);
    } catch (const CoverageError& e) {
        r = failure(EvalStatus::coverage_error, "coverage", e.what());
        r.uncovered = e.uncovered();
        return r;
    } catch (const UnknownSelectionError& e) {
        return failure(EvalStatus::error, "selection", e.what());
    }
    if (choice.keep_inconsistent) {
        journal_.push_back("keep.");
    } else {
        auto ids = choice.retract;
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        std::string line = "retract ";
        for (std::size_t i = 0; i < ids.size(); ++i) line += (i ? ", " : "") + reference(ids[i]);
        journal_.push_back(line + ".");
    }
    return r;
}

EvalResult Session::set_mode(BrMode mode)
{
    if (kb_->revision_pending()) return failure(EvalStatus::rejected_pending, "pending", PendingRevisionError().what());
    kb_->set_mode(mode);
    journal_.push_back(mode == BrMode::automatic ? "br-mode auto." : "br-mode manual.");
    EvalResult r;
    r.events.emplace_back(InfoEvent{"mode", std::string("Belief revision mode: ") + (mode == BrMode::automatic ? "auto" : "manual"), {}});
    return r;
}

std::string Session::snapshot() const
{
    std::string out = kSnapshotHeader;
    out += '\n';
    for (const auto& line : journal_) out += line + '\n';
    out += kSnapshotTrailer;
    out += '\n';
    return out;
}

void Session::save_snapshot(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SnapshotError("cannot write " + path);
    out << snapshot();
    out.flush();
    if (!out) throw SnapshotError("cannot write " + path);
}

void Session::load_snapshot(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) throw SnapshotError("cannot read " + path);
    load_snapshot_text(text.str());
}

void Session::load_snapshot_text(std::string_view text)
{
    std::vector<std::string> lines;
    std::size_t start = 0;
    bool terminated = false;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        std::string line(text.substr(start, nl - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = nl + 1;
        terminated = start == text.size();
    }
    if (lines.empty()) throw SnapshotError("empty snapshot");
    if (lines.front() != kSnapshotHeader) {
        if (lines.front().rfind("snebr-snapshot ", 0) == 0)
            throw SnapshotError("unsupported snapshot version '" + lines.front().substr(15) + "' (expected v1)");
        throw SnapshotError("not a snapshot: first line must be '" + std::string(kSnapshotHeader) + "'");
    }
    if (!terminated || lines.back() != kSnapshotTrailer) throw SnapshotError("truncated snapshot: missing final 'end.' line");

    SessionOptions replay_options = options_;
    replay_options.allow_files = false;
    Session replay(replay_options);
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        const auto& line = lines[i];
        std::size_t journaled = replay.journal_.size();
        auto result = replay.eval_line(line);
        bool recorded = replay.journal_.size() == journaled + 1;
        if (result.status == EvalStatus::ok && recorded) continue;
        if (result.status == EvalStatus::error && recorded) continue;  // reproduces a rejection from the original session
        std::string why = "line " + std::to_string(i + 1) + ": ";
        const auto* err = result.events.empty() ? nullptr : std::get_if<ErrorEvent>(&result.events.back());
        why += err ? err->message : "not a journaled command";
        throw SnapshotError(why);
    }
    kb_ = std::move(replay.kb_);
    journal_ = std::move(replay.journal_);
}

std::string Session::render(const std::vector<Event>& events) const
{
    std::string out;
    for (const auto& e : events) out += render(e);
    return out;
}

namespace {

struct Renderer {
    const KnowledgeBase& kb;

    std::vector<TermId> by_display(std::vector<TermId> ids) const
    {
        std::sort(ids.begin(), ids.end(), [&](TermId a, TermId b) {
            return kb.terms().node(a).display_index < kb.terms().node(b).display_index;
        });
        return ids;
    }

    std::string list(const std::vector<TermId>& ids) const
    {
        std::string out = "(";
        bool first = true;
        for (TermId id : by_display(ids)) {
            if (!first) out += ' ';
            out += kb.terms().label(id);
            first = false;
        }
        return out + ")";
    }

    std::string sets(const std::vector<OriginSet>& sets) const
    {
        std::string out;
        for (const auto& s : sets) {
            if (!out.empty()) out += "  ";
            out += list(s.ids());
        }
        return out;
    }

    std::string wff(TermId id) const { return pad(kb.terms().label(id)) + kb.terms().render(id); }

    std::string operator()(const AssertedEvent& e) const { return wff(e.wff) + "\n"; }

    std::string operator()(const DerivedEvent& e) const
    {
        return "Derived " + wff(e.wff) + "  from " + list(e.origin.ids()) + "\n";
    }

    std::string operator()(const ContradictionEvent& e) const
    {
        std::string out = e.asserted ? "The contradiction involves the newly asserted proposition:\n"
                                     : "The contradiction involves the newly derived proposition:\n";
        out += "    " + wff(e.report.proposition) + "\n";
        out += "and the previously existing proposition:\n";
        out += "    " + wff(e.report.contradicts) + "\n";
        return out;
    }

    std::string operator()(const ListsEvent& e) const
    {
        std::string out;
        if (e.pass.inconsistent_sets.size() == 1) {
            out += "The inconsistent set is:\n";
        } else {
            out += "The following sets are known to be inconsistent. To make the context consistent, remove at least one "
                   "hypothesis from each of the sets:\n";
        }
        out += "    " + sets(e.pass.inconsistent_sets) + "\n";
        out += "The least believed hypothesis:\n    " + list(e.pass.lists.least_believed) + "\n";
        out += "The most common hypotheses:\n    " + list(e.pass.lists.most_common) + "\n";
        out += "The hypotheses supporting the fewest nodes:\n    " + list(e.pass.lists.fewest_supported) + "\n";
        out += "The culprit list:\n    " + list(e.pass.culprits) + "\n";
        return out;
    }

    std::string operator()(const RetractedEvent& e) const
    {
        std::string out = e.automatic ? "I will remove the following node:\n" : "Removed:\n";
        out += "    " + wff(e.report.hypothesis) + "\n";
        if (!e.report.casualties.empty()) {
            out += "No longer believed:\n";
            for (TermId id : by_display(e.report.casualties)) out += "    " + wff(id) + "\n";
        }
        return out;
    }

    std::string operator()(const PendingRevisionEvent& e) const
    {
        return "Remove at least one hypothesis from each of " + sets(e.inconsistent_sets) +
               "\n  with: retract wffN, wffM.   or leave the context inconsistent with: keep.\n  Suggested: " +
               list(e.culprits) + "\n";
    }

    std::string operator()(const AnswerEvent& e) const
    {
        if (!e.yes) return "I don't know whether " + kb.terms().render(e.query) + "\n";
        return "yes  " + wff(e.query) + "\n    origin sets: " + sets(e.origin_sets) + "\n";
    }

    std::string operator()(const InfoEvent& e) const
    {
        std::string out = e.message + "\n";
        for (TermId id : e.wffs) {
            out += "    " + wff(id);
            if (e.kind == "list_all") out += "  " + sets(kb.beliefs().active_origin_sets(kb.context(), id));
            out += "\n";
        }
        return out;
    }

    std::string operator()(const ErrorEvent& e) const
    {
        if (e.kind == "parse") return "Parse error at line " + std::to_string(e.line) + ", column " + std::to_string(e.column) + ": " + e.message + "\n";
        return "Error: " + e.message + "\n";
    }
};

}  // namespace

std::string Session::render(const Event& event) const { return std::visit(Renderer{*kb_}, event); }

}  // namespace snebr
