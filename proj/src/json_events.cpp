#include "snebr/json_events.hpp"

#include <algorithm>

namespace snebr {

using nlohmann::json;

namespace {

json sets_json(const Session& s, const std::vector<OriginSet>& sets)
{
    json out = json::array();
    for (const auto& os : sets) {
        json ids = json::array();
        for (const auto& w : wff_list_json(s, os.ids())) ids.push_back(w["id"]);
        out.push_back(std::move(ids));
    }
    return out;
}

struct Encoder {
    const Session& s;

    json operator()(const AssertedEvent& e) const
    {
        return {{"type", "assert"}, {"wff", wff_json(s, e.wff)}, {"already_asserted", e.already_asserted}};
    }

    json operator()(const DerivedEvent& e) const
    {
        return {{"type", "derive"}, {"wff", wff_json(s, e.wff)}, {"origin_set", sets_json(s, {e.origin})[0]}, {"rule", e.rule}};
    }

    json operator()(const ContradictionEvent& e) const
    {
        return {{"type", "contradiction"},
                {"proposition", wff_json(s, e.report.proposition)},
                {"contradicts", wff_json(s, e.report.contradicts)},
                {"kind", to_string(e.report.kind)},
                {"newly", e.asserted ? "asserted" : "derived"}};
    }

    json operator()(const ListsEvent& e) const
    {
        return {{"type", "lists"},
                {"inconsistent_sets", sets_json(s, e.pass.inconsistent_sets)},
                {"lb", wff_list_json(s, e.pass.lists.least_believed)},
                {"mc", wff_list_json(s, e.pass.lists.most_common)},
                {"fs", wff_list_json(s, e.pass.lists.fewest_supported)},
                {"cl", wff_list_json(s, e.pass.culprits)}};
    }

    json operator()(const RetractedEvent& e) const
    {
        return {{"type", e.automatic ? "auto_retract" : "retract"},
                {"wff", wff_json(s, e.report.hypothesis)},
                {"casualties", wff_list_json(s, e.report.casualties)},
                {"still_believed", e.report.hypothesis_still_believed}};
    }

    json operator()(const PendingRevisionEvent& e) const
    {
        return {{"type", "pending_revision"},
                {"inconsistent_sets", sets_json(s, e.inconsistent_sets)},
                {"cl", wff_list_json(s, e.culprits)}};
    }

    json operator()(const AnswerEvent& e) const
    {
        return {{"type", "answer"},
                {"query", wff_json(s, e.query)},
                {"result", e.yes ? "yes" : "unknown"},
                {"origin_sets", sets_json(s, e.origin_sets)}};
    }

    json operator()(const InfoEvent& e) const
    {
        json wffs = json::array();
        for (TermId id : e.wffs) wffs.push_back(wff_json(s, id));
        return {{"type", "info"}, {"kind", e.kind}, {"message", e.message}, {"wffs", std::move(wffs)}};
    }

    json operator()(const ErrorEvent& e) const
    {
        json out = {{"type", "error"}, {"kind", e.kind}, {"message", e.message}};
        if (e.line) {
            out["line"] = e.line;
            out["column"] = e.column;
        }
        return out;
    }
};

}  // namespace

json wff_json(const Session& s, TermId id)
{
    return {{"id", s.reference(id)}, {"text", s.kb().terms().render(id)}};
}

json wff_list_json(const Session& s, std::vector<TermId> ids)
{
    const auto& terms = s.kb().terms();
    std::sort(ids.begin(), ids.end(), [&](TermId a, TermId b) { return terms.node(a).display_index < terms.node(b).display_index; });
    json out = json::array();
    for (TermId id : ids) out.push_back(wff_json(s, id));
    return out;
}

json event_json(const Session& s, const Event& event) { return std::visit(Encoder{s}, event); }

json events_json(const Session& s, const std::vector<Event>& events)
{
    json out = json::array();
    for (const auto& e : events) out.push_back(event_json(s, e));
    return out;
}

json revision_json(const Session& s)
{
    const auto& pending = s.kb().pending_revision();
    if (!pending) return {{"pending", false}};
    const auto& pass = pending->current();
    return {{"pending", true},
            {"mode", pending->mode == BrMode::automatic ? "auto" : "manual"},
            {"contradiction",
             {{"proposition", wff_json(s, pending->contradiction.proposition)},
              {"contradicts", wff_json(s, pending->contradiction.contradicts)},
              {"kind", to_string(pending->contradiction.kind)}}},
            {"inconsistent_sets", sets_json(s, pass.inconsistent_sets)},
            {"lb", wff_list_json(s, pass.lists.least_believed)},
            {"mc", wff_list_json(s, pass.lists.most_common)},
            {"fs", wff_list_json(s, pass.lists.fewest_supported)},
            {"cl", wff_list_json(s, pass.culprits)},
            {"auto_retracted", wff_list_json(s, pending->retracted())}};
}

json beliefs_json(const Session& s)
{
    const auto& kb = s.kb();
    const auto& ctx = kb.context();
    json rows = json::array();
    for (TermId id : kb.beliefs().supported()) {
        std::optional<TermId> source;
        try {
            source = kb.entrenchment().source_of(ctx, id);
        } catch (const MultipleSourceError&) {
        }
        rows.push_back({{"id", s.reference(id)},
                        {"text", kb.terms().render(id)},
                        {"hypothesis", ctx.hypotheses.count(id) != 0},
                        {"believed", kb.beliefs().believed(ctx, id)},
                        {"source", source ? json(kb.terms().render(*source)) : json(nullptr)},
                        {"origin_sets", sets_json(s, kb.beliefs().origin_sets(id))}});
    }
    return {{"mode", ctx.mode == BrMode::automatic ? "auto" : "manual"}, {"beliefs", std::move(rows)}};
}

}  // namespace snebr
