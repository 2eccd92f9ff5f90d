#include "snebr/revision.hpp"

#include <algorithm>
#include <iterator>
#include <map>

namespace snebr {

std::string to_string(RevisionStatus status)
{
    switch (status) {
    case RevisionStatus::awaiting_user: return "awaiting_user";
    case RevisionStatus::resolved: return "resolved";
    case RevisionStatus::kept_inconsistent: return "kept_inconsistent";
    }
    return "?";
}

std::vector<TermId> RevisionState::retracted() const
{
    std::vector<TermId> out;
    for (const auto& r : retractions) out.push_back(r.hypothesis);
    return out;
}

CoverageError::CoverageError(std::string message, std::vector<OriginSet> uncovered)
    : std::invalid_argument(std::move(message))
    , uncovered_(std::move(uncovered))
{
}

std::vector<OriginSet> build_inconsistent_sets(const BeliefBase& beliefs, const Context& ctx, TermId p, TermId np)
{
    auto left = beliefs.active_origin_sets(ctx, p);
    auto right = beliefs.active_origin_sets(ctx, np);
    if (left.empty() || right.empty())
        throw InvalidRevisionError("contradictand " + beliefs.terms().label(left.empty() ? p : np) + " has no active origin set");
    std::vector<OriginSet> out;
    for (const auto& a : left)
        for (const auto& b : right) {
            auto u = a.unite(b);
            if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(std::move(u));
        }
    return out;
}

CulpritLists compute_lists(const BeliefBase& beliefs, const Entrenchment& entrenchment, const Context& ctx,
                           std::span<const OriginSet> sets)
{
    std::map<TermId, std::size_t> occurrences;
    for (const auto& s : sets)
        for (TermId h : s) ++occurrences[h];
    std::vector<TermId> all;
    for (const auto& [h, count] : occurrences) all.push_back(h);

    CulpritLists lists;
    if (all.empty()) return lists;

    std::vector<TermId> members(ctx.hypotheses.begin(), ctx.hypotheses.end());
    members.insert(members.end(), all.begin(), all.end());
    auto order = entrenchment.order(ctx, std::move(members));
    for (TermId h : all) {
        bool minimal = std::none_of(all.begin(), all.end(), [&](TermId other) { return order.less(other, h); });
        if (minimal) lists.least_believed.push_back(h);
    }

    std::size_t most = 0;
    for (const auto& [h, count] : occurrences) most = std::max(most, count);
    for (const auto& [h, count] : occurrences)
        if (count == most) lists.most_common.push_back(h);

    std::map<TermId, std::size_t> lost;
    std::size_t fewest = SIZE_MAX;
    for (TermId h : all) {
        lost[h] = ctx.hypotheses.count(h) ? beliefs.casualty_count(ctx, h) : 0;
        fewest = std::min(fewest, lost[h]);
    }
    for (TermId h : all)
        if (lost[h] == fewest) lists.fewest_supported.push_back(h);
    return lists;
}

namespace {

std::vector<TermId> intersect(const std::vector<TermId>& a, const std::vector<TermId>& b)
{
    std::vector<TermId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<TermId> sorted(std::vector<TermId> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::vector<TermId> culprit_list(const std::vector<TermId>& lb_in, const std::vector<TermId>& mc_in,
                                 const std::vector<TermId>& fs_in)
{
    auto lb = sorted(lb_in);
    auto mc = sorted(mc_in);
    auto fs = sorted(fs_in);
    const std::vector<TermId> candidates[] = {
        intersect(intersect(lb, mc), fs), intersect(lb, mc), intersect(lb, fs), intersect(mc, fs), lb, mc, fs,
    };
    const std::vector<TermId>* best = nullptr;
    for (const auto& c : candidates)
        if (!c.empty() && (!best || c.size() < best->size())) best = &c;
    return best ? *best : std::vector<TermId>{};
}

bool still_contradictory(const BeliefBase& beliefs, const Context& ctx, const ContradictionReport& report)
{
    return beliefs.believed(ctx, report.proposition) && beliefs.believed(ctx, report.contradicts);
}

RevisionState revise(BeliefBase& beliefs, const Entrenchment& entrenchment, Context& ctx, const ContradictionReport& report)
{
    RevisionState state;
    state.contradiction = report;
    state.mode = ctx.mode;
    // Each automatic pass retracts one hypothesis, so this runs at most
    // |context| times.
    while (true) {
        RevisionPass pass;
        pass.inconsistent_sets = build_inconsistent_sets(beliefs, ctx, report.proposition, report.contradicts);
        pass.lists = compute_lists(beliefs, entrenchment, ctx, pass.inconsistent_sets);
        pass.culprits = culprit_list(pass.lists.least_believed, pass.lists.most_common, pass.lists.fewest_supported);

        if (ctx.mode != BrMode::automatic || pass.culprits.size() != 1) {
            state.passes.push_back(std::move(pass));
            state.status = RevisionStatus::awaiting_user;
            return state;
        }
        auto retraction = beliefs.retract(ctx, pass.culprits.front());
        pass.auto_retraction = retraction;
        state.retractions.push_back(retraction);
        state.passes.push_back(std::move(pass));
        if (!still_contradictory(beliefs, ctx, report)) {
            state.status = RevisionStatus::resolved;
            return state;
        }
    }
}

RevisionState apply_manual_choice(BeliefBase& beliefs, Context& ctx, RevisionState state, const ManualChoice& choice)
{
    if (state.status != RevisionStatus::awaiting_user || state.passes.empty())
        throw InvalidRevisionError("no revision is awaiting a decision");
    if (choice.keep_inconsistent) {
        state.status = RevisionStatus::kept_inconsistent;
        return state;
    }
    const auto& terms = beliefs.terms();
    auto chosen = sorted(choice.retract);
    if (chosen.empty()) throw UnknownSelectionError("select at least one hypothesis to retract, or keep the context inconsistent");
    for (TermId id : chosen)
        if (!terms.contains(id) || !ctx.hypotheses.count(id))
            throw UnknownSelectionError((terms.contains(id) ? terms.label(id) : "term " + std::to_string(id.value)) +
                                        " is not an asserted hypothesis");

    std::vector<OriginSet> uncovered;
    for (const auto& s : state.current().inconsistent_sets)
        if (std::none_of(chosen.begin(), chosen.end(), [&](TermId id) { return s.contains(id); })) uncovered.push_back(s);
    if (!uncovered.empty()) {
        std::string msg = "the selection leaves inconsistent set";
        msg += uncovered.size() > 1 ? "s" : "";
        for (const auto& s : uncovered) {
            msg += " (";
            bool first = true;
            for (TermId h : s) {
                if (!first) msg += " ";
                msg += terms.label(h);
                first = false;
            }
            msg += ")";
        }
        msg += " untouched";
        throw CoverageError(msg, std::move(uncovered));
    }

    for (TermId id : chosen) state.retractions.push_back(beliefs.retract(ctx, id));
    state.status = RevisionStatus::resolved;
    return state;
}

}  // namespace snebr
