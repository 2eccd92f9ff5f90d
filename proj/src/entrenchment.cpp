#include "snebr/entrenchment.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace snebr {

CycleError::CycleError(std::string message, std::vector<TermId> cycle)
    : std::runtime_error(std::move(message))
    , cycle_(std::move(cycle))
{
}

bool CredibilityGraph::above(TermId greater, TermId lesser) const
{
    std::set<TermId> seen;
    std::vector<TermId> stack{greater};
    while (!stack.empty()) {
        TermId at = stack.back();
        stack.pop_back();
        auto it = lesser_.find(at);
        if (it == lesser_.end()) continue;
        for (TermId next : it->second) {
            if (next == lesser) return true;
            if (seen.insert(next).second) stack.push_back(next);
        }
    }
    return false;
}

std::vector<TermId> CredibilityGraph::path(TermId from, TermId to) const
{
    std::map<TermId, TermId> parent;
    std::deque<TermId> queue{from};
    parent.emplace(from, from);
    while (!queue.empty()) {
        TermId at = queue.front();
        queue.pop_front();
        if (at == to && at != from) break;
        auto it = lesser_.find(at);
        if (it == lesser_.end()) continue;
        for (TermId next : it->second)
            if (parent.emplace(next, at).second) queue.push_back(next);
    }
    if (!parent.count(to) || from == to) return {};
    std::vector<TermId> out{to};
    while (out.back() != from) out.push_back(parent.at(out.back()));
    std::reverse(out.begin(), out.end());
    return out;
}

bool CredibilityGraph::try_add(TermId greater, TermId lesser)
{
    if (greater == lesser || above(lesser, greater)) return false;
    auto& next = lesser_[greater];
    if (std::find(next.begin(), next.end(), lesser) == next.end()) {
        next.push_back(lesser);
        edges_.emplace_back(greater, lesser);
    }
    return true;
}

CredibilityOrder::CredibilityOrder(std::vector<TermId> members)
    : members_(std::move(members))
{
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (std::size_t i = 0; i < members_.size(); ++i) index_.emplace(members_[i], i);
    above_.assign(members_.size(), std::vector<bool>(members_.size(), false));
}

bool CredibilityOrder::less(TermId lesser, TermId greater) const
{
    auto a = index_.find(lesser);
    auto b = index_.find(greater);
    if (a == index_.end() || b == index_.end()) return false;
    return above_[a->second][b->second];
}

void CredibilityOrder::add(TermId lesser, TermId greater)
{
    auto a = index_.find(lesser);
    auto b = index_.find(greater);
    if (a == index_.end() || b == index_.end()) return;
    const std::size_t lo = a->second;
    const std::size_t hi = b->second;
    if (lo == hi || above_[hi][lo] || above_[lo][hi]) return;
    const std::size_t n = members_.size();
    for (std::size_t x = 0; x < n; ++x) {
        if (x != lo && !above_[x][lo]) continue;
        above_[x][hi] = true;
        for (std::size_t z = 0; z < n; ++z)
            if (above_[hi][z]) above_[x][z] = true;
    }
}

Entrenchment::Entrenchment(const BeliefBase& beliefs)
    : beliefs_(beliefs)
{
}

namespace {

bool is_source_entity(const TermStore& terms, TermId id) { return terms.kind(id) == TermKind::constant; }

bool same_entity_kind(const TermStore& terms, TermId a, TermId b)
{
    bool sa = is_source_entity(terms, a);
    bool sb = is_source_entity(terms, b);
    if (sa != sb) return false;
    return sa || (terms.is_proposition(a) && terms.is_proposition(b));
}

}  // namespace

CredibilityGraph Entrenchment::graph(const Context& ctx) const
{
    const auto& terms = beliefs_.terms();
    CredibilityGraph g;
    for (TermId id : terms.with_key(kGreaterKey)) {
        const auto& n = terms.node(id);
        if (!n.ground() || !beliefs_.believed(ctx, id)) continue;
        if (!same_entity_kind(terms, n.args[0], n.args[1])) continue;
        g.try_add(n.args[0], n.args[1]);
    }
    return g;
}

void Entrenchment::assert_order(const Context& ctx, TermId greater, TermId lesser) const
{
    const auto& terms = beliefs_.terms();
    if (!same_entity_kind(terms, greater, lesser))
        throw OrderKindError("GREATER needs two sources or two propositions, got " + terms.render(greater) + " and " +
                             terms.render(lesser));
    if (greater == lesser)
        throw CycleError("GREATER(" + terms.render(greater) + "," + terms.render(lesser) + ") is reflexive", {greater, greater});
    auto g = graph(ctx);
    if (!g.above(lesser, greater)) return;
    auto cycle = g.path(lesser, greater);
    cycle.insert(cycle.begin(), greater);
    std::string text;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i) text += " > ";
        text += terms.is_proposition(cycle[i]) ? terms.label(cycle[i]) : terms.render(cycle[i]);
    }
    throw CycleError("credibility order would become cyclic: " + text, std::move(cycle));
}

std::optional<TermId> Entrenchment::source_of(const Context& ctx, TermId h) const
{
    const auto& terms = beliefs_.terms();
    std::optional<TermId> found;
    for (TermId id : terms.with_key(kSourceKey)) {
        const auto& n = terms.node(id);
        if (n.args[1] != h || !is_source_entity(terms, n.args[0]) || !beliefs_.believed(ctx, id)) continue;
        if (found && *found != n.args[0])
            throw MultipleSourceError(terms.label(h) + " has more than one believed source (" + terms.render(*found) + ", " +
                                      terms.render(n.args[0]) + ")");
        found = n.args[0];
    }
    return found;
}

CredibilityOrder Entrenchment::order(const Context& ctx, std::vector<TermId> hypotheses) const
{
    CredibilityOrder order(std::move(hypotheses));
    const auto& members = order.members();
    auto g = graph(ctx);

    std::vector<std::optional<TermId>> sources;
    sources.reserve(members.size());
    for (TermId h : members) sources.push_back(source_of(ctx, h));

    for (TermId lo : members)
        for (TermId hi : members)
            if (lo != hi && g.above(hi, lo)) order.add(lo, hi);

    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j)
            if (i != j && sources[i] && sources[j] && g.above(*sources[j], *sources[i])) order.add(members[i], members[j]);

    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j)
            if (sources[i] && !sources[j]) order.add(members[i], members[j]);

    return order;
}

bool Entrenchment::less_credible(const Context& ctx, TermId h1, TermId h2) const
{
    std::vector<TermId> members(ctx.hypotheses.begin(), ctx.hypotheses.end());
    members.push_back(h1);
    members.push_back(h2);
    return order(ctx, std::move(members)).less(h1, h2);
}

}  // namespace snebr
