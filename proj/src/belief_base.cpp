#include "snebr/belief_base.hpp"

#include <algorithm>

namespace snebr {

OriginSet::OriginSet(std::initializer_list<TermId> ids)
    : OriginSet(std::vector<TermId>(ids))
{
}

OriginSet::OriginSet(std::vector<TermId> ids)
    : ids_(std::move(ids))
{
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool OriginSet::contains(TermId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

bool OriginSet::subset_of(const OriginSet& other) const
{
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

OriginSet OriginSet::unite(const OriginSet& other) const
{
    OriginSet out;
    out.ids_.reserve(ids_.size() + other.ids_.size());
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out.ids_));
    return out;
}

std::string to_string(BrMode mode) { return mode == BrMode::automatic ? "auto" : "manual"; }

BeliefBase::BeliefBase(const TermStore& terms)
    : terms_(terms)
{
}

BeliefEvent BeliefBase::add_hypothesis(Context& ctx, TermId id)
{
    if (!terms_.is_proposition(id)) throw std::invalid_argument("only propositions can be asserted");
    if (hypotheses_.insert(id).second) hypothesis_order_.push_back(id);
    add_support(id, OriginSet{id});

    BeliefEvent event{id, false, {}, std::nullopt};
    if (!ctx.hypotheses.count(id)) {
        std::vector<TermId> candidates{id};
        if (auto it = dependents_.find(id); it != dependents_.end())
            candidates.insert(candidates.end(), it->second.begin(), it->second.end());
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        std::vector<TermId> before;
        for (TermId q : candidates)
            if (!believed(ctx, q)) before.push_back(q);
        ctx.hypotheses.insert(id);
        ++ctx.version;
        for (TermId q : before)
            if (believed(ctx, q)) event.newly_believed.push_back(q);
        event.added = true;
    }
    if (auto c = terms_.complement(id); c && believed(ctx, *c)) event.contradicts = *c;
    return event;
}

bool BeliefBase::add_support(TermId prop, const OriginSet& os)
{
    if (os.empty()) throw std::invalid_argument("origin sets must be non-empty");
    for (TermId h : os)
        if (!hypotheses_.count(h))
            throw UnregisteredHypothesisError(terms_.label(h) + " is not a registered hypothesis");

    auto& stored = supports_[prop];
    for (const auto& s : stored)
        if (s.subset_of(os)) return false;
    std::erase_if(stored, [&](const OriginSet& s) { return os.subset_of(s); });
    stored.push_back(os);
    std::sort(stored.begin(), stored.end());
    for (TermId h : os) {
        auto& deps = dependents_[h];
        if (std::find(deps.begin(), deps.end(), prop) == deps.end()) deps.push_back(prop);
    }
    ++version_;
    return true;
}

RetractionReport BeliefBase::retract(Context& ctx, TermId h)
{
    if (!ctx.hypotheses.count(h)) throw NotInContextError(terms_.label(h) + " is not asserted in context " + ctx.name);
    std::vector<TermId> before;
    if (auto it = dependents_.find(h); it != dependents_.end())
        for (TermId q : it->second)
            if (q != h && believed(ctx, q)) before.push_back(q);
    ctx.hypotheses.erase(h);
    ++ctx.version;

    RetractionReport report{h, {}, believed(ctx, h)};
    for (TermId q : before)
        if (!believed(ctx, q)) report.casualties.push_back(q);
    std::sort(report.casualties.begin(), report.casualties.end());
    return report;
}

bool BeliefBase::believed(const Context& ctx, TermId id) const
{
    auto it = supports_.find(id);
    if (it == supports_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [&](const OriginSet& os) { return os.inside(ctx.hypotheses); });
}

const std::vector<OriginSet>& BeliefBase::origin_sets(TermId id) const
{
    static const std::vector<OriginSet> none;
    auto it = supports_.find(id);
    return it == supports_.end() ? none : it->second;
}

std::vector<OriginSet> BeliefBase::active_origin_sets(const Context& ctx, TermId id) const
{
    std::vector<OriginSet> out;
    for (const auto& os : origin_sets(id))
        if (os.inside(ctx.hypotheses)) out.push_back(os);
    return out;
}

std::vector<TermId> BeliefBase::casualties(const Context& ctx, TermId h) const
{
    if (!ctx.hypotheses.count(h)) throw NotInContextError(terms_.label(h) + " is not asserted in context " + ctx.name);
    std::vector<TermId> out;
    auto it = dependents_.find(h);
    if (it == dependents_.end()) return out;
    for (TermId q : it->second) {
        if (q == h) continue;
        auto active = active_origin_sets(ctx, q);
        if (active.empty()) continue;
        if (std::all_of(active.begin(), active.end(), [&](const OriginSet& os) { return os.contains(h); })) out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t BeliefBase::casualty_count(const Context& ctx, TermId h) const { return casualties(ctx, h).size(); }

std::vector<TermId> BeliefBase::supported() const
{
    std::vector<TermId> out;
    for (const auto& [id, sets] : supports_)
        if (!sets.empty()) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<TermId> BeliefBase::believed_propositions(const Context& ctx) const
{
    std::vector<TermId> out;
    for (TermId id : supported())
        if (believed(ctx, id)) out.push_back(id);
    return out;
}

}  // namespace snebr
