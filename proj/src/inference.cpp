#include "snebr/inference.hpp"

#include <algorithm>
#include <functional>

namespace snebr {

std::string to_string(ContradictionKind kind)
{
    return kind == ContradictionKind::direct_negation ? "direct_negation" : "negated_disjunction_member";
}

FiringCapExceeded::FiringCapExceeded(std::size_t cap)
    : std::runtime_error("inference stopped after " + std::to_string(cap) + " rule firings; the rule set does not reach a fixed point")
{
}

std::vector<ContradictionReport> detect_contradictions(const BeliefBase& beliefs, const Context& ctx, TermId id)
{
    std::vector<ContradictionReport> out;
    if (!beliefs.believed(ctx, id)) return out;
    const auto& terms = beliefs.terms();
    auto push = [&](TermId other, ContradictionKind kind) {
        ContradictionReport r{id, other, kind};
        if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    };

    if (auto c = terms.complement(id); c && beliefs.believed(ctx, *c)) push(*c, ContradictionKind::direct_negation);

    const auto& n = terms.node(id);
    if (n.kind == TermKind::negation && terms.kind(n.args[0]) == TermKind::disjunction) {
        for (TermId d : terms.node(n.args[0]).args)
            if (beliefs.believed(ctx, d)) push(d, ContradictionKind::negated_disjunction_member);
    }
    for (TermId disjunction : terms.disjunctions_containing(id)) {
        auto negated = terms.complement(disjunction);
        if (negated && beliefs.believed(ctx, *negated)) push(*negated, ContradictionKind::negated_disjunction_member);
    }
    return out;
}

std::optional<ContradictionReport> detect_contradiction(const BeliefBase& beliefs, const Context& ctx, TermId id)
{
    auto all = detect_contradictions(beliefs, ctx, id);
    if (all.empty()) return std::nullopt;
    return all.front();
}

std::optional<Rule> compile_rule(const TermStore& terms, TermId forall)
{
    Rule rule{forall, {}, {}, forall};
    TermId body = forall;
    while (terms.kind(body) == TermKind::forall) {
        const auto& n = terms.node(body);
        rule.variables.push_back(n.name);
        body = n.args[0];
    }
    if (rule.variables.empty() || terms.kind(body) != TermKind::implication) return std::nullopt;
    const auto& imp = terms.node(body);
    TermId ante = imp.args[0];
    if (terms.kind(ante) == TermKind::conjunction)
        rule.antecedents = terms.node(ante).args;
    else
        rule.antecedents = {ante};
    rule.consequent = imp.args[1];

    // Every variable has to be bound by some antecedent, otherwise the
    // consequent can never be instantiated to a ground term.
    for (const auto& v : rule.variables) {
        bool bound = std::any_of(rule.antecedents.begin(), rule.antecedents.end(), [&](TermId a) {
            const auto& fv = terms.node(a).free_variables;
            return std::binary_search(fv.begin(), fv.end(), v);
        });
        if (!bound) return std::nullopt;
    }
    return rule;
}

InferenceEngine::InferenceEngine(TermStore& terms, BeliefBase& beliefs, InferenceLimits limits)
    : terms_(terms)
    , beliefs_(beliefs)
    , limits_(limits)
{
}

void InferenceEngine::refresh_rules()
{
    auto foralls = terms_.foralls();
    for (; scanned_foralls_ < foralls.size(); ++scanned_foralls_) {
        TermId id = foralls[scanned_foralls_];
        if (!terms_.node(id).ground()) continue;
        auto rule = compile_rule(terms_, id);
        if (!rule) continue;
        for (TermId a : rule->antecedents) {
            auto& bucket = rules_by_antecedent_[terms_.node(a).index_key];
            if (bucket.empty() || bucket.back() != id) bucket.push_back(id);
        }
        rules_by_consequent_[terms_.node(rule->consequent).index_key].push_back(id);
        rules_.emplace(id, std::move(*rule));
    }
}

const Rule* InferenceEngine::rule_for(TermId forall) const
{
    auto it = rules_.find(forall);
    return it == rules_.end() ? nullptr : &it->second;
}

void InferenceEngine::conclude(Context& ctx, TermId prop, const OriginSet& origin, const char* rule, DerivationBatch& batch,
                               bool forward)
{
    if (++firings_ > limits_.firing_cap) {
        agenda_.clear();
        throw FiringCapExceeded(limits_.firing_cap);
    }
    bool was_believed = beliefs_.believed(ctx, prop);
    if (!beliefs_.add_support(prop, origin)) return;
    bool now_believed = beliefs_.believed(ctx, prop);
    batch.derivations.push_back({prop, origin, rule, !was_believed && now_believed});
    if (forward) agenda_.push_back({prop, origin});
    if (!was_believed && now_believed) {
        for (auto& r : detect_contradictions(beliefs_, ctx, prop)) batch.contradictions.push_back(r);
    }
}

void InferenceEngine::schedule(const Context& ctx, TermId trigger)
{
    firings_ = 0;
    for (const auto& os : beliefs_.active_origin_sets(ctx, trigger)) agenda_.push_back({trigger, os});
}

DerivationBatch InferenceEngine::forward_infer(Context& ctx, TermId trigger)
{
    schedule(ctx, trigger);
    return resume(ctx);
}

DerivationBatch InferenceEngine::resume(Context& ctx)
{
    DerivationBatch batch;
    refresh_rules();
    while (!agenda_.empty() && batch.contradictions.empty()) {
        Item item = std::move(agenda_.front());
        agenda_.pop_front();
        if (!beliefs_.is_active(ctx, item.origin)) continue;
        process(ctx, item, batch);
        refresh_rules();
    }
    batch.paused = !batch.contradictions.empty();
    return batch;
}

void InferenceEngine::process(Context& ctx, const Item& item, DerivationBatch& batch)
{
    const TermId p = item.proposition;
    const TermNode node = terms_.node(p);
    if (!node.ground()) return;

    if (node.kind == TermKind::conjunction) {
        for (TermId c : node.args) conclude(ctx, c, item.origin, "and-elimination", batch, true);
    }

    if (node.kind == TermKind::implication) {
        for (const auto& ante : beliefs_.active_origin_sets(ctx, node.args[0]))
            conclude(ctx, node.args[1], item.origin.unite(ante), "modus-ponens", batch, true);
    }

    {
        auto span = terms_.implications_with_antecedent(p);
        std::vector<TermId> implications(span.begin(), span.end());
        for (TermId imp : implications) {
            if (!terms_.node(imp).ground()) continue;
            TermId consequent = terms_.node(imp).args[1];
            for (const auto& os : beliefs_.active_origin_sets(ctx, imp))
                conclude(ctx, consequent, item.origin.unite(os), "modus-ponens", batch, true);
        }
    }

    if (node.kind == TermKind::forall) {
        if (const Rule* rule = rule_for(p)) {
            Rule copy = *rule;
            fire_rule(ctx, copy, item.origin, std::nullopt, p, item.origin, {}, batch);
        }
    }

    auto it = rules_by_antecedent_.find(node.index_key);
    if (it == rules_by_antecedent_.end()) return;
    std::vector<TermId> candidates = it->second;
    for (TermId rid : candidates) {
        if (!beliefs_.believed(ctx, rid)) continue;
        Rule rule = *rule_for(rid);
        for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
            Binding binding;
            if (!terms_.match(rule.antecedents[i], p, rule.variables, binding)) continue;
            fire_rule(ctx, rule, std::nullopt, i, p, item.origin, std::move(binding), batch);
        }
    }
}

void InferenceEngine::fire_rule(Context& ctx, const Rule& rule, std::optional<OriginSet> rule_origin,
                                std::optional<std::size_t> fixed, TermId fixed_instance, const OriginSet& fixed_origin,
                                Binding binding, DerivationBatch& batch)
{
    const std::size_t n = rule.antecedents.size();
    std::vector<TermId> instances(n);
    std::vector<std::pair<Binding, std::vector<TermId>>> matches;

    std::function<void(std::size_t, const Binding&)> join = [&](std::size_t idx, const Binding& b) {
        if (idx == n) {
            matches.emplace_back(b, instances);
            return;
        }
        if (fixed && idx == *fixed) {
            instances[idx] = fixed_instance;
            join(idx + 1, b);
            return;
        }
        TermId pattern = rule.antecedents[idx];
        const auto& free = terms_.node(pattern).free_variables;
        bool bound = std::all_of(free.begin(), free.end(), [&](const std::string& v) { return b.count(v) != 0; });
        if (bound) {
            auto inst = terms_.find_instance(pattern, b);
            if (inst && beliefs_.believed(ctx, *inst)) {
                instances[idx] = *inst;
                join(idx + 1, b);
            }
            return;
        }
        auto span = terms_.with_key(terms_.node(pattern).index_key);
        std::vector<TermId> candidates(span.begin(), span.end());
        for (TermId cand : candidates) {
            if (!terms_.node(cand).ground() || !beliefs_.believed(ctx, cand)) continue;
            Binding extended = b;
            if (!terms_.match(pattern, cand, rule.variables, extended)) continue;
            instances[idx] = cand;
            join(idx + 1, extended);
        }
    };
    join(0, binding);

    for (const auto& [b, insts] : matches) {
        std::vector<OriginSet> combos;
        if (rule_origin)
            combos.push_back(*rule_origin);
        else
            combos = beliefs_.active_origin_sets(ctx, rule.term);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<OriginSet> options;
            if (fixed && i == *fixed)
                options.push_back(fixed_origin);
            else
                options = beliefs_.active_origin_sets(ctx, insts[i]);
            std::vector<OriginSet> next;
            for (const auto& c : combos)
                for (const auto& o : options) next.push_back(c.unite(o));
            combos = std::move(next);
        }
        if (combos.empty()) continue;
        TermId consequent = terms_.instantiate(rule.consequent, b);
        for (const auto& os : combos) conclude(ctx, consequent, os, "universal-instantiation", batch, true);
    }
}

QueryAnswer InferenceEngine::backward_derive(Context& ctx, TermId query, std::optional<std::size_t> depth_limit)
{
    const std::size_t depth = depth_limit.value_or(limits_.depth_limit);
    QueryAnswer answer{query, false, {}, {}};
    firings_ = 0;
    // Repeat until a pass adds nothing: a goal cut off as in-progress on one
    // pass may succeed once its dependencies have been established.
    for (std::size_t pass = 0; pass <= depth; ++pass) {
        refresh_rules();
        Search search;
        auto before = answer.batch.derivations.size();
        derive(ctx, query, depth, search, answer.batch);
        if (answer.batch.derivations.size() == before) break;
    }
    answer.origin_sets = beliefs_.active_origin_sets(ctx, query);
    answer.yes = !answer.origin_sets.empty();
    answer.batch.paused = !answer.batch.contradictions.empty();
    return answer;
}

void InferenceEngine::derive(Context& ctx, TermId goal, std::size_t depth, Search& search, DerivationBatch& batch)
{
    if (!terms_.node(goal).ground()) return;
    if (std::find(search.in_progress.begin(), search.in_progress.end(), goal) != search.in_progress.end()) return;
    if (auto it = search.explored.find(goal); it != search.explored.end() && it->second >= depth) return;
    search.explored[goal] = depth;
    if (depth == 0) return;
    search.in_progress.push_back(goal);
    const std::size_t below = depth - 1;

    {
        auto span = terms_.conjunctions_containing(goal);
        std::vector<TermId> conjunctions(span.begin(), span.end());
        for (TermId c : conjunctions) {
            if (!terms_.node(c).ground()) continue;
            derive(ctx, c, below, search, batch);
            for (const auto& os : beliefs_.active_origin_sets(ctx, c)) conclude(ctx, goal, os, "and-elimination", batch, false);
        }
    }

    {
        auto span = terms_.implications_with_consequent(goal);
        std::vector<TermId> implications(span.begin(), span.end());
        for (TermId imp : implications) {
            if (!terms_.node(imp).ground()) continue;
            TermId ante = terms_.node(imp).args[0];
            derive(ctx, imp, below, search, batch);
            if (!beliefs_.believed(ctx, imp)) continue;
            derive(ctx, ante, below, search, batch);
            for (const auto& io : beliefs_.active_origin_sets(ctx, imp))
                for (const auto& ao : beliefs_.active_origin_sets(ctx, ante))
                    conclude(ctx, goal, io.unite(ao), "modus-ponens", batch, false);
        }
    }

    auto it = rules_by_consequent_.find(terms_.node(goal).index_key);
    if (it != rules_by_consequent_.end()) {
        std::vector<TermId> candidates = it->second;
        for (TermId rid : candidates) {
            Rule rule = *rule_for(rid);
            Binding binding;
            if (!terms_.match(rule.consequent, goal, rule.variables, binding)) continue;
            derive(ctx, rid, below, search, batch);
            if (!beliefs_.believed(ctx, rid)) continue;

            const std::size_t n = rule.antecedents.size();
            std::vector<TermId> instances(n);
            std::vector<std::vector<TermId>> solutions;
            std::function<void(std::size_t, const Binding&)> solve = [&](std::size_t idx, const Binding& b) {
                if (idx == n) {
                    solutions.push_back(instances);
                    return;
                }
                TermId pattern = rule.antecedents[idx];
                const auto& free = terms_.node(pattern).free_variables;
                bool bound = std::all_of(free.begin(), free.end(), [&](const std::string& v) { return b.count(v) != 0; });
                if (bound) {
                    TermId inst = terms_.instantiate(pattern, b);
                    derive(ctx, inst, below, search, batch);
                    if (beliefs_.believed(ctx, inst)) {
                        instances[idx] = inst;
                        solve(idx + 1, b);
                    }
                    return;
                }
                auto span = terms_.with_key(terms_.node(pattern).index_key);
                std::vector<TermId> pool(span.begin(), span.end());
                for (TermId cand : pool) {
                    if (!terms_.node(cand).ground()) continue;
                    Binding extended = b;
                    if (!terms_.match(pattern, cand, rule.variables, extended)) continue;
                    derive(ctx, cand, below, search, batch);
                    if (!beliefs_.believed(ctx, cand)) continue;
                    instances[idx] = cand;
                    solve(idx + 1, extended);
                }
            };
            solve(0, binding);

            for (const auto& insts : solutions) {
                std::vector<OriginSet> combos = beliefs_.active_origin_sets(ctx, rid);
                for (TermId inst : insts) {
                    std::vector<OriginSet> next;
                    for (const auto& c : combos)
                        for (const auto& o : beliefs_.active_origin_sets(ctx, inst)) next.push_back(c.unite(o));
                    combos = std::move(next);
                }
                for (const auto& os : combos) conclude(ctx, goal, os, "universal-instantiation", batch, false);
            }
        }
    }

    search.in_progress.pop_back();
}

}  // namespace snebr
