#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "snebr/belief_base.hpp"
#include "snebr/term.hpp"

namespace snebr {

enum class ContradictionKind { direct_negation, negated_disjunction_member };

std::string to_string(ContradictionKind kind);

struct ContradictionReport {
    TermId proposition;  // newly derived or asserted
    TermId contradicts;  // pre-existing belief
    ContradictionKind kind = ContradictionKind::direct_negation;

    friend bool operator==(const ContradictionReport&, const ContradictionReport&) = default;
};

/// Explicit contradictions only: `id` against its believed complement, and
/// disjunct against believed negated disjunction (in either direction).
/// Nothing is derived to find one.
std::optional<ContradictionReport> detect_contradiction(const BeliefBase& beliefs, const Context& ctx, TermId id);
std::vector<ContradictionReport> detect_contradictions(const BeliefBase& beliefs, const Context& ctx, TermId id);

struct Derivation {
    TermId proposition;
    OriginSet origin;
    std::string rule;  // schema name
    bool newly_believed = false;
};

struct DerivationBatch {
    std::vector<Derivation> derivations;
    std::vector<ContradictionReport> contradictions;
    bool paused = false;  // contradictions are waiting to be revised
};

struct QueryAnswer {
    TermId query;
    bool yes = false;
    std::vector<OriginSet> origin_sets;
    DerivationBatch batch;
};

struct InferenceLimits {
    std::size_t firing_cap = 10'000;
    std::size_t depth_limit = 10;
};

class FiringCapExceeded : public std::runtime_error {
public:
    explicit FiringCapExceeded(std::size_t cap);
};

/// A universally quantified implication ready for matching. Nested
/// quantifiers directly around the implication contribute variables.
struct Rule {
    TermId term;
    std::vector<std::string> variables;
    std::vector<TermId> antecedents;  // conjunct patterns
    TermId consequent;
};

std::optional<Rule> compile_rule(const TermStore& terms, TermId forall);

/// Conjunct elimination, ground modus ponens and universal instantiation
/// with modus ponens, run forward from a trigger or backward from a query.
///
/// Forward inference keeps an agenda of (proposition, new origin set) items.
/// When a conclusion becomes believed and explicitly contradicts something,
/// the batch stops with the agenda intact; `resume` continues it against
/// whatever the context looks like after revision.
class InferenceEngine {
public:
    InferenceEngine(TermStore& terms, BeliefBase& beliefs, InferenceLimits limits = {});

    DerivationBatch forward_infer(Context& ctx, TermId trigger);
    /// Queue `trigger` without running; `resume` does the work.
    void schedule(const Context& ctx, TermId trigger);
    DerivationBatch resume(Context& ctx);
    bool has_pending_work() const { return !agenda_.empty(); }
    void clear_agenda() { agenda_.clear(); }

    /// Answers yes with the active origin sets, or unknown (never "false").
    QueryAnswer backward_derive(Context& ctx, TermId query, std::optional<std::size_t> depth_limit = std::nullopt);

    const InferenceLimits& limits() const { return limits_; }

private:
    struct Item {
        TermId proposition;
        OriginSet origin;
    };
    struct Search {
        std::unordered_map<TermId, std::size_t, TermIdHash> explored;  // remaining depth
        std::vector<TermId> in_progress;
    };

    void refresh_rules();
    const Rule* rule_for(TermId forall) const;
    void process(Context& ctx, const Item& item, DerivationBatch& batch);
    void fire_rule(Context& ctx, const Rule& rule, std::optional<OriginSet> rule_origin, std::optional<std::size_t> fixed,
                   TermId fixed_instance, const OriginSet& fixed_origin, Binding binding, DerivationBatch& batch);
    void conclude(Context& ctx, TermId prop, const OriginSet& origin, const char* rule, DerivationBatch& batch, bool forward);
    void derive(Context& ctx, TermId goal, std::size_t depth, Search& search, DerivationBatch& batch);

    TermStore& terms_;
    BeliefBase& beliefs_;
    InferenceLimits limits_;
    std::deque<Item> agenda_;
    std::size_t firings_ = 0;

    std::size_t scanned_foralls_ = 0;
    std::unordered_map<TermId, Rule, TermIdHash> rules_;
    std::unordered_map<std::string, std::vector<TermId>> rules_by_antecedent_;
    std::unordered_map<std::string, std::vector<TermId>> rules_by_consequent_;
};

}  // namespace snebr
