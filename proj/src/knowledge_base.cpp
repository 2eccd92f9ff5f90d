#include "snebr/knowledge_base.hpp"

#include <algorithm>

namespace snebr {

PendingRevisionError::PendingRevisionError()
    : std::logic_error("a belief revision is pending; answer it first (retract <wffN>, ... or keep)")
{
}

NothingPendingError::NothingPendingError()
    : std::logic_error("no belief revision is pending")
{
}

KnowledgeBase::KnowledgeBase(KnowledgeBaseOptions options)
    : options_(options)
    , beliefs_(terms_)
    , entrenchment_(beliefs_)
    , engine_(terms_, beliefs_, options.limits)
{
}

void KnowledgeBase::set_mode(BrMode mode)
{
    if (pending_) throw PendingRevisionError();
    context_.mode = mode;
}

void KnowledgeBase::enqueue(const std::vector<ContradictionReport>& reports)
{
    for (const auto& r : reports) {
        bool duplicate = std::any_of(contradictions_.begin(), contradictions_.end(), [&](const ContradictionReport& q) {
            return (q.proposition == r.proposition && q.contradicts == r.contradicts) ||
                   (q.proposition == r.contradicts && q.contradicts == r.proposition);
        });
        if (!duplicate) contradictions_.push_back(r);
    }
}

void KnowledgeBase::emit_batch(const DerivationBatch& batch, std::vector<Event>& events)
{
    for (const auto& d : batch.derivations) events.emplace_back(DerivedEvent{d.proposition, d.origin, d.rule});
    enqueue(batch.contradictions);
}

void KnowledgeBase::drive(std::vector<Event>& events)
{
    while (true) {
        while (!contradictions_.empty()) {
            auto report = contradictions_.front();
            contradictions_.pop_front();
            if (!still_contradictory(beliefs_, context_, report)) continue;
            events.emplace_back(ContradictionEvent{report, context_.hypotheses.count(report.proposition) != 0});
            auto state = revise(beliefs_, entrenchment_, context_, report);
            for (const auto& pass : state.passes) {
                events.emplace_back(ListsEvent{pass});
                if (pass.auto_retraction) events.emplace_back(RetractedEvent{*pass.auto_retraction, true});
            }
            if (state.status == RevisionStatus::awaiting_user) {
                pending_ = std::move(state);
                return;
            }
            last_ = std::move(state);
        }
        if (!engine_.has_pending_work()) return;
        try {
            emit_batch(engine_.resume(context_), events);
        } catch (const FiringCapExceeded& e) {
            events.emplace_back(ErrorEvent{"firing_cap", e.what(), 0, 0});
            return;
        }
    }
}

void KnowledgeBase::finish(std::vector<Event>& events) const
{
    if (!pending_) return;
    events.emplace_back(PendingRevisionEvent{pending_->current().inconsistent_sets, pending_->current().culprits});
}

std::vector<Event> KnowledgeBase::assert_wff(TermId wff, bool forward)
{
    if (pending_) throw PendingRevisionError();
    const TermNode node = terms_.node(wff);
    if (!is_proposition_kind(node.kind)) throw std::invalid_argument("only propositions can be asserted");
    if (!node.ground()) throw std::invalid_argument("cannot assert a formula with free variables");

    if (node.kind == TermKind::atom && node.index_key == kGreaterKey) entrenchment_.assert_order(context_, node.args[0], node.args[1]);
    if (node.kind == TermKind::atom && node.index_key == kSourceKey && terms_.kind(node.args[0]) == TermKind::constant) {
        auto current = entrenchment_.source_of(context_, node.args[1]);
        if (current && *current != node.args[0])
            throw MultipleSourceError(terms_.label(node.args[1]) + " already has source " + terms_.render(*current) +
                                      "; only one source per belief is supported");
    }

    std::vector<Event> events;
    auto added = beliefs_.add_hypothesis(context_, wff);
    events.emplace_back(AssertedEvent{wff, !added.added});
    for (TermId q : added.newly_believed) enqueue(detect_contradictions(beliefs_, context_, q));
    if (forward) engine_.schedule(context_, wff);
    drive(events);
    finish(events);
    return events;
}

std::vector<Event> KnowledgeBase::query(TermId wff)
{
    if (pending_) throw PendingRevisionError();
    if (!terms_.node(wff).ground()) throw std::invalid_argument("queries must be closed formulas");
    std::vector<Event> events;
    try {
        auto answer = engine_.backward_derive(context_, wff);
        emit_batch(answer.batch, events);
    } catch (const FiringCapExceeded& e) {
        events.emplace_back(ErrorEvent{"firing_cap", e.what(), 0, 0});
    }
    drive(events);
    auto sets = beliefs_.active_origin_sets(context_, wff);
    events.emplace_back(AnswerEvent{wff, !sets.empty(), std::move(sets)});
    finish(events);
    return events;
}

std::vector<Event> KnowledgeBase::resolve(const ManualChoice& choice)
{
    if (!pending_) throw NothingPendingError();
    auto state = apply_manual_choice(beliefs_, context_, *pending_, choice);
    std::vector<Event> events;
    if (state.status == RevisionStatus::kept_inconsistent) {
        events.emplace_back(InfoEvent{"kept", "The context is left inconsistent.", {state.contradiction.proposition, state.contradiction.contradicts}});
    } else {
        for (std::size_t i = pending_->retractions.size(); i < state.retractions.size(); ++i)
            events.emplace_back(RetractedEvent{state.retractions[i], false});
    }
    pending_.reset();
    last_ = std::move(state);
    drive(events);
    finish(events);
    return events;
}

}  // namespace snebr
