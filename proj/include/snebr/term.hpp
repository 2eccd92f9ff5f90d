#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace snebr {

enum class TermKind : std::uint8_t {
    constant,
    variable,
    atom,
    negation,
    conjunction,
    disjunction,
    implication,
    forall,
};

/// Opaque handle for an interned term. Handles are never reused within one
/// TermStore, and their numeric order is the order of first interning.
struct TermId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(TermId, TermId) = default;
};

struct TermIdHash {
    std::size_t operator()(TermId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

/// Uninterned, structured formula as produced by the parser.
///
/// `name` holds the predicate name for atoms, the identifier for constants and
/// variables, and the bound variable for `forall`. `args` holds atom arguments
/// or connective operands.
struct Term {
    TermKind kind = TermKind::constant;
    std::string name;
    std::vector<Term> args;

    static Term constant(std::string name);
    static Term variable(std::string name);
    static Term atom(std::string predicate, std::vector<Term> args);
    static Term negation(Term operand);
    static Term conjunction(std::vector<Term> operands);
    static Term disjunction(std::vector<Term> operands);
    static Term implication(Term antecedent, Term consequent);
    static Term forall(std::string variable, Term body);

    friend bool operator==(const Term&, const Term&) = default;
};

bool is_proposition_kind(TermKind kind);

struct TermNode {
    TermKind kind;
    std::string name;
    std::vector<TermId> args;
    std::vector<std::string> free_variables;  // sorted, unique
    std::string index_key;
    int display_index = 0;  // 0 for constants and variables

    bool ground() const { return free_variables.empty(); }
};

class UnknownTermError : public std::out_of_range {
public:
    explicit UnknownTermError(TermId id);
};

class MalformedTermError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Variable bindings used when instantiating rule patterns.
using Binding = std::map<std::string, TermId>;

/// Hash-consed term store. Structurally identical terms share one TermId;
/// conjunctions and disjunctions are flattened, deduplicated and ordered by
/// operand id before lookup, so operand order never affects identity.
class TermStore {
public:
    TermStore() = default;

    TermId intern(const Term& term);
    std::optional<TermId> find(const Term& term) const;

    TermId make_constant(std::string_view name);
    TermId make_variable(std::string_view name);
    TermId make_atom(std::string_view predicate, std::vector<TermId> args);
    TermId make_negation(TermId operand);
    TermId make_conjunction(std::vector<TermId> operands);
    TermId make_disjunction(std::vector<TermId> operands);
    TermId make_implication(TermId antecedent, TermId consequent);
    TermId make_forall(std::string_view variable, TermId body);

    bool contains(TermId id) const { return id.value < nodes_.size(); }
    const TermNode& node(TermId id) const;
    TermKind kind(TermId id) const { return node(id).kind; }
    std::size_t size() const { return nodes_.size(); }
    bool is_proposition(TermId id) const { return is_proposition_kind(node(id).kind); }

    /// The negation partner of `id`: the operand when `id` is a negation,
    /// otherwise the negation of `id` if it has ever been interned.
    std::optional<TermId> complement(TermId id) const;

    /// Surface-language text; parsing it back interns to the same id.
    std::string render(TermId id) const;
    /// "WFF12" style label for propositions.
    std::string label(TermId id) const;
    std::optional<TermId> by_display_index(int index) const;
    Term to_term(TermId id) const;

    /// Rebuild `pattern` with bound variables replaced.
    Term substitute(TermId pattern, const Binding& binding) const;
    TermId instantiate(TermId pattern, const Binding& binding);
    std::optional<TermId> find_instance(TermId pattern, const Binding& binding) const;

    /// Structural match of a pattern against a ground term. Variables named in
    /// `variables` bind (consistently with `binding`); every other node must
    /// be identical. Conjunction and disjunction operands match positionally.
    bool match(TermId pattern, TermId ground, const std::vector<std::string>& variables, Binding& binding) const;

    std::span<const TermId> conjunctions_containing(TermId id) const;
    std::span<const TermId> disjunctions_containing(TermId id) const;
    std::span<const TermId> implications_with_antecedent(TermId id) const;
    std::span<const TermId> implications_with_consequent(TermId id) const;
    /// All terms sharing an index key: "PRED/arity" for atoms, "~" prefixed
    /// for negations.
    std::span<const TermId> with_key(const std::string& key) const;
    std::span<const TermId> foralls() const { return foralls_; }
    std::span<const TermId> propositions() const { return propositions_; }

private:
    TermId insert(TermNode node);
    std::string table_key(const TermNode& node) const;
    void render_into(TermId id, std::string& out) const;
    void render_operand(TermId id, bool wrap, std::string& out) const;

    std::vector<TermNode> nodes_;
    std::unordered_map<std::string, TermId> table_;
    std::unordered_map<TermId, TermId, TermIdHash> negation_of_;
    std::unordered_map<TermId, std::vector<TermId>, TermIdHash> conjunction_parents_;
    std::unordered_map<TermId, std::vector<TermId>, TermIdHash> disjunction_parents_;
    std::unordered_map<TermId, std::vector<TermId>, TermIdHash> by_antecedent_;
    std::unordered_map<TermId, std::vector<TermId>, TermIdHash> by_consequent_;
    std::unordered_map<std::string, std::vector<TermId>> by_key_;
    std::vector<TermId> foralls_;
    std::vector<TermId> propositions_;  // position i holds display index i + 1
};

}  // namespace snebr
