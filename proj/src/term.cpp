#include "snebr/term.hpp"

#include <algorithm>
#include <cctype>

namespace snebr {

namespace {

std::string upper(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::vector<std::string> merge_free(std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

bool intersects(const std::vector<std::string>& sorted, const std::vector<std::string>& names)
{
    return std::any_of(names.begin(), names.end(),
                       [&](const std::string& n) { return std::binary_search(sorted.begin(), sorted.end(), n); });
}

}  // namespace

Term Term::constant(std::string name) { return {TermKind::constant, std::move(name), {}}; }
Term Term::variable(std::string name) { return {TermKind::variable, std::move(name), {}}; }
Term Term::atom(std::string predicate, std::vector<Term> args) { return {TermKind::atom, std::move(predicate), std::move(args)}; }
Term Term::negation(Term operand) { return {TermKind::negation, {}, {std::move(operand)}}; }
Term Term::conjunction(std::vector<Term> operands) { return {TermKind::conjunction, {}, std::move(operands)}; }
Term Term::disjunction(std::vector<Term> operands) { return {TermKind::disjunction, {}, std::move(operands)}; }
Term Term::implication(Term antecedent, Term consequent)
{
    return {TermKind::implication, {}, {std::move(antecedent), std::move(consequent)}};
}
Term Term::forall(std::string variable, Term body) { return {TermKind::forall, std::move(variable), {std::move(body)}}; }

bool is_proposition_kind(TermKind kind) { return kind != TermKind::constant && kind != TermKind::variable; }

UnknownTermError::UnknownTermError(TermId id)
    : std::out_of_range("unknown term id " + std::to_string(id.value))
{
}

const TermNode& TermStore::node(TermId id) const
{
    if (!contains(id)) throw UnknownTermError(id);
    return nodes_[id.value];
}

std::string TermStore::table_key(const TermNode& n) const
{
    std::string key;
    key.push_back(static_cast<char>('0' + static_cast<int>(n.kind)));
    key += n.name;
    key.push_back('\x1f');
    for (TermId a : n.args) {
        key += std::to_string(a.value);
        key.push_back(',');
    }
    return key;
}

TermId TermStore::insert(TermNode n)
{
    auto key = table_key(n);
    if (auto it = table_.find(key); it != table_.end()) return it->second;

    TermId id{static_cast<std::uint32_t>(nodes_.size())};
    switch (n.kind) {
    case TermKind::atom:
        n.index_key = n.name + "/" + std::to_string(n.args.size());
        break;
    case TermKind::negation:
        n.index_key = "~" + nodes_[n.args[0].value].index_key;
        negation_of_[n.args[0]] = id;
        break;
    case TermKind::conjunction:
        n.index_key = "&";
        for (TermId a : n.args) conjunction_parents_[a].push_back(id);
        break;
    case TermKind::disjunction:
        n.index_key = "|";
        for (TermId a : n.args) disjunction_parents_[a].push_back(id);
        break;
    case TermKind::implication:
        n.index_key = "=>";
        by_antecedent_[n.args[0]].push_back(id);
        by_consequent_[n.args[1]].push_back(id);
        break;
    case TermKind::forall:
        n.index_key = "all";
        foralls_.push_back(id);
        break;
    case TermKind::constant:
    case TermKind::variable:
        break;
    }
    if (is_proposition_kind(n.kind)) {
        propositions_.push_back(id);
        n.display_index = static_cast<int>(propositions_.size());
    }
    by_key_[n.index_key].push_back(id);
    nodes_.push_back(std::move(n));
    table_.emplace(std::move(key), id);
    return id;
}

TermId TermStore::make_constant(std::string_view name)
{
    if (name.empty()) throw MalformedTermError("empty constant name");
    return insert({TermKind::constant, upper(name), {}, {}, {}, 0});
}

TermId TermStore::make_variable(std::string_view name)
{
    if (name.empty()) throw MalformedTermError("empty variable name");
    auto n = upper(name);
    return insert({TermKind::variable, n, {}, {n}, {}, 0});
}

TermId TermStore::make_atom(std::string_view predicate, std::vector<TermId> args)
{
    if (predicate.empty()) throw MalformedTermError("empty predicate name");
    if (args.empty()) throw MalformedTermError("atom " + std::string(predicate) + " needs at least one argument");
    std::vector<std::string> free;
    for (TermId a : args) free = merge_free(std::move(free), node(a).free_variables);
    return insert({TermKind::atom, upper(predicate), std::move(args), std::move(free), {}, 0});
}

TermId TermStore::make_negation(TermId operand)
{
    const auto& op = node(operand);
    if (!is_proposition_kind(op.kind)) throw MalformedTermError("negation of a non-proposition");
    return insert({TermKind::negation, {}, {operand}, op.free_variables, {}, 0});
}

namespace {

template <typename Store>
std::vector<TermId> canonical_operands(const Store& store, TermKind kind, std::vector<TermId> operands)
{
    std::vector<TermId> flat;
    for (TermId op : operands) {
        const auto& n = store.node(op);
        if (!is_proposition_kind(n.kind)) throw MalformedTermError("connective operand is not a proposition");
        if (n.kind == kind)
            flat.insert(flat.end(), n.args.begin(), n.args.end());
        else
            flat.push_back(op);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) throw MalformedTermError("connective without operands");
    return flat;
}

}  // namespace

TermId TermStore::make_conjunction(std::vector<TermId> operands)
{
    auto flat = canonical_operands(*this, TermKind::conjunction, std::move(operands));
    if (flat.size() == 1) return flat.front();
    std::vector<std::string> free;
    for (TermId a : flat) free = merge_free(std::move(free), node(a).free_variables);
    return insert({TermKind::conjunction, {}, std::move(flat), std::move(free), {}, 0});
}

TermId TermStore::make_disjunction(std::vector<TermId> operands)
{
    auto flat = canonical_operands(*this, TermKind::disjunction, std::move(operands));
    if (flat.size() == 1) return flat.front();
    std::vector<std::string> free;
    for (TermId a : flat) free = merge_free(std::move(free), node(a).free_variables);
    return insert({TermKind::disjunction, {}, std::move(flat), std::move(free), {}, 0});
}

TermId TermStore::make_implication(TermId antecedent, TermId consequent)
{
    const auto& a = node(antecedent);
    const auto& c = node(consequent);
    if (!is_proposition_kind(a.kind) || !is_proposition_kind(c.kind))
        throw MalformedTermError("implication operand is not a proposition");
    auto free = merge_free(a.free_variables, c.free_variables);
    return insert({TermKind::implication, {}, {antecedent, consequent}, std::move(free), {}, 0});
}

TermId TermStore::make_forall(std::string_view variable, TermId body)
{
    auto var = upper(variable);
    const auto& b = node(body);
    if (!is_proposition_kind(b.kind)) throw MalformedTermError("quantified body is not a proposition");
    auto free = b.free_variables;
    auto it = std::lower_bound(free.begin(), free.end(), var);
    if (it == free.end() || *it != var)
        throw MalformedTermError("variable " + var + " does not occur in the quantified body");
    free.erase(it);
    return insert({TermKind::forall, var, {body}, std::move(free), {}, 0});
}

TermId TermStore::intern(const Term& t)
{
    switch (t.kind) {
    case TermKind::constant:
        return make_constant(t.name);
    case TermKind::variable:
        return make_variable(t.name);
    case TermKind::atom: {
        std::vector<TermId> args;
        args.reserve(t.args.size());
        for (const auto& a : t.args) args.push_back(intern(a));
        return make_atom(t.name, std::move(args));
    }
    case TermKind::negation:
        if (t.args.size() != 1) throw MalformedTermError("negation takes one operand");
        return make_negation(intern(t.args[0]));
    case TermKind::conjunction:
    case TermKind::disjunction: {
        if (t.args.size() < 2) throw MalformedTermError("connective needs at least two operands");
        std::vector<TermId> ops;
        ops.reserve(t.args.size());
        for (const auto& a : t.args) ops.push_back(intern(a));
        return t.kind == TermKind::conjunction ? make_conjunction(std::move(ops)) : make_disjunction(std::move(ops));
    }
    case TermKind::implication: {
        if (t.args.size() != 2) throw MalformedTermError("implication takes two operands");
        auto a = intern(t.args[0]);
        auto c = intern(t.args[1]);
        return make_implication(a, c);
    }
    case TermKind::forall:
        if (t.args.size() != 1) throw MalformedTermError("forall takes one body");
        return make_forall(t.name, intern(t.args[0]));
    }
    throw MalformedTermError("unknown term kind");
}

std::optional<TermId> TermStore::find(const Term& t) const
{
    auto lookup = [this](TermNode n) -> std::optional<TermId> {
        auto it = table_.find(table_key(n));
        if (it == table_.end()) return std::nullopt;
        return it->second;
    };
    std::vector<TermId> args;
    for (const auto& a : t.args) {
        auto id = find(a);
        if (!id) return std::nullopt;
        args.push_back(*id);
    }
    switch (t.kind) {
    case TermKind::constant:
    case TermKind::variable:
    case TermKind::forall:
        return lookup({t.kind, upper(t.name), std::move(args), {}, {}, 0});
    case TermKind::atom:
        return lookup({t.kind, upper(t.name), std::move(args), {}, {}, 0});
    case TermKind::negation:
    case TermKind::implication:
        return lookup({t.kind, {}, std::move(args), {}, {}, 0});
    case TermKind::conjunction:
    case TermKind::disjunction: {
        std::vector<TermId> flat;
        try {
            flat = canonical_operands(*this, t.kind, std::move(args));
        } catch (const MalformedTermError&) {
            return std::nullopt;
        }
        if (flat.size() == 1) return flat.front();
        return lookup({t.kind, {}, std::move(flat), {}, {}, 0});
    }
    }
    return std::nullopt;
}

std::optional<TermId> TermStore::complement(TermId id) const
{
    const auto& n = node(id);
    if (n.kind == TermKind::negation) return n.args[0];
    if (auto it = negation_of_.find(id); it != negation_of_.end()) return it->second;
    return std::nullopt;
}

std::string TermStore::label(TermId id) const
{
    const auto& n = node(id);
    if (n.display_index == 0) return n.name;
    return "WFF" + std::to_string(n.display_index);
}

std::optional<TermId> TermStore::by_display_index(int index) const
{
    if (index < 1 || static_cast<std::size_t>(index) > propositions_.size()) return std::nullopt;
    return propositions_[static_cast<std::size_t>(index - 1)];
}

Term TermStore::to_term(TermId id) const
{
    const auto& n = node(id);
    Term t{n.kind, n.name, {}};
    for (TermId a : n.args) t.args.push_back(to_term(a));
    return t;
}

Term TermStore::substitute(TermId pattern, const Binding& binding) const
{
    const auto& n = node(pattern);
    if (n.ground()) return to_term(pattern);
    if (n.kind == TermKind::variable) {
        auto it = binding.find(n.name);
        return it == binding.end() ? to_term(pattern) : to_term(it->second);
    }
    Term t{n.kind, n.name, {}};
    if (n.kind == TermKind::forall && binding.count(n.name)) {
        Binding inner = binding;
        inner.erase(n.name);
        t.args.push_back(substitute(n.args[0], inner));
        return t;
    }
    for (TermId a : n.args) t.args.push_back(substitute(a, binding));
    return t;
}

TermId TermStore::instantiate(TermId pattern, const Binding& binding) { return intern(substitute(pattern, binding)); }

std::optional<TermId> TermStore::find_instance(TermId pattern, const Binding& binding) const
{
    return find(substitute(pattern, binding));
}

bool TermStore::match(TermId pattern, TermId ground, const std::vector<std::string>& variables, Binding& binding) const
{
    const auto& p = node(pattern);
    if (!intersects(p.free_variables, variables)) return pattern == ground;
    if (p.kind == TermKind::variable) {
        auto [it, inserted] = binding.emplace(p.name, ground);
        return inserted || it->second == ground;
    }
    const auto& g = node(ground);
    if (p.kind != g.kind || p.name != g.name || p.args.size() != g.args.size()) return false;
    if (p.kind == TermKind::forall) {
        // The bound variable shadows any rule variable of the same name.
        std::vector<std::string> inner;
        for (const auto& v : variables)
            if (v != p.name) inner.push_back(v);
        return match(p.args[0], g.args[0], inner, binding);
    }
    for (std::size_t i = 0; i < p.args.size(); ++i)
        if (!match(p.args[i], g.args[i], variables, binding)) return false;
    return true;
}

namespace {

const std::vector<TermId> kNoTerms;

std::span<const TermId> lookup_span(const std::unordered_map<TermId, std::vector<TermId>, TermIdHash>& map, TermId id)
{
    auto it = map.find(id);
    return it == map.end() ? std::span<const TermId>(kNoTerms) : std::span<const TermId>(it->second);
}

}  // namespace

std::span<const TermId> TermStore::conjunctions_containing(TermId id) const { return lookup_span(conjunction_parents_, id); }
std::span<const TermId> TermStore::disjunctions_containing(TermId id) const { return lookup_span(disjunction_parents_, id); }
std::span<const TermId> TermStore::implications_with_antecedent(TermId id) const { return lookup_span(by_antecedent_, id); }
std::span<const TermId> TermStore::implications_with_consequent(TermId id) const { return lookup_span(by_consequent_, id); }

std::span<const TermId> TermStore::with_key(const std::string& key) const
{
    auto it = by_key_.find(key);
    return it == by_key_.end() ? std::span<const TermId>(kNoTerms) : std::span<const TermId>(it->second);
}

// Operators bind, tightest first: ~, and, or, =>. A quantifier is only a
// complete wff, so it is parenthesized whenever it appears as an operand.
void TermStore::render_operand(TermId id, bool wrap, std::string& out) const
{
    if (wrap) out.push_back('(');
    render_into(id, out);
    if (wrap) out.push_back(')');
}

void TermStore::render_into(TermId id, std::string& out) const
{
    const auto& n = node(id);
    switch (n.kind) {
    case TermKind::constant:
    case TermKind::variable:
        out += n.name;
        return;
    case TermKind::atom:
        out += n.name;
        out.push_back('(');
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out.push_back(',');
            render_into(n.args[i], out);
        }
        out.push_back(')');
        return;
    case TermKind::negation: {
        auto k = kind(n.args[0]);
        out.push_back('~');
        render_operand(n.args[0], k != TermKind::atom && k != TermKind::negation, out);
        return;
    }
    case TermKind::conjunction:
    case TermKind::disjunction: {
        const char* sep = n.kind == TermKind::conjunction ? " and " : " or ";
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += sep;
            auto k = kind(n.args[i]);
            bool wrap = k == TermKind::implication || k == TermKind::forall ||
                        (n.kind == TermKind::conjunction && k == TermKind::disjunction);
            render_operand(n.args[i], wrap, out);
        }
        return;
    }
    case TermKind::implication: {
        auto a = kind(n.args[0]);
        auto c = kind(n.args[1]);
        render_operand(n.args[0], a == TermKind::implication || a == TermKind::forall || a == TermKind::negation, out);
        out += " => ";
        render_operand(n.args[1], c == TermKind::forall || c == TermKind::negation, out);
        return;
    }
    case TermKind::forall:
        out += "all(";
        out += n.name;
        out += ")(";
        render_into(n.args[0], out);
        out.push_back(')');
        return;
    }
}

std::string TermStore::render(TermId id) const
{
    std::string out;
    render_into(id, out);
    return out;
}

}  // namespace snebr
