#include "snebr/parser.hpp"

#include <algorithm>
#include <cctype>

namespace snebr {

namespace {

std::string describe(const std::vector<std::string>& expected, const std::string& found)
{
    std::string msg = "expected ";
    if (expected.size() > 1) msg += "one of ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += ", ";
        msg += expected[i];
    }
    msg += "; found " + found;
    return msg;
}

std::string at(std::size_t line, std::size_t column) { return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": "; }

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found)
    : std::runtime_error(at(line, column) + describe(expected, found))
    , detail_(describe(expected, found))
    , line_(line)
    , column_(column)
    , expected_(std::move(expected))
{
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(at(line, column) + message)
    , detail_(message)
    , line_(line)
    , column_(column)
{
}

namespace {

enum class Tok { ident, lparen, rparen, comma, tilde, arrow, kw_all, kw_and, kw_or, end };

struct Token {
    Tok kind;
    std::string text;  // upper-cased for identifiers
    std::size_t line;
    std::size_t column;
};

std::string upper(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t{Tok::end, {}, line, col};
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '-')) ++j;
            t.text = upper(text.substr(i, j - i));
            if (t.text == "ALL")
                t.kind = Tok::kw_all;
            else if (t.text == "AND")
                t.kind = Tok::kw_and;
            else if (t.text == "OR")
                t.kind = Tok::kw_or;
            else
                t.kind = Tok::ident;
            advance(j - i);
        } else if (c == '(') {
            t.kind = Tok::lparen;
            advance(1);
        } else if (c == ')') {
            t.kind = Tok::rparen;
            advance(1);
        } else if (c == ',') {
            t.kind = Tok::comma;
            advance(1);
        } else if (c == '~') {
            t.kind = Tok::tilde;
            advance(1);
        } else if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
            t.kind = Tok::arrow;
            advance(2);
        } else {
            throw ParseError(line, col, "unexpected character '" + std::string(1, c) + "'");
        }
        out.push_back(std::move(t));
    }
    out.push_back({Tok::end, {}, line, col});
    return out;
}

std::string spell(const Token& t)
{
    switch (t.kind) {
    case Tok::ident: return "identifier " + t.text;
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::tilde: return "'~'";
    case Tok::arrow: return "'=>'";
    case Tok::kw_all: return "'all'";
    case Tok::kw_and: return "'and'";
    case Tok::kw_or: return "'or'";
    case Tok::end: return "end of input";
    }
    return "?";
}

bool occurs_free(const Term& t, const std::string& var)
{
    if (t.kind == TermKind::variable) return t.name == var;
    if (t.kind == TermKind::forall && t.name == var) return false;
    return std::any_of(t.args.begin(), t.args.end(), [&](const Term& a) { return occurs_free(a, var); });
}

std::optional<int> wff_reference(const std::string& ident)
{
    if (ident.size() <= 3 || ident.compare(0, 3, "WFF") != 0) return std::nullopt;
    if (!std::all_of(ident.begin() + 3, ident.end(), [](unsigned char c) { return std::isdigit(c); })) return std::nullopt;
    if (ident.size() > 12) return std::nullopt;
    return std::stoi(ident.substr(3));
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const WffResolver& resolver)
        : tokens_(std::move(tokens))
        , resolver_(resolver)
    {
    }

    Term parse_all()
    {
        Term t = wff();
        expect(Tok::end, "end of input");
        return t;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }

    Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        const auto& t = peek();
        throw ParseError(t.line, t.column, std::move(expected), spell(t));
    }

    Token expect(Tok kind, const std::string& what)
    {
        if (peek().kind != kind) fail({what});
        return take();
    }

    Term wff()
    {
        if (peek().kind != Tok::kw_all) return imp();
        take();
        expect(Tok::lparen, "'('");
        auto var_tok = expect(Tok::ident, "variable");
        expect(Tok::rparen, "')'");
        expect(Tok::lparen, "'('");
        bound_.push_back(var_tok.text);
        Term body = wff();
        bound_.pop_back();
        expect(Tok::rparen, "')'");
        if (!occurs_free(body, var_tok.text))
            throw ParseError(var_tok.line, var_tok.column, "variable " + var_tok.text + " does not occur in the quantified body");
        return Term::forall(var_tok.text, std::move(body));
    }

    Term imp()
    {
        Term lhs = dis();
        if (peek().kind != Tok::arrow) return lhs;
        take();
        Term rhs = imp();
        return Term::implication(std::move(lhs), std::move(rhs));
    }

    Term dis()
    {
        std::vector<Term> ops{con()};
        while (peek().kind == Tok::kw_or) {
            take();
            ops.push_back(con());
        }
        return ops.size() == 1 ? std::move(ops.front()) : Term::disjunction(std::move(ops));
    }

    Term con()
    {
        std::vector<Term> ops{neg()};
        while (peek().kind == Tok::kw_and) {
            take();
            ops.push_back(neg());
        }
        return ops.size() == 1 ? std::move(ops.front()) : Term::conjunction(std::move(ops));
    }

    Term neg()
    {
        switch (peek().kind) {
        case Tok::tilde:
            take();
            return Term::negation(neg());
        case Tok::lparen: {
            take();
            Term inner = wff();
            expect(Tok::rparen, "')'");
            return inner;
        }
        case Tok::ident:
            return atom();
        default:
            fail({"'~'", "'('", "predicate"});
        }
    }

    Term atom()
    {
        auto name = take();
        expect(Tok::lparen, "'('");
        std::vector<Term> args;
        do {
            if (!args.empty()) take();
            bool meta = (name.text == "SOURCE" && args.size() == 1) || name.text == "GREATER";
            args.push_back(meta ? meta_argument() : argument());
        } while (peek().kind == Tok::comma);
        expect(Tok::rparen, "',' or ')'");
        return Term::atom(name.text, std::move(args));
    }

    Term argument()
    {
        auto t = expect(Tok::ident, "identifier");
        if (std::find(bound_.begin(), bound_.end(), t.text) != bound_.end()) return Term::variable(t.text);
        return Term::constant(t.text);
    }

    Term meta_argument()
    {
        const auto& t = peek();
        bool starts_wff = t.kind == Tok::kw_all || t.kind == Tok::tilde || t.kind == Tok::lparen ||
                          (t.kind == Tok::ident && peek(1).kind == Tok::lparen);
        if (starts_wff) return wff();
        if (t.kind == Tok::ident && std::find(bound_.begin(), bound_.end(), t.text) == bound_.end()) {
            if (auto index = wff_reference(t.text)) {
                std::optional<Term> target;
                if (resolver_) target = resolver_(*index);
                if (!target) throw ParseError(t.line, t.column, "unknown wff reference " + t.text);
                take();
                return *target;
            }
        }
        return argument();
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const WffResolver& resolver_;
    std::vector<std::string> bound_;
};

}  // namespace

Term parse(std::string_view text, const WffResolver& resolver)
{
    Parser parser(tokenize(text), resolver);
    return parser.parse_all();
}

}  // namespace snebr
