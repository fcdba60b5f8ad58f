#include "nl2asp/asp.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace nl2asp::asp {

AspError::AspError(Kind kind, std::string const &message, int line, int column)
: std::runtime_error(message)
, kind_(kind)
, line_(line)
, column_(column) { }

char const *to_string(AspError::Kind kind) {
    switch (kind) {
        case AspError::Kind::Syntax: return "SyntaxError";
        case AspError::Kind::UnsafeVariable: return "UnsafeVariable";
        case AspError::Kind::MissingShow: return "MissingShow";
        case AspError::Kind::DuplicateShow: return "DuplicateShow";
        case AspError::Kind::ArityMismatch: return "ArityMismatch";
        case AspError::Kind::InvalidTerm: return "InvalidTerm";
    }
    return "";
}

// {{{1 terms

bool operator==(Arith const &a, Arith const &b) {
    return a.op == b.op && *a.left == *b.left && *a.right == *b.right;
}

Term Term::symbol(std::string name) {
    if (needs_quotes(name)) {
        throw AspError(AspError::Kind::InvalidTerm, "constant '" + name + "' must be quoted");
    }
    return Term{Constant{std::move(name), false}};
}

Term Term::string(std::string text) { return Term{Constant{std::move(text), true}}; }

Term Term::integer(std::int64_t value) { return Term{value}; }

Term Term::variable(std::string name) {
    if (name.empty() || !std::isupper(static_cast<unsigned char>(name.front()))) {
        throw AspError(AspError::Kind::InvalidTerm, "variable '" + name + "' must begin with an uppercase letter");
    }
    return Term{Variable{std::move(name)}};
}

Term Term::arith(Term left, ArithOp op, Term right) {
    return Term{Arith{std::make_shared<Term const>(std::move(left)), op, std::make_shared<Term const>(std::move(right))}};
}

Term Term::constant_from_spelling(std::string text) {
    if (needs_quotes(text)) {
        return string(std::move(text));
    }
    return Term{Constant{std::move(text), false}};
}

bool Term::is_ground() const {
    if (is_variable()) {
        return false;
    }
    if (auto const *arith = std::get_if<Arith>(&value)) {
        return arith->left->is_ground() && arith->right->is_ground();
    }
    return true;
}

std::string Term::plain() const {
    if (auto const *c = std::get_if<Constant>(&value)) {
        return c->name;
    }
    if (auto const *v = std::get_if<Variable>(&value)) {
        return v->name;
    }
    return to_string(*this);
}

namespace {

int rank(Term const &t) {
    if (t.is_integer()) {
        return 0;
    }
    if (auto const *c = std::get_if<Constant>(&t.value)) {
        return c->quoted ? 2 : 1;
    }
    return t.is_variable() ? 3 : 4;
}

} // namespace

bool operator<(Term const &a, Term const &b) {
    int ra = rank(a);
    int rb = rank(b);
    if (ra != rb) {
        return ra < rb;
    }
    switch (ra) {
        case 0: return a.as_integer() < b.as_integer();
        case 1:
        case 2: return a.as_constant().name < b.as_constant().name;
        case 3: return a.as_variable().name < b.as_variable().name;
        default: return to_string(a) < to_string(b);
    }
}

bool needs_quotes(std::string_view name) {
    if (name.empty() || !std::islower(static_cast<unsigned char>(name.front()))) {
        return true;
    }
    if (name == "not") {
        return true;
    }
    return !std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

// {{{1 emission

namespace {

std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

template <class T, class F>
std::string join(std::vector<T> const &xs, std::string_view sep, F &&f) {
    std::string out;
    for (auto it = xs.begin(); it != xs.end(); ++it) {
        if (it != xs.begin()) {
            out += sep;
        }
        out += f(*it);
    }
    return out;
}

std::string terms(std::vector<Term> const &args) {
    return join(args, ",", [](Term const &t) { return to_string(t); });
}

std::string body(std::vector<BodyElement> const &elems, std::string_view sep) {
    return join(elems, sep, [](BodyElement const &e) { return to_string(e); });
}

} // namespace

std::string to_string(Term const &term) {
    return std::visit([](auto const &x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
            return x.quoted ? quote(x.name) : x.name;
        }
        else if constexpr (std::is_same_v<T, std::int64_t>) {
            return std::to_string(x);
        }
        else if constexpr (std::is_same_v<T, Variable>) {
            return x.name;
        }
        else {
            auto right = to_string(*x.right);
            if (std::holds_alternative<Arith>(x.right->value)) {
                right = "(" + right + ")";
            }
            return to_string(*x.left) + (x.op == ArithOp::Plus ? "+" : "-") + right;
        }
    }, term.value);
}

char const *to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Neq: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Gt: return ">";
        case CmpOp::Le: return "<=";
        case CmpOp::Ge: return ">=";
    }
    return "";
}

std::string to_string(Literal const &literal) {
    std::string out = literal.negated ? "not " : "";
    out += literal.predicate;
    if (!literal.args.empty()) {
        out += "(" + terms(literal.args) + ")";
    }
    return out;
}

std::string to_string(Comparison const &comparison) {
    return to_string(comparison.left) + " " + to_string(comparison.op) + " " + to_string(comparison.right);
}

std::string to_string(BodyElement const &element) {
    return std::visit([](auto const &x) { return to_string(x); }, element);
}

std::string to_string(Statement const &statement) {
    return std::visit([](auto const &s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Fact>) {
            if (s.pool.empty() || (s.pool.size() == 1 && s.pool.front().empty())) {
                return s.predicate + ".";
            }
            return s.predicate + "(" + join(s.pool, ";", terms) + ").";
        }
        else if constexpr (std::is_same_v<T, NormalRule>) {
            if (s.body.empty()) {
                return to_string(s.head) + ".";
            }
            return to_string(s.head) + ":-" + body(s.body, ",") + ".";
        }
        else if constexpr (std::is_same_v<T, ChoiceRule>) {
            std::string out;
            if (s.lower) {
                out += std::to_string(*s.lower);
            }
            out += "{";
            out += join(s.elements, ";", [](ChoiceElement const &e) {
                std::string x = to_string(e.atom);
                if (!e.condition.empty()) {
                    x += ":" + body(e.condition, ", ");
                }
                return x;
            });
            out += "}";
            if (s.upper) {
                out += std::to_string(*s.upper);
            }
            if (!s.body.empty()) {
                out += ":-" + body(s.body, ",");
            }
            return out + ".";
        }
        else if constexpr (std::is_same_v<T, IntegrityConstraint>) {
            return ":- " + body(s.body, ", ") + ".";
        }
        else {
            return "#show " + s.predicate + "/" + std::to_string(s.arity) + ".";
        }
    }, statement);
}

std::string emit_program(Program const &program) {
    validate(program);
    std::string out;
    for (auto const &stm : program.statements) {
        if (!std::holds_alternative<ShowDirective>(stm)) {
            out += to_string(stm) + "\n";
        }
    }
    for (auto const &stm : program.statements) {
        if (std::holds_alternative<ShowDirective>(stm)) {
            out += to_string(stm) + "\n";
        }
    }
    return out;
}

// {{{1 validation

namespace {

void collect_vars(Term const &t, std::vector<std::string> &out) {
    if (auto const *v = std::get_if<Variable>(&t.value)) {
        out.push_back(v->name);
    }
    else if (auto const *a = std::get_if<Arith>(&t.value)) {
        collect_vars(*a->left, out);
        collect_vars(*a->right, out);
    }
}

void collect_vars(Literal const &l, std::vector<std::string> &out) {
    for (auto const &t : l.args) {
        collect_vars(t, out);
    }
}

void collect_vars(BodyElement const &e, std::vector<std::string> &out) {
    if (auto const *l = std::get_if<Literal>(&e)) {
        collect_vars(*l, out);
    }
    else {
        auto const &c = std::get<Comparison>(e);
        collect_vars(c.left, out);
        collect_vars(c.right, out);
    }
}

void collect_vars(std::vector<BodyElement> const &es, std::vector<std::string> &out) {
    for (auto const &e : es) {
        collect_vars(e, out);
    }
}

// Variables bound by positive literals whose arguments are plain variables or ground.
std::set<std::string> bound_by(std::vector<BodyElement> const &es) {
    std::set<std::string> bound;
    for (auto const &e : es) {
        if (auto const *l = std::get_if<Literal>(&e); l != nullptr && !l->negated) {
            for (auto const &t : l->args) {
                if (auto const *v = std::get_if<Variable>(&t.value)) {
                    bound.insert(v->name);
                }
            }
        }
    }
    return bound;
}

void unsafe_in(std::vector<std::string> const &vars, std::set<std::string> const &bound, std::set<std::string> &out) {
    for (auto const &v : vars) {
        if (!bound.contains(v)) {
            out.insert(v);
        }
    }
}

} // namespace

std::vector<std::string> unsafe_variables(Statement const &statement) {
    std::set<std::string> unsafe;
    std::visit([&](auto const &s) {
        using T = std::decay_t<decltype(s)>;
        std::vector<std::string> vars;
        if constexpr (std::is_same_v<T, Fact>) {
            for (auto const &tuple : s.pool) {
                for (auto const &t : tuple) {
                    collect_vars(t, vars);
                }
            }
            unsafe.insert(vars.begin(), vars.end());
        }
        else if constexpr (std::is_same_v<T, NormalRule>) {
            collect_vars(s.head, vars);
            collect_vars(s.body, vars);
            unsafe_in(vars, bound_by(s.body), unsafe);
        }
        else if constexpr (std::is_same_v<T, IntegrityConstraint>) {
            collect_vars(s.body, vars);
            unsafe_in(vars, bound_by(s.body), unsafe);
        }
        else if constexpr (std::is_same_v<T, ChoiceRule>) {
            auto global = bound_by(s.body);
            collect_vars(s.body, vars);
            unsafe_in(vars, global, unsafe);
            for (auto const &elem : s.elements) {
                auto local = bound_by(elem.condition);
                local.insert(global.begin(), global.end());
                std::vector<std::string> evars;
                collect_vars(elem.atom, evars);
                collect_vars(elem.condition, evars);
                unsafe_in(evars, local, unsafe);
            }
        }
    }, statement);
    return {unsafe.begin(), unsafe.end()};
}

std::vector<std::string> single_use_variables(Statement const &statement) {
    std::vector<std::string> vars;
    std::visit([&](auto const &s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Fact>) {
            for (auto const &tuple : s.pool) {
                for (auto const &t : tuple) {
                    collect_vars(t, vars);
                }
            }
        }
        else if constexpr (std::is_same_v<T, NormalRule>) {
            collect_vars(s.head, vars);
            collect_vars(s.body, vars);
        }
        else if constexpr (std::is_same_v<T, IntegrityConstraint>) {
            collect_vars(s.body, vars);
        }
        else if constexpr (std::is_same_v<T, ChoiceRule>) {
            collect_vars(s.body, vars);
            for (auto const &elem : s.elements) {
                collect_vars(elem.atom, vars);
                collect_vars(elem.condition, vars);
            }
        }
    }, statement);
    std::map<std::string, int> counts;
    for (auto const &v : vars) {
        ++counts[v];
    }
    std::vector<std::string> out;
    for (auto const &[name, n] : counts) {
        if (n == 1) {
            out.push_back(name);
        }
    }
    return out;
}

namespace {

class ArityChecker {
public:
    void check(std::string const &pred, std::size_t arity) {
        auto [it, inserted] = arities_.emplace(pred, arity);
        if (!inserted && it->second != arity) {
            throw AspError(AspError::Kind::ArityMismatch,
                           "predicate '" + pred + "' used with arity " + std::to_string(arity) + " and " +
                               std::to_string(it->second));
        }
    }
    void check(Literal const &l) { check(l.predicate, l.args.size()); }
    void check(std::vector<BodyElement> const &es) {
        for (auto const &e : es) {
            if (auto const *l = std::get_if<Literal>(&e)) {
                check(*l);
            }
        }
    }

private:
    std::map<std::string, std::size_t> arities_;
};

} // namespace

void validate(Program const &program) {
    ArityChecker arity;
    std::vector<ShowDirective const *> shows;
    for (auto const &stm : program.statements) {
        std::visit([&](auto const &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Fact>) {
                for (auto const &tuple : s.pool) {
                    arity.check(s.predicate, tuple.size());
                }
            }
            else if constexpr (std::is_same_v<T, NormalRule>) {
                arity.check(s.head);
                arity.check(s.body);
            }
            else if constexpr (std::is_same_v<T, ChoiceRule>) {
                for (auto const &e : s.elements) {
                    arity.check(e.atom);
                    arity.check(e.condition);
                }
                arity.check(s.body);
            }
            else if constexpr (std::is_same_v<T, IntegrityConstraint>) {
                arity.check(s.body);
            }
            else {
                shows.push_back(&s);
            }
        }, stm);
        if (auto unsafe = unsafe_variables(stm); !unsafe.empty()) {
            throw AspError(AspError::Kind::UnsafeVariable,
                           "unsafe variable '" + unsafe.front() + "' in: " + to_string(stm));
        }
    }
    if (shows.empty()) {
        throw AspError(AspError::Kind::MissingShow, "program has no #show directive");
    }
    if (shows.size() > 1) {
        throw AspError(AspError::Kind::DuplicateShow, "program has more than one #show directive");
    }
    arity.check(shows.front()->predicate, static_cast<std::size_t>(shows.front()->arity));
}

// {{{1 parsing

namespace {

enum class Tok {
    Ident, Var, String, Int, LParen, RParen, LBrace, RBrace, Comma, Semi, Colon, Dot, If, Show, Slash,
    Plus, Minus, Cmp, Not, End
};

struct Token {
    Tok type;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view text)
    : text_(text) { }

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip();
            int line = line_;
            int col = col_;
            if (pos_ >= text_.size()) {
                out.push_back({Tok::End, "", line, col});
                return out;
            }
            char c = text_[pos_];
            auto push = [&](Tok t, std::size_t n) {
                out.push_back({t, std::string(text_.substr(pos_, n)), line, col});
                advance(n);
            };
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t n = 1;
                while (pos_ + n < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_ + n])) || text_[pos_ + n] == '_')) {
                    ++n;
                }
                auto word = text_.substr(pos_, n);
                if (word == "not") {
                    push(Tok::Not, n);
                }
                else if (std::islower(static_cast<unsigned char>(c))) {
                    push(Tok::Ident, n);
                }
                else if (c == '_' && n == 1) {
                    throw AspError(AspError::Kind::Syntax, "anonymous variables are not supported", line, col);
                }
                else if (c == '_') {
                    throw AspError(AspError::Kind::Syntax, "identifiers may not begin with '_'", line, col);
                }
                else {
                    push(Tok::Var, n);
                }
            }
            else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t n = 1;
                while (pos_ + n < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + n]))) {
                    ++n;
                }
                push(Tok::Int, n);
            }
            else if (c == '"') {
                std::string value;
                advance(1);
                for (;;) {
                    if (pos_ >= text_.size() || text_[pos_] == '\n') {
                        throw AspError(AspError::Kind::Syntax, "unterminated string", line, col);
                    }
                    char d = text_[pos_];
                    if (d == '"') {
                        advance(1);
                        break;
                    }
                    if (d == '\\' && pos_ + 1 < text_.size()) {
                        char e = text_[pos_ + 1];
                        value += e == 'n' ? '\n' : e;
                        advance(2);
                        continue;
                    }
                    value += d;
                    advance(1);
                }
                out.push_back({Tok::String, value, line, col});
            }
            else if (text_.substr(pos_, 2) == ":-") {
                push(Tok::If, 2);
            }
            else if (text_.substr(pos_, 5) == "#show") {
                push(Tok::Show, 5);
            }
            else if (text_.substr(pos_, 2) == "!=" || text_.substr(pos_, 2) == "<=" || text_.substr(pos_, 2) == ">=") {
                push(Tok::Cmp, 2);
            }
            else if (c == '=' || c == '<' || c == '>') {
                push(Tok::Cmp, 1);
            }
            else {
                Tok t;
                switch (c) {
                    case '(': t = Tok::LParen; break;
                    case ')': t = Tok::RParen; break;
                    case '{': t = Tok::LBrace; break;
                    case '}': t = Tok::RBrace; break;
                    case ',': t = Tok::Comma; break;
                    case ';': t = Tok::Semi; break;
                    case ':': t = Tok::Colon; break;
                    case '.': t = Tok::Dot; break;
                    case '/': t = Tok::Slash; break;
                    case '+': t = Tok::Plus; break;
                    case '-': t = Tok::Minus; break;
                    default:
                        throw AspError(AspError::Kind::Syntax, std::string("unexpected character '") + c + "'", line, col);
                }
                push(t, 1);
            }
        }
    }

private:
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            }
            else {
                ++col_;
            }
        }
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            }
            else if (c == '%') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                    auto end = text_.find("*%", pos_ + 2);
                    advance(end == std::string_view::npos ? text_.size() - pos_ : end + 2 - pos_);
                }
                else {
                    while (pos_ < text_.size() && text_[pos_] != '\n') {
                        advance(1);
                    }
                }
            }
            else {
                return;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

CmpOp cmp_op(std::string const &text) {
    if (text == "=") return CmpOp::Eq;
    if (text == "!=") return CmpOp::Neq;
    if (text == "<") return CmpOp::Lt;
    if (text == ">") return CmpOp::Gt;
    if (text == "<=") return CmpOp::Le;
    return CmpOp::Ge;
}

class Parser {
public:
    explicit Parser(std::string_view text)
    : toks_(Lexer(text).run()) { }

    std::vector<Statement> statements() {
        std::vector<Statement> out;
        while (peek().type != Tok::End) {
            out.push_back(statement());
        }
        return out;
    }

    Term single_term() {
        auto t = term();
        expect(Tok::End, "end of input");
        return t;
    }

    Literal single_atom() {
        auto l = atom();
        expect(Tok::End, "end of input");
        return l;
    }

private:
    Token const &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token const &next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    bool accept(Tok t) {
        if (peek().type == t) {
            ++pos_;
            return true;
        }
        return false;
    }

    Token const &expect(Tok t, char const *what) {
        if (peek().type != t) {
            fail(std::string("expected ") + what);
        }
        return next();
    }

    [[noreturn]] void fail(std::string const &msg) const {
        auto const &tok = peek();
        std::string found = tok.type == Tok::End ? "end of input" : "'" + tok.text + "'";
        throw AspError(AspError::Kind::Syntax, msg + " but found " + found + " at " + std::to_string(tok.line) +
                                                   ":" + std::to_string(tok.column),
                       tok.line, tok.column);
    }

    Statement statement() {
        if (accept(Tok::If)) {
            IntegrityConstraint ic{body()};
            expect(Tok::Dot, "'.'");
            return ic;
        }
        if (accept(Tok::Show)) {
            auto name = expect(Tok::Ident, "predicate name").text;
            expect(Tok::Slash, "'/'");
            int arity = std::stoi(expect(Tok::Int, "arity").text);
            expect(Tok::Dot, "'.'");
            return ShowDirective{name, arity};
        }
        if (peek().type == Tok::LBrace || (peek().type == Tok::Int && peek(1).type == Tok::LBrace)) {
            return choice();
        }
        auto [head, pool] = head_atom();
        if (accept(Tok::If)) {
            if (pool.size() != 1) {
                fail("pooled head in rule");
            }
            NormalRule rule{Literal{head, pool.front(), false}, body()};
            expect(Tok::Dot, "'.'");
            return rule;
        }
        expect(Tok::Dot, "'.' or ':-'");
        bool ground = std::all_of(pool.begin(), pool.end(), [](auto const &tuple) {
            return std::all_of(tuple.begin(), tuple.end(), [](Term const &t) { return t.is_ground(); });
        });
        if (!ground) {
            if (pool.size() != 1) {
                fail("pooled non-ground fact");
            }
            return NormalRule{Literal{head, pool.front(), false}, {}};
        }
        return Fact{head, pool};
    }

    Statement choice() {
        ChoiceRule rule;
        if (peek().type == Tok::Int) {
            rule.lower = std::stoll(next().text);
        }
        expect(Tok::LBrace, "'{'");
        if (peek().type != Tok::RBrace) {
            for (;;) {
                ChoiceElement elem{atom(), {}};
                if (accept(Tok::Colon)) {
                    elem.condition = body();
                    rule.elements.push_back(std::move(elem));
                    if (!accept(Tok::Semi)) {
                        break;
                    }
                }
                else {
                    rule.elements.push_back(std::move(elem));
                    if (!accept(Tok::Semi) && !accept(Tok::Comma)) {
                        break;
                    }
                }
            }
        }
        expect(Tok::RBrace, "'}'");
        if (peek().type == Tok::Int) {
            rule.upper = std::stoll(next().text);
        }
        if (rule.lower && rule.upper && *rule.lower > *rule.upper) {
            fail("choice bounds with lower > upper");
        }
        if (accept(Tok::If)) {
            rule.body = body();
        }
        expect(Tok::Dot, "'.'");
        return rule;
    }

    std::pair<std::string, std::vector<std::vector<Term>>> head_atom() {
        auto name = expect(Tok::Ident, "predicate name").text;
        std::vector<std::vector<Term>> pool{{}};
        if (accept(Tok::LParen)) {
            for (;;) {
                pool.back().push_back(term());
                if (accept(Tok::Comma)) {
                    continue;
                }
                if (accept(Tok::Semi)) {
                    pool.emplace_back();
                    continue;
                }
                break;
            }
            expect(Tok::RParen, "')'");
            auto arity = pool.front().size();
            for (auto const &tuple : pool) {
                if (tuple.size() != arity) {
                    fail("pooled tuples of different arity");
                }
            }
        }
        return {name, pool};
    }

    Literal atom() {
        Literal lit;
        lit.predicate = expect(Tok::Ident, "predicate name").text;
        if (accept(Tok::LParen)) {
            lit.args.push_back(term());
            while (accept(Tok::Comma)) {
                lit.args.push_back(term());
            }
            expect(Tok::RParen, "')'");
        }
        return lit;
    }

    std::vector<BodyElement> body() {
        std::vector<BodyElement> out;
        out.push_back(body_element());
        while (accept(Tok::Comma)) {
            out.push_back(body_element());
        }
        return out;
    }

    BodyElement body_element() {
        if (accept(Tok::Not)) {
            auto lit = atom();
            lit.negated = true;
            return lit;
        }
        if (peek().type == Tok::Ident && peek(1).type != Tok::Cmp && peek(1).type != Tok::Plus &&
            peek(1).type != Tok::Minus) {
            return atom();
        }
        auto left = term();
        if (peek().type != Tok::Cmp) {
            fail("expected comparison operator");
        }
        auto op = cmp_op(next().text);
        return Comparison{std::move(left), op, term()};
    }

    Term term() {
        auto t = primary();
        for (;;) {
            if (accept(Tok::Plus)) {
                t = Term::arith(std::move(t), ArithOp::Plus, primary());
            }
            else if (accept(Tok::Minus)) {
                t = Term::arith(std::move(t), ArithOp::Minus, primary());
            }
            else {
                return t;
            }
        }
    }

    Term primary() {
        auto const &tok = peek();
        switch (tok.type) {
            case Tok::Int: return Term::integer(std::stoll(next().text));
            case Tok::Minus:
                next();
                return Term::integer(-std::stoll(expect(Tok::Int, "integer").text));
            case Tok::String: return Term::string(next().text);
            case Tok::Var: return Term::variable(next().text);
            case Tok::Ident:
                if (peek(1).type == Tok::LParen) {
                    fail("function terms are not supported");
                }
                return Term{Constant{next().text, false}};
            case Tok::LParen: {
                next();
                auto t = term();
                expect(Tok::RParen, "')'");
                return t;
            }
            default: fail("expected term");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<Statement> parse_fragment(std::string_view text) { return Parser(text).statements(); }

Program parse_program(std::string_view text) { return Program{parse_fragment(text)}; }

Term parse_term(std::string_view text) { return Parser(text).single_term(); }

Literal parse_atom(std::string_view text) { return Parser(text).single_atom(); }

} // namespace nl2asp::asp
