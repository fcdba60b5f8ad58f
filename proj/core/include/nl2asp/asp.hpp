#pragma once

// Typed AST for the ASP fragment produced by the compiler, a text emitter
// whose output is accepted by clingo, and a parser for the same fragment.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nl2asp::asp {

class AspError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnsafeVariable, MissingShow, DuplicateShow, ArityMismatch, InvalidTerm };

    AspError(Kind kind, std::string const &message, int line = 0, int column = 0);

    Kind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    Kind kind_;
    int line_;
    int column_;
};

char const *to_string(AspError::Kind kind);

// {{{1 terms

struct Term;

struct Constant {
    std::string name;
    bool quoted = false;
    friend bool operator==(Constant const &, Constant const &) = default;
};

struct Variable {
    std::string name;
    friend bool operator==(Variable const &, Variable const &) = default;
};

enum class ArithOp { Plus, Minus };

struct Arith {
    std::shared_ptr<Term const> left;
    ArithOp op = ArithOp::Plus;
    std::shared_ptr<Term const> right;
    friend bool operator==(Arith const &a, Arith const &b);
};

struct Term {
    std::variant<Constant, std::int64_t, Variable, Arith> value;

    static Term symbol(std::string name);
    static Term string(std::string text);
    static Term integer(std::int64_t value);
    static Term variable(std::string name);
    static Term arith(Term left, ArithOp op, Term right);
    // Applies the quoting rule: constants starting with an uppercase letter
    // or containing characters outside [A-Za-z0-9_] must be quoted.
    static Term constant_from_spelling(std::string text);

    bool is_integer() const { return std::holds_alternative<std::int64_t>(value); }
    bool is_variable() const { return std::holds_alternative<Variable>(value); }
    bool is_constant() const { return std::holds_alternative<Constant>(value); }
    bool is_ground() const;
    std::int64_t as_integer() const { return std::get<std::int64_t>(value); }
    Constant const &as_constant() const { return std::get<Constant>(value); }
    Variable const &as_variable() const { return std::get<Variable>(value); }

    // Spelling without quotes: the constant name, the decimal integer, or the variable name.
    std::string plain() const;

    friend bool operator==(Term const &, Term const &) = default;
    // Total order: integers < symbols < strings < variables < arithmetic.
    friend bool operator<(Term const &a, Term const &b);
};

bool needs_quotes(std::string_view name);

// {{{1 body elements and statements

struct Literal {
    std::string predicate;
    std::vector<Term> args;
    bool negated = false;
    friend bool operator==(Literal const &, Literal const &) = default;
};

enum class CmpOp { Eq, Neq, Lt, Gt, Le, Ge };

struct Comparison {
    Term left;
    CmpOp op = CmpOp::Eq;
    Term right;
    friend bool operator==(Comparison const &, Comparison const &) = default;
};

using BodyElement = std::variant<Literal, Comparison>;

struct Fact {
    std::string predicate;
    // One tuple per pooled alternative; `p(a;b).` has two tuples of arity one.
    std::vector<std::vector<Term>> pool;
    friend bool operator==(Fact const &, Fact const &) = default;
};

struct NormalRule {
    Literal head;
    std::vector<BodyElement> body;
    friend bool operator==(NormalRule const &, NormalRule const &) = default;
};

struct ChoiceElement {
    Literal atom;
    std::vector<BodyElement> condition;
    friend bool operator==(ChoiceElement const &, ChoiceElement const &) = default;
};

struct ChoiceRule {
    std::optional<std::int64_t> lower;
    std::optional<std::int64_t> upper;
    std::vector<ChoiceElement> elements;
    std::vector<BodyElement> body;
    friend bool operator==(ChoiceRule const &, ChoiceRule const &) = default;
};

struct IntegrityConstraint {
    std::vector<BodyElement> body;
    friend bool operator==(IntegrityConstraint const &, IntegrityConstraint const &) = default;
};

struct ShowDirective {
    std::string predicate;
    int arity = 0;
    friend bool operator==(ShowDirective const &, ShowDirective const &) = default;
};

using Statement = std::variant<Fact, NormalRule, ChoiceRule, IntegrityConstraint, ShowDirective>;

struct Program {
    std::vector<Statement> statements;
    friend bool operator==(Program const &, Program const &) = default;
};

// {{{1 emission

std::string to_string(Term const &term);
std::string to_string(Literal const &literal);
std::string to_string(Comparison const &comparison);
std::string to_string(BodyElement const &element);
std::string to_string(Statement const &statement);
char const *to_string(CmpOp op);

// Validates the program and renders one statement per line, directives last.
std::string emit_program(Program const &program);

// {{{1 validation

// Variables that do not occur in a positive body or condition literal.
std::vector<std::string> unsafe_variables(Statement const &statement);
// Variables that occur exactly once in the statement.
std::vector<std::string> single_use_variables(Statement const &statement);
// Throws on unsafe variables, arity clashes, or a missing/duplicate show directive.
void validate(Program const &program);

// {{{1 parsing

std::vector<Statement> parse_fragment(std::string_view text);
Program parse_program(std::string_view text);
Term parse_term(std::string_view text);
Literal parse_atom(std::string_view text);

} // namespace nl2asp::asp
