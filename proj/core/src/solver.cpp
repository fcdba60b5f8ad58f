#include "nl2asp/solver.hpp"

#include "nl2asp/process.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unistd.h>
#include <variant>

namespace nl2asp::solver {

SolverError::SolverError(Kind kind, std::string const &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

char const *to_string(SolverError::Kind kind) {
    using K = SolverError::Kind;
    switch (kind) {
    case K::UnsupportedStatement: return "UnsupportedStatement";
    case K::Timeout: return "Timeout";
    case K::BinaryNotFound: return "BinaryNotFound";
    case K::ClingoSyntaxError: return "ClingoSyntaxError";
    case K::ClingoFailure: return "ClingoFailure";
    }
    return "?";
}

char const *to_string(Status status) {
    switch (status) {
    case Status::Unique: return "unique";
    case Status::Multiple: return "multiple";
    case Status::Unsat: return "unsat";
    }
    return "?";
}

namespace {

using asp::BodyElement;
using asp::Literal;
using asp::Term;
using Kind = SolverError::Kind;
using Clock = std::chrono::steady_clock;

[[noreturn]] void unsupported(std::string const &what, asp::Statement const &st) {
    throw SolverError(Kind::UnsupportedStatement, what + ": " + asp::to_string(st));
}

std::optional<std::string> sole_var(Literal const &l, std::size_t arity) {
    if (l.negated || l.args.size() != arity || !l.args.front().is_variable()) {
        return std::nullopt;
    }
    return l.args.front().as_variable().name;
}

Status status_for(std::size_t n) { return n == 0 ? Status::Unsat : n == 1 ? Status::Unique : Status::Multiple; }

// {{{1 program analysis

struct Interpretation {
    ProgramShape shape;
    std::map<std::string, std::vector<Term>> domains;
    std::map<std::string, std::set<std::pair<Term, Term>>> relations;
    std::map<std::string, int> pairing_index;
    asp::NormalRule solution_rule;
    // Pairing index per solution column (-1 for the reference column).
    std::vector<int> column_pairing;
    std::vector<asp::IntegrityConstraint> constraints;
    std::vector<asp::ChoiceRule> counts;
};

struct Direction {
    std::string ref;
    std::string cat;
    bool forward = false;
    bool backward = false;
};

Interpretation interpret(asp::Program const &program) {
    Interpretation in;
    std::map<std::string, Direction> dirs;
    std::vector<std::string> order;
    std::optional<asp::NormalRule> solution;
    std::optional<asp::ShowDirective> show;

    for (auto const &st : program.statements) {
        if (auto const *f = std::get_if<asp::Fact>(&st)) {
            for (auto const &tuple : f->pool) {
                if (tuple.size() == 1) {
                    in.domains[f->predicate].push_back(tuple.front());
                } else if (tuple.size() == 2) {
                    in.relations[f->predicate].emplace(tuple[0], tuple[1]);
                } else {
                    unsupported("fact arity", st);
                }
            }
        } else if (auto const *c = std::get_if<asp::ChoiceRule>(&st)) {
            if (c->body.empty()) {
                in.counts.push_back(*c);
                continue;
            }
            if (c->lower != 1 || c->upper != 1 || c->elements.size() != 1 || c->body.size() != 1 ||
                c->elements.front().condition.size() != 1) {
                unsupported("choice rule outside the bijection fragment", st);
            }
            auto const &atom = c->elements.front().atom;
            auto const *cond = std::get_if<Literal>(&c->elements.front().condition.front());
            auto const *body = std::get_if<Literal>(&c->body.front());
            if (atom.negated || atom.args.size() != 2 || !atom.args[0].is_variable() || !atom.args[1].is_variable() ||
                !cond || !body) {
                unsupported("choice rule outside the bijection fragment", st);
            }
            auto cv = sole_var(*cond, 1);
            auto bv = sole_var(*body, 1);
            auto a0 = atom.args[0].as_variable().name;
            auto a1 = atom.args[1].as_variable().name;
            if (!cv || !bv) {
                unsupported("choice rule outside the bijection fragment", st);
            }
            auto [it, fresh] = dirs.try_emplace(atom.predicate);
            if (fresh) {
                order.push_back(atom.predicate);
            }
            auto &d = it->second;
            std::string ref, cat;
            if (*cv == a1 && *bv == a0) {
                ref = body->predicate;
                cat = cond->predicate;
                d.forward = true;
            } else if (*cv == a0 && *bv == a1) {
                ref = cond->predicate;
                cat = body->predicate;
                d.backward = true;
            } else {
                unsupported("choice rule outside the bijection fragment", st);
            }
            if ((!d.ref.empty() && d.ref != ref) || (!d.cat.empty() && d.cat != cat)) {
                unsupported("choice rules disagree on the pairing", st);
            }
            d.ref = ref;
            d.cat = cat;
        } else if (auto const *r = std::get_if<asp::NormalRule>(&st)) {
            if (solution) {
                unsupported("second normal rule", st);
            }
            solution = *r;
        } else if (auto const *ic = std::get_if<asp::IntegrityConstraint>(&st)) {
            in.constraints.push_back(*ic);
        } else if (auto const *s = std::get_if<asp::ShowDirective>(&st)) {
            show = *s;
        }
    }

    if (order.empty()) {
        throw SolverError(Kind::UnsupportedStatement, "no bijection choice rules");
    }
    for (auto const &pred : order) {
        auto const &d = dirs.at(pred);
        if (!d.forward || !d.backward) {
            throw SolverError(Kind::UnsupportedStatement, "pairing " + pred + " is constrained in one direction only");
        }
        if (in.shape.reference.empty()) {
            in.shape.reference = d.ref;
        } else if (in.shape.reference != d.ref) {
            throw SolverError(Kind::UnsupportedStatement, "pairings use different reference categories");
        }
        in.pairing_index[pred] = static_cast<int>(in.shape.pairings.size());
        in.shape.pairings.push_back({pred, d.cat, in.domains[d.cat]});
    }
    in.shape.reference_domain = in.domains[in.shape.reference];

    if (!solution || !show) {
        throw SolverError(Kind::UnsupportedStatement, "missing solution rule or #show directive");
    }
    auto const &head = solution->head;
    if (show->predicate != head.predicate || show->arity != static_cast<int>(head.args.size()) || head.args.empty()) {
        throw SolverError(Kind::UnsupportedStatement, "#show does not name the solution rule");
    }
    in.shape.show_predicate = head.predicate;
    std::map<std::string, int> var_pairing;
    std::string ref_var;
    for (auto const &b : solution->body) {
        auto const *l = std::get_if<Literal>(&b);
        if (!l || l->negated || !in.pairing_index.contains(l->predicate) || l->args.size() != 2 ||
            !l->args[0].is_variable() || !l->args[1].is_variable()) {
            unsupported("solution rule outside the fragment", *solution);
        }
        auto rv = l->args[0].as_variable().name;
        if (!ref_var.empty() && ref_var != rv) {
            unsupported("solution rule mixes reference variables", *solution);
        }
        ref_var = rv;
        var_pairing[l->args[1].as_variable().name] = in.pairing_index.at(l->predicate);
    }
    for (auto const &t : head.args) {
        if (!t.is_variable()) {
            unsupported("solution rule head", *solution);
        }
        auto const &name = t.as_variable().name;
        if (name == ref_var) {
            in.column_pairing.push_back(-1);
            in.shape.columns.push_back(in.shape.reference);
        } else if (var_pairing.contains(name)) {
            auto p = var_pairing.at(name);
            in.column_pairing.push_back(p);
            in.shape.columns.push_back(in.shape.pairings[static_cast<std::size_t>(p)].category);
        } else {
            unsupported("unbound solution variable " + name, *solution);
        }
    }
    in.solution_rule = *solution;
    return in;
}

// {{{1 grounding

struct Lit {
    int p = 0, r = 0, v = 0;
    bool neg = false;
};

struct CountGroup {
    Lit atom;
    std::vector<std::vector<Lit>> conditions;
};

struct CountConstraint {
    std::int64_t lower = 0;
    std::int64_t upper = 0;
    std::vector<CountGroup> groups;
};

using Subst = std::map<std::string, Term>;

std::optional<Term> substitute(Term const &t, Subst const &s) {
    if (t.is_variable()) {
        auto it = s.find(t.as_variable().name);
        if (it == s.end()) {
            return std::nullopt;
        }
        return it->second;
    }
    if (auto const *a = std::get_if<asp::Arith>(&t.value)) {
        auto l = substitute(*a->left, s);
        auto r = substitute(*a->right, s);
        if (!l || !r || !l->is_integer() || !r->is_integer()) {
            return std::nullopt;
        }
        return Term::integer(a->op == asp::ArithOp::Plus ? l->as_integer() + r->as_integer()
                                                         : l->as_integer() - r->as_integer());
    }
    return t;
}

void collect_vars(Term const &t, std::vector<std::string> &out) {
    if (t.is_variable()) {
        if (std::find(out.begin(), out.end(), t.as_variable().name) == out.end()) {
            out.push_back(t.as_variable().name);
        }
    } else if (auto const *a = std::get_if<asp::Arith>(&t.value)) {
        collect_vars(*a->left, out);
        collect_vars(*a->right, out);
    }
}

void collect_vars(BodyElement const &e, std::vector<std::string> &out) {
    if (auto const *l = std::get_if<Literal>(&e)) {
        for (auto const &t : l->args) {
            collect_vars(t, out);
        }
    } else {
        auto const &c = std::get<asp::Comparison>(e);
        collect_vars(c.left, out);
        collect_vars(c.right, out);
    }
}

class Grounder {
public:
    explicit Grounder(Interpretation const &in) : in_(in) {
        for (std::size_t r = 0; r < in.shape.reference_domain.size(); ++r) {
            ref_index_[in.shape.reference_domain[r]] = static_cast<int>(r);
        }
        for (auto const &p : in.shape.pairings) {
            auto &m = value_index_.emplace_back();
            for (std::size_t v = 0; v < p.domain.size(); ++v) {
                m[p.domain[v]] = static_cast<int>(v);
            }
        }
    }

    // A body element under a full substitution: a fixed truth value or a pairing literal.
    std::variant<bool, Lit> eval(BodyElement const &e, Subst const &s) const {
        if (auto const *c = std::get_if<asp::Comparison>(&e)) {
            auto l = substitute(c->left, s);
            auto r = substitute(c->right, s);
            if (!l || !r) {
                return false;
            }
            switch (c->op) {
            case asp::CmpOp::Eq: return *l == *r;
            case asp::CmpOp::Neq: return !(*l == *r);
            case asp::CmpOp::Lt: return *l < *r;
            case asp::CmpOp::Gt: return *r < *l;
            case asp::CmpOp::Le: return !(*r < *l);
            case asp::CmpOp::Ge: return !(*l < *r);
            }
            return false;
        }
        auto const &lit = std::get<Literal>(e);
        std::vector<Term> args;
        for (auto const &t : lit.args) {
            auto g = substitute(t, s);
            if (!g) {
                return lit.negated;
            }
            args.push_back(*g);
        }
        if (auto it = in_.pairing_index.find(lit.predicate); it != in_.pairing_index.end() && args.size() == 2) {
            auto const &values = value_index_[static_cast<std::size_t>(it->second)];
            auto r = ref_index_.find(args[0]);
            auto v = values.find(args[1]);
            if (r == ref_index_.end() || v == values.end()) {
                return lit.negated;
            }
            return Lit{it->second, r->second, v->second, lit.negated};
        }
        bool holds = false;
        if (args.size() == 1) {
            auto it = in_.domains.find(lit.predicate);
            holds = it != in_.domains.end() &&
                    std::find(it->second.begin(), it->second.end(), args.front()) != it->second.end();
        } else if (args.size() == 2) {
            auto it = in_.relations.find(lit.predicate);
            holds = it != in_.relations.end() && it->second.contains({args[0], args[1]});
        }
        return holds != lit.negated;
    }

    // Every substitution of the variables in `elements` over domains taken from positive literals.
    template <class F>
    void for_each_grounding(std::vector<BodyElement> const &elements, asp::Statement const &origin, F &&f) const {
        std::vector<std::string> vars;
        for (auto const &e : elements) {
            collect_vars(e, vars);
        }
        std::vector<std::vector<Term> const *> domains;
        std::vector<std::vector<Term>> owned(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            domains.push_back(domain_of(vars[i], elements, owned[i]));
            if (!domains.back()) {
                unsupported("unsafe variable " + vars[i], origin);
            }
        }
        Subst s;
        ground_rec(vars, domains, 0, s, f);
    }

    std::vector<BodyElement> unfold(std::vector<BodyElement> const &body, asp::Statement const &origin) {
        std::vector<BodyElement> out;
        for (auto const &e : body) {
            auto const *l = std::get_if<Literal>(&e);
            if (!l || l->predicate != in_.shape.show_predicate) {
                out.push_back(e);
                continue;
            }
            if (l->negated || l->args.size() != in_.column_pairing.size()) {
                unsupported("negated or malformed solution literal", origin);
            }
            std::optional<Term> ref;
            for (std::size_t i = 0; i < l->args.size(); ++i) {
                if (in_.column_pairing[i] < 0) {
                    ref = l->args[i];
                }
            }
            if (!ref) {
                unsupported("solution literal without reference column", origin);
            }
            for (std::size_t i = 0; i < l->args.size(); ++i) {
                if (auto p = in_.column_pairing[i]; p >= 0) {
                    out.emplace_back(Literal{in_.shape.pairings[static_cast<std::size_t>(p)].predicate,
                                             {*ref, l->args[i]}, false});
                }
            }
        }
        return out;
    }

private:
    std::vector<Term> const *domain_of(std::string const &var, std::vector<BodyElement> const &elements,
                                       std::vector<Term> &owned) const {
        for (auto const &e : elements) {
            auto const *l = std::get_if<Literal>(&e);
            if (!l || l->negated) {
                continue;
            }
            for (std::size_t i = 0; i < l->args.size(); ++i) {
                if (!l->args[i].is_variable() || l->args[i].as_variable().name != var) {
                    continue;
                }
                if (auto it = in_.pairing_index.find(l->predicate); it != in_.pairing_index.end()) {
                    return i == 0 ? &in_.shape.reference_domain
                                  : &in_.shape.pairings[static_cast<std::size_t>(it->second)].domain;
                }
                if (l->args.size() == 1) {
                    auto it = in_.domains.find(l->predicate);
                    if (it != in_.domains.end()) {
                        return &it->second;
                    }
                    return &owned;
                }
                if (l->args.size() == 2) {
                    if (auto it = in_.relations.find(l->predicate); it != in_.relations.end()) {
                        std::set<Term> seen;
                        for (auto const &pair : it->second) {
                            seen.insert(i == 0 ? pair.first : pair.second);
                        }
                        owned.assign(seen.begin(), seen.end());
                    }
                    return &owned;
                }
            }
        }
        return nullptr;
    }

    template <class F>
    void ground_rec(std::vector<std::string> const &vars, std::vector<std::vector<Term> const *> const &domains,
                    std::size_t i, Subst &s, F &f) const {
        if (i == vars.size()) {
            f(s);
            return;
        }
        for (auto const &t : *domains[i]) {
            s[vars[i]] = t;
            ground_rec(vars, domains, i + 1, s, f);
        }
        s.erase(vars[i]);
    }

    Interpretation const &in_;
    std::map<Term, int> ref_index_;
    std::vector<std::map<Term, int>> value_index_;
};

// {{{1 search

enum class Tri { False, True, Unknown };

class Search {
public:
    Search(Interpretation const &in, SolveOptions const &options) : in_(in), options_(options) {
        refs_ = static_cast<int>(in.shape.reference_domain.size());
        for (auto const &p : in.shape.pairings) {
            if (static_cast<int>(p.domain.size()) != refs_) {
                trivially_unsat_ = true;
            }
            assign_.emplace_back(static_cast<std::size_t>(refs_), -1);
            owner_.emplace_back(p.domain.size(), -1);
        }
        watch_.resize(in.shape.pairings.size() * static_cast<std::size_t>(refs_));
        ground();
    }

    SolveReport run() {
        auto start = Clock::now();
        deadline_ = start + options_.timeout;
        SolveReport report;
        if (!trivially_unsat_) {
            dfs(0, report);
        }
        report.stats.models = report.tables.size();
        report.stats.nodes = nodes_;
        report.stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
        report.status = status_for(report.tables.size());
        return report;
    }

private:
    void ground() {
        Grounder g(in_);
        for (auto const &ic : in_.constraints) {
            asp::Statement origin = ic;
            auto body = g.unfold(ic.body, origin);
            g.for_each_grounding(body, origin, [&](Subst const &s) {
                std::vector<Lit> lits;
                for (auto const &e : body) {
                    auto v = g.eval(e, s);
                    if (auto const *b = std::get_if<bool>(&v)) {
                        if (!*b) {
                            return;
                        }
                    } else {
                        lits.push_back(std::get<Lit>(v));
                    }
                }
                add_nogood(std::move(lits));
            });
        }
        for (auto const &c : in_.counts) {
            asp::Statement origin = c;
            CountConstraint cc{c.lower.value_or(0), c.upper.value_or(INT64_MAX), {}};
            std::map<std::tuple<int, int, int>, std::size_t> group_of;
            for (auto const &el : c.elements) {
                std::vector<BodyElement> all{el.atom};
                all.insert(all.end(), el.condition.begin(), el.condition.end());
                if (!in_.pairing_index.contains(el.atom.predicate) || el.atom.negated) {
                    unsupported("choice element is not a pairing atom", origin);
                }
                g.for_each_grounding(all, origin, [&](Subst const &s) {
                    auto head = g.eval(all.front(), s);
                    if (std::holds_alternative<bool>(head)) {
                        return;
                    }
                    std::vector<Lit> cond;
                    for (std::size_t i = 1; i < all.size(); ++i) {
                        auto v = g.eval(all[i], s);
                        if (auto const *b = std::get_if<bool>(&v)) {
                            if (!*b) {
                                return;
                            }
                        } else {
                            cond.push_back(std::get<Lit>(v));
                        }
                    }
                    auto a = std::get<Lit>(head);
                    auto key = std::make_tuple(a.p, a.r, a.v);
                    auto [it, fresh] = group_of.try_emplace(key, cc.groups.size());
                    if (fresh) {
                        cc.groups.push_back({a, {}});
                    }
                    cc.groups[it->second].conditions.push_back(std::move(cond));
                });
            }
            add_count(std::move(cc));
        }
    }

    std::size_t slot(Lit const &l) const {
        return static_cast<std::size_t>(l.p) * static_cast<std::size_t>(refs_) + static_cast<std::size_t>(l.r);
    }

    void add_nogood(std::vector<Lit> lits) {
        if (lits.empty()) {
            trivially_unsat_ = true;
            return;
        }
        auto id = nogoods_.size();
        std::set<std::size_t> slots;
        for (auto const &l : lits) {
            slots.insert(slot(l));
        }
        for (auto s : slots) {
            watch_[s].push_back(static_cast<int>(id));
        }
        nogoods_.push_back(std::move(lits));
    }

    void add_count(CountConstraint cc) {
        if (cc.groups.empty()) {
            if (cc.lower > 0) {
                trivially_unsat_ = true;
            }
            return;
        }
        auto id = counts_.size();
        std::set<std::size_t> slots;
        for (auto const &g : cc.groups) {
            slots.insert(slot(g.atom));
            for (auto const &cond : g.conditions) {
                for (auto const &l : cond) {
                    slots.insert(slot(l));
                }
            }
        }
        for (auto s : slots) {
            watch_[s].push_back(-1 - static_cast<int>(id));
        }
        counts_.push_back(std::move(cc));
    }

    Tri truth(Lit const &l) const {
        auto a = assign_[static_cast<std::size_t>(l.p)][static_cast<std::size_t>(l.r)];
        Tri atom;
        if (a >= 0) {
            atom = a == l.v ? Tri::True : Tri::False;
        } else if (owner_[static_cast<std::size_t>(l.p)][static_cast<std::size_t>(l.v)] >= 0) {
            atom = Tri::False;
        } else {
            atom = Tri::Unknown;
        }
        if (l.neg && atom != Tri::Unknown) {
            atom = atom == Tri::True ? Tri::False : Tri::True;
        }
        return atom;
    }

    Tri conjunction(std::vector<Lit> const &lits) const {
        Tri out = Tri::True;
        for (auto const &l : lits) {
            auto t = truth(l);
            if (t == Tri::False) {
                return Tri::False;
            }
            if (t == Tri::Unknown) {
                out = Tri::Unknown;
            }
        }
        return out;
    }

    bool violated(int id) const {
        if (id >= 0) {
            return conjunction(nogoods_[static_cast<std::size_t>(id)]) == Tri::True;
        }
        auto const &cc = counts_[static_cast<std::size_t>(-1 - id)];
        std::int64_t known = 0, possible = 0;
        for (auto const &g : cc.groups) {
            auto head = truth(g.atom);
            if (head == Tri::False) {
                continue;
            }
            Tri cond = Tri::False;
            for (auto const &c : g.conditions) {
                auto t = conjunction(c);
                if (t == Tri::True) {
                    cond = Tri::True;
                    break;
                }
                if (t == Tri::Unknown) {
                    cond = Tri::Unknown;
                }
            }
            if (cond == Tri::False) {
                continue;
            }
            ++possible;
            if (head == Tri::True && cond == Tri::True) {
                ++known;
            }
        }
        return known > cc.upper || possible < cc.lower;
    }

    bool dfs(std::size_t depth, SolveReport &report) {
        auto total = in_.shape.pairings.size() * static_cast<std::size_t>(refs_);
        if (depth == total) {
            report.tables.push_back(table());
            return options_.max_models != 0 && report.tables.size() >= options_.max_models;
        }
        auto p = depth / static_cast<std::size_t>(refs_);
        auto r = depth % static_cast<std::size_t>(refs_);
        for (std::size_t v = 0; v < owner_[p].size(); ++v) {
            if (owner_[p][v] >= 0) {
                continue;
            }
            if ((++nodes_ & 1023) == 0 && Clock::now() > deadline_) {
                throw SolverError(Kind::Timeout, "internal solver exceeded " +
                                                     std::to_string(options_.timeout.count()) + " ms");
            }
            assign_[p][r] = static_cast<int>(v);
            owner_[p][v] = static_cast<int>(r);
            bool ok = std::none_of(watch_[depth].begin(), watch_[depth].end(), [&](int id) { return violated(id); });
            bool stop = ok && dfs(depth + 1, report);
            assign_[p][r] = -1;
            owner_[p][v] = -1;
            if (stop) {
                return true;
            }
        }
        return false;
    }

    SolutionTable table() const {
        SolutionTable t;
        t.columns = in_.shape.columns;
        for (int r = 0; r < refs_; ++r) {
            Row row;
            for (auto p : in_.column_pairing) {
                if (p < 0) {
                    row.push_back(in_.shape.reference_domain[static_cast<std::size_t>(r)]);
                } else {
                    auto v = assign_[static_cast<std::size_t>(p)][static_cast<std::size_t>(r)];
                    row.push_back(in_.shape.pairings[static_cast<std::size_t>(p)].domain[static_cast<std::size_t>(v)]);
                }
            }
            t.rows.insert(std::move(row));
        }
        t.complete = t.rows.size() == static_cast<std::size_t>(refs_);
        return t;
    }

    Interpretation const &in_;
    SolveOptions options_;
    int refs_ = 0;
    bool trivially_unsat_ = false;
    std::vector<std::vector<int>> assign_;
    std::vector<std::vector<int>> owner_;
    std::vector<std::vector<Lit>> nogoods_;
    std::vector<CountConstraint> counts_;
    // Constraint ids per slot: nogoods as i, counts as -1-i.
    std::vector<std::vector<int>> watch_;
    std::size_t nodes_ = 0;
    Clock::time_point deadline_;
};

std::string render_row(Row const &row) {
    std::string out = "(";
    for (std::size_t i = 0; i < row.size(); ++i) {
        out += (i ? "," : "") + asp::to_string(row[i]);
    }
    return out + ")";
}

std::string canonical(SolutionTable const &t, std::vector<std::string> const &columns) {
    std::string out;
    for (auto const &row : reorder(t, columns)) {
        out += render_row(row);
    }
    return out;
}

} // namespace

// {{{1 public interface

ProgramShape program_shape(asp::Program const &program) { return interpret(program).shape; }

SolveReport solve_internal(asp::Program const &program, SolveOptions const &options) {
    auto in = interpret(program);
    return Search(in, options).run();
}

bool clingo_available(std::string const &binary) { return find_executable(binary).has_value(); }

SolveReport solve_clingo(asp::Program const &program, ClingoOptions const &options) {
    return solve_clingo_text(asp::emit_program(program), options);
}

SolveReport solve_clingo_text(std::string const &text, ClingoOptions const &options) {
    namespace fs = std::filesystem;
    if (!find_executable(options.binary)) {
        throw SolverError(Kind::BinaryNotFound, "clingo executable `" + options.binary + "` not found");
    }
    std::string show = "solution";
    std::vector<std::string> columns;
    try {
        auto program = asp::parse_program(text);
        for (auto const &st : program.statements) {
            if (auto const *s = std::get_if<asp::ShowDirective>(&st)) {
                show = s->predicate;
            }
        }
        columns = program_shape(program).columns;
    } catch (std::exception const &) {
        // Outside the fragment: clingo still runs; columns stay positional.
    }

    auto path = (fs::temp_directory_path() / "nl2asp-XXXXXX.lp").string();
    int fd = ::mkstemps(path.data(), 3);
    if (fd < 0) {
        throw SolverError(Kind::ClingoFailure, "cannot create temporary program file");
    }
    ::close(fd);
    {
        std::ofstream out(path, std::ios::binary);
        out << text;
    }
    auto start = Clock::now();
    ProcessResult res;
    try {
        res = run_process({options.binary, path, "0", "--outf=2"}, {}, options.timeout);
    } catch (ProcessError const &e) {
        fs::remove(path);
        throw SolverError(Kind::ClingoFailure, e.what());
    }
    fs::remove(path);
    if (res.timed_out) {
        throw SolverError(Kind::Timeout, "clingo exceeded " + std::to_string(options.timeout.count()) + " ms");
    }
    if ((res.exit_code & 65) == 65 || (res.exit_code != 10 && res.exit_code != 20 && res.exit_code != 30)) {
        throw SolverError(Kind::ClingoSyntaxError, res.err.empty() ? "clingo exit code " +
                                                                         std::to_string(res.exit_code)
                                                                   : res.err);
    }

    SolveReport report;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(res.out);
    } catch (nlohmann::json::exception const &e) {
        throw SolverError(Kind::ClingoFailure, std::string("unreadable clingo output: ") + e.what());
    }
    for (auto const &call : doc.value("Call", nlohmann::json::array())) {
        for (auto const &w : call.value("Witnesses", nlohmann::json::array())) {
            SolutionTable t;
            for (auto const &v : w.value("Value", nlohmann::json::array())) {
                auto atom = asp::parse_atom(v.get<std::string>());
                if (atom.predicate != show) {
                    continue;
                }
                if (columns.empty()) {
                    for (std::size_t i = 0; i < atom.args.size(); ++i) {
                        columns.push_back("c" + std::to_string(i + 1));
                    }
                }
                t.rows.insert(atom.args);
            }
            t.columns = columns;
            report.tables.push_back(std::move(t));
        }
    }
    std::set<Term> refs;
    for (auto &t : report.tables) {
        refs.clear();
        for (auto const &row : t.rows) {
            refs.insert(row.front());
        }
        t.complete = !t.rows.empty() && refs.size() == t.rows.size();
    }
    report.status = status_for(report.tables.size());
    report.stats.models = report.tables.size();
    report.stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
    return report;
}

std::set<Row> reorder(SolutionTable const &table, std::vector<std::string> const &columns) {
    if (columns.size() != table.columns.size()) {
        throw std::invalid_argument("column count mismatch");
    }
    std::vector<std::size_t> from;
    for (auto const &c : columns) {
        auto it = std::find(table.columns.begin(), table.columns.end(), c);
        if (it == table.columns.end()) {
            throw std::invalid_argument("no column " + c);
        }
        from.push_back(static_cast<std::size_t>(it - table.columns.begin()));
    }
    std::set<Row> out;
    for (auto const &row : table.rows) {
        Row r;
        for (auto i : from) {
            r.push_back(row.at(i));
        }
        out.insert(std::move(r));
    }
    return out;
}

Comparison compare(SolveReport const &a, SolveReport const &b) {
    std::vector<std::string> columns;
    if (!a.tables.empty()) {
        columns = a.tables.front().columns;
    } else if (!b.tables.empty()) {
        columns = b.tables.front().columns;
    }
    std::multiset<std::string> sa, sb;
    for (auto const &t : a.tables) {
        sa.insert(canonical(t, columns));
    }
    for (auto const &t : b.tables) {
        try {
            sb.insert(canonical(t, columns));
        } catch (std::invalid_argument const &) {
            sb.insert("[columns " + std::to_string(t.columns.size()) + "] " + canonical(t, t.columns));
        }
    }
    Comparison out;
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out.only_a));
    std::set_difference(sb.begin(), sb.end(), sa.begin(), sa.end(), std::back_inserter(out.only_b));
    out.agree = out.only_a.empty() && out.only_b.empty();
    return out;
}

std::string Comparison::diff() const {
    std::ostringstream out;
    for (auto const &s : only_a) {
        out << "- " << s << "\n";
    }
    for (auto const &s : only_b) {
        out << "+ " << s << "\n";
    }
    return out.str();
}

bool is_bijective(SolutionTable const &table, ProgramShape const &shape) {
    auto domain_of = [&](std::string const &cat) -> std::vector<Term> const * {
        if (cat == shape.reference) {
            return &shape.reference_domain;
        }
        for (auto const &p : shape.pairings) {
            if (p.category == cat) {
                return &p.domain;
            }
        }
        return nullptr;
    };
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        auto const *domain = domain_of(table.columns[c]);
        if (!domain || table.rows.size() != domain->size()) {
            return false;
        }
        std::multiset<Term> seen;
        for (auto const &row : table.rows) {
            if (row.size() != table.columns.size()) {
                return false;
            }
            seen.insert(row[c]);
        }
        if (seen != std::multiset<Term>(domain->begin(), domain->end())) {
            return false;
        }
    }
    return true;
}

std::string format_table(SolutionTable const &table) {
    std::ostringstream out;
    out << "%";
    for (auto const &c : table.columns) {
        out << " " << c;
    }
    out << "\n";
    for (auto const &row : table.rows) {
        out << "solution" << render_row(row) << "\n";
    }
    return out.str();
}

std::string format_report(SolveReport const &report) {
    std::ostringstream out;
    out << "status: " << to_string(report.status) << " (" << report.tables.size() << " model"
        << (report.tables.size() == 1 ? "" : "s") << ")\n";
    for (std::size_t i = 0; i < report.tables.size(); ++i) {
        out << "Answer: " << i + 1 << "\n" << format_table(report.tables[i]);
    }
    return out.str();
}

} // namespace nl2asp::solver
