#pragma once

// Brute-force model enumeration used as a test oracle. Every bijection
// candidate is materialized and each integrity constraint and bodiless choice
// rule is checked by naive joins over the complete candidate. Deliberately
// shares nothing with the solver beyond the AST.

#include "nl2asp/asp.hpp"
#include "nl2asp/knowledge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace nl2asp::test::oracle {

using asp::Term;
using Tuple = std::vector<Term>;
using World = std::map<std::string, std::set<Tuple>>;
using Binding = std::map<std::string, Term>;

inline std::optional<Term> value_of(Term const &t, Binding const &b) {
    if (t.is_variable()) {
        auto it = b.find(t.as_variable().name);
        if (it == b.end()) {
            return std::nullopt;
        }
        return it->second;
    }
    if (auto const *a = std::get_if<asp::Arith>(&t.value)) {
        auto l = value_of(*a->left, b);
        auto r = value_of(*a->right, b);
        if (!l || !r || !l->is_integer() || !r->is_integer()) {
            return std::nullopt;
        }
        return Term::integer(a->op == asp::ArithOp::Plus ? l->as_integer() + r->as_integer()
                                                         : l->as_integer() - r->as_integer());
    }
    return t;
}

inline bool compare(asp::CmpOp op, Term const &a, Term const &b) {
    switch (op) {
        case asp::CmpOp::Eq: return a == b;
        case asp::CmpOp::Neq: return !(a == b);
        case asp::CmpOp::Lt: return a < b;
        case asp::CmpOp::Gt: return b < a;
        case asp::CmpOp::Le: return !(b < a);
        case asp::CmpOp::Ge: return !(a < b);
    }
    return false;
}

// Calls `yield` for each binding that satisfies `body` in `w`.
inline void join(std::vector<asp::BodyElement> const &body, World const &w, Binding const &b,
                 std::function<void(Binding const &)> const &yield) {
    std::vector<asp::Literal> pos;
    std::vector<asp::BodyElement> rest;
    for (auto const &e : body) {
        auto const *l = std::get_if<asp::Literal>(&e);
        if (l && !l->negated) {
            pos.push_back(*l);
        } else {
            rest.push_back(e);
        }
    }
    std::function<void(std::size_t, Binding const &)> go = [&](std::size_t i, Binding const &cur) {
        if (i == pos.size()) {
            for (auto const &e : rest) {
                if (auto const *l = std::get_if<asp::Literal>(&e)) {
                    Tuple args;
                    for (auto const &a : l->args) {
                        args.push_back(*value_of(a, cur));
                    }
                    auto it = w.find(l->predicate);
                    if (it != w.end() && it->second.count(args)) {
                        return;
                    }
                } else {
                    auto const &c = std::get<asp::Comparison>(e);
                    if (!compare(c.op, *value_of(c.left, cur), *value_of(c.right, cur))) {
                        return;
                    }
                }
            }
            yield(cur);
            return;
        }
        auto it = w.find(pos[i].predicate);
        if (it == w.end()) {
            return;
        }
        for (auto const &tuple : it->second) {
            if (tuple.size() != pos[i].args.size()) {
                continue;
            }
            Binding next = cur;
            bool ok = true;
            for (std::size_t k = 0; k < tuple.size() && ok; ++k) {
                auto const &arg = pos[i].args[k];
                if (arg.is_variable() && !next.count(arg.as_variable().name)) {
                    next.emplace(arg.as_variable().name, tuple[k]);
                } else {
                    auto v = value_of(arg, next);
                    ok = v && *v == tuple[k];
                }
            }
            if (ok) {
                go(i + 1, next);
            }
        }
    };
    go(0, b);
}

inline bool satisfied(asp::Statement const &st, World const &w) {
    if (auto const *ic = std::get_if<asp::IntegrityConstraint>(&st)) {
        bool violated = false;
        join(ic->body, w, {}, [&](Binding const &) { violated = true; });
        return !violated;
    }
    auto const &c = std::get<asp::ChoiceRule>(st);
    std::set<std::string> chosen;
    for (auto const &el : c.elements) {
        auto body = el.condition;
        body.insert(body.begin(), el.atom);
        join(body, w, {}, [&](Binding const &b) {
            std::string key = el.atom.predicate;
            for (auto const &a : el.atom.args) {
                key += "|" + asp::to_string(*value_of(a, b));
            }
            chosen.insert(key);
        });
    }
    auto n = static_cast<std::int64_t>(chosen.size());
    return (!c.lower || n >= *c.lower) && (!c.upper || n <= *c.upper);
}

// Rendered solution atoms of every model; the statements are the puzzle's
// constraints on top of the knowledge base's bijections.
inline std::set<std::set<std::string>> models(knowledge::KnowledgeBase const &kb,
                                              std::vector<asp::Statement> const &constraints) {
    World base;
    for (auto const &c : kb.categories()) {
        for (auto const &e : c.entities) {
            base[c.name].insert({e});
        }
    }
    for (auto const &r : kb.relational()) {
        for (auto const &[l, v] : r.pairs) {
            base[r.predicate].insert({l, v});
        }
    }
    auto const &refs = kb.reference_category().entities;
    std::vector<std::vector<Term>> perms;
    for (auto const &p : kb.pairings()) {
        auto d = kb.find_category(p.category)->entities;
        if (d.size() != refs.size()) {
            return {};
        }
        std::sort(d.begin(), d.end());
        perms.push_back(d);
    }
    std::set<std::set<std::string>> out;
    std::function<void(std::size_t, World &)> go = [&](std::size_t k, World &w) {
        if (k == perms.size()) {
            for (auto const &st : constraints) {
                if (!satisfied(st, w)) {
                    return;
                }
            }
            std::set<std::string> model;
            for (std::size_t i = 0; i < refs.size(); ++i) {
                asp::Literal sol{"solution", {refs[i]}, false};
                for (auto const &p : kb.pairings()) {
                    for (auto const &t : w[p.rule_name]) {
                        if (t[0] == refs[i]) {
                            sol.args.push_back(t[1]);
                        }
                    }
                }
                model.insert(asp::to_string(sol));
            }
            out.insert(model);
            return;
        }
        auto perm = perms[k];
        auto const &rule = kb.pairings()[k].rule_name;
        do {
            auto &rel = w[rule];
            rel.clear();
            for (std::size_t i = 0; i < refs.size(); ++i) {
                rel.insert({refs[i], perm[i]});
            }
            go(k + 1, w);
        } while (std::next_permutation(perm.begin(), perm.end()));
        w.erase(rule);
    };
    go(0, base);
    return out;
}

} // namespace nl2asp::test::oracle
