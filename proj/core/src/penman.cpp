#include "nl2asp/penman.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <regex>

namespace nl2asp::amr {

PenmanError::PenmanError(Kind kind, std::string const &message, int line, int column)
: std::runtime_error(message)
, kind_(kind)
, line_(line)
, column_(column) { }

char const *to_string(PenmanError::Kind kind) {
    switch (kind) {
        case PenmanError::Kind::UnbalancedParens: return "UnbalancedParens";
        case PenmanError::Kind::DuplicateVariable: return "DuplicateVariable";
        case PenmanError::Kind::DanglingReference: return "DanglingReference";
        case PenmanError::Kind::EmptyInput: return "EmptyInput";
        case PenmanError::Kind::Syntax: return "SyntaxError";
    }
    return "";
}

std::optional<std::string> Node::attribute(std::string_view role) const {
    for (auto const &b : branches) {
        if (b.kind == Branch::Kind::Attribute && b.role == role) {
            return b.target;
        }
    }
    return std::nullopt;
}

bool Node::has_polarity() const { return attribute(":polarity") == "-"; }

bool is_inverse_role(std::string_view role) {
    return role.size() > 3 && role.substr(role.size() - 3) == "-of" && role != ":consist-of";
}

// {{{1 Graph

Graph::Graph(std::vector<Node> nodes, Metadata metadata)
: nodes_(std::move(nodes))
, metadata_(std::move(metadata)) {
    if (nodes_.empty()) {
        throw PenmanError(PenmanError::Kind::EmptyInput, "graph has no nodes");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i].id, i).second) {
            throw PenmanError(PenmanError::Kind::DuplicateVariable, "variable '" + nodes_[i].id + "' defined twice");
        }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        auto const &branches = nodes_[i].branches;
        for (std::size_t j = 0; j < branches.size(); ++j) {
            auto const &b = branches[j];
            if (b.kind == Branch::Kind::Attribute) {
                continue;
            }
            if (!index_.contains(b.target)) {
                throw PenmanError(PenmanError::Kind::DanglingReference, "reference to undefined variable '" + b.target + "'");
            }
            if (b.kind == Branch::Kind::Child && !parent_.emplace(b.target, std::make_pair(i, j)).second) {
                throw PenmanError(PenmanError::Kind::DuplicateVariable, "variable '" + b.target + "' defined twice");
            }
        }
    }
    if (parent_.contains(root())) {
        throw PenmanError(PenmanError::Kind::Syntax, "root node has a parent");
    }
    if (parent_.size() + 1 != nodes_.size()) {
        throw PenmanError(PenmanError::Kind::Syntax, "graph nodes are not connected to the root");
    }
}

Node const &Graph::node(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        throw std::out_of_range("no AMR node '" + std::string(id) + "'");
    }
    return nodes_[it->second];
}

Node &Graph::mutable_node(std::string_view id) {
    return nodes_[index_.at(std::string(id))];
}

bool Graph::contains(std::string_view id) const { return index_.contains(std::string(id)); }

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    for (auto const &n : nodes_) {
        for (auto const &b : n.branches) {
            if (b.kind != Branch::Kind::Attribute) {
                out.push_back({n.id, b.role, b.target, b.kind == Branch::Kind::Reference});
            }
        }
    }
    return out;
}

std::optional<Edge> Graph::parent_edge(std::string_view id) const {
    auto it = parent_.find(std::string(id));
    if (it == parent_.end()) {
        return std::nullopt;
    }
    auto const &n = nodes_[it->second.first];
    auto const &b = n.branches[it->second.second];
    return Edge{n.id, b.role, b.target, false};
}

std::vector<std::string> Graph::children(std::string_view id) const {
    std::vector<std::string> out;
    for (auto const &b : node(id).branches) {
        if (b.kind == Branch::Kind::Child) {
            out.push_back(b.target);
        }
    }
    return out;
}

std::string Graph::sentence() const {
    for (auto const &[key, value] : metadata_) {
        if (key == "snt") {
            return value;
        }
    }
    return {};
}

Graph Graph::with_concept(std::string_view id, std::string instance) const {
    Graph g = *this;
    g.mutable_node(id).instance = std::move(instance);
    return g;
}

Graph Graph::with_attribute(std::string_view id, std::string role, std::string value, bool quoted) const {
    Graph g = *this;
    auto &branches = g.mutable_node(id).branches;
    auto it = std::find_if(branches.begin(), branches.end(), [&](Branch const &b) {
        return b.kind == Branch::Kind::Attribute && b.role == role;
    });
    if (it != branches.end()) {
        it->target = std::move(value);
        it->quoted = quoted;
    }
    else {
        branches.insert(branches.begin(), Branch{std::move(role), Branch::Kind::Attribute, std::move(value), quoted});
    }
    // Branch positions shifted; parent indices must be rebuilt.
    return Graph(std::move(g.nodes_), std::move(g.metadata_));
}

Graph Graph::without_attribute(std::string_view id, std::string_view role) const {
    Graph g = *this;
    std::erase_if(g.mutable_node(id).branches, [&](Branch const &b) {
        return b.kind == Branch::Kind::Attribute && b.role == role;
    });
    return Graph(std::move(g.nodes_), std::move(g.metadata_));
}

// {{{1 parsing

namespace {

enum class Tok { LParen, RParen, Slash, Role, String, Symbol, End };

struct Token {
    Tok type;
    std::string text;
    int line;
    int column;
};

struct Pending {
    std::size_t node;
    std::size_t branch;
    Token token;
};

class Parser {
public:
    explicit Parser(std::string_view text)
    : text_(text) { }

    std::vector<Graph> documents() {
        std::vector<Graph> out;
        for (;;) {
            Metadata meta;
            auto tok = lex(&meta);
            if (tok.type == Tok::End) {
                if (!meta.empty() && out.empty()) {
                    throw PenmanError(PenmanError::Kind::EmptyInput, "metadata without a graph");
                }
                break;
            }
            if (tok.type == Tok::RParen) {
                throw PenmanError(PenmanError::Kind::UnbalancedParens, "unexpected ')'", tok.line, tok.column);
            }
            if (tok.type != Tok::LParen) {
                throw PenmanError(PenmanError::Kind::Syntax, "expected '(' but found '" + tok.text + "'", tok.line,
                                  tok.column);
            }
            out.push_back(graph(std::move(meta)));
        }
        if (out.empty()) {
            throw PenmanError(PenmanError::Kind::EmptyInput, "no PENMAN graph in input");
        }
        return out;
    }

private:
    Graph graph(Metadata meta) {
        nodes_.clear();
        pending_.clear();
        defined_.clear();
        node();
        for (auto const &p : pending_) {
            auto &b = nodes_[p.node].branches[p.branch];
            if (defined_.contains(p.token.text)) {
                b.kind = Branch::Kind::Reference;
                continue;
            }
            if (looks_like_reference(b.role, p.token.text)) {
                throw PenmanError(PenmanError::Kind::DanglingReference,
                                  "role " + b.role + " refers to undefined variable '" + p.token.text + "'",
                                  p.token.line, p.token.column);
            }
            b.kind = Branch::Kind::Attribute;
        }
        for (auto const &n : nodes_) {
            if (auto pol = n.attribute(":polarity"); pol && *pol != "-") {
                throw PenmanError(PenmanError::Kind::Syntax, "polarity of '" + n.id + "' must be '-'");
            }
        }
        return Graph(std::move(nodes_), std::move(meta));
    }

    // Inverse roles and core arguments never take constants shaped like variables.
    static bool looks_like_reference(std::string const &role, std::string const &symbol) {
        static std::regex const var_shape("[a-z][0-9]*");
        if (is_inverse_role(role)) {
            return true;
        }
        return role.rfind(":ARG", 0) == 0 && std::regex_match(symbol, var_shape);
    }

    // Called after '(' has been consumed.
    void node() {
        auto var = lex();
        if (var.type != Tok::Symbol) {
            fail(var, "expected variable");
        }
        if (!defined_.insert(var.text).second) {
            throw PenmanError(PenmanError::Kind::DuplicateVariable, "variable '" + var.text + "' defined twice",
                              var.line, var.column);
        }
        auto slash = lex();
        if (slash.type != Tok::Slash) {
            fail(slash, "expected '/'");
        }
        auto instance = lex();
        if (instance.type != Tok::Symbol && instance.type != Tok::String) {
            fail(instance, "expected concept");
        }
        std::size_t self = nodes_.size();
        nodes_.push_back(Node{var.text, instance.text, {}});
        for (;;) {
            auto tok = lex();
            if (tok.type == Tok::RParen) {
                return;
            }
            if (tok.type == Tok::End) {
                throw PenmanError(PenmanError::Kind::UnbalancedParens, "missing ')' for node '" + var.text + "'",
                                  tok.line, tok.column);
            }
            if (tok.type != Tok::Role) {
                fail(tok, "expected role");
            }
            auto value = lex();
            Branch b{tok.text, Branch::Kind::Child, "", false};
            switch (value.type) {
                case Tok::LParen: {
                    auto child_index = nodes_.size();
                    node();
                    b.target = nodes_[child_index].id;
                    nodes_[self].branches.push_back(std::move(b));
                    break;
                }
                case Tok::String:
                    b.kind = Branch::Kind::Attribute;
                    b.target = value.text;
                    b.quoted = true;
                    nodes_[self].branches.push_back(std::move(b));
                    break;
                case Tok::Symbol:
                    b.target = value.text;
                    nodes_[self].branches.push_back(std::move(b));
                    pending_.push_back({self, nodes_[self].branches.size() - 1, value});
                    break;
                case Tok::End:
                    throw PenmanError(PenmanError::Kind::UnbalancedParens, "input ends after role " + tok.text,
                                      value.line, value.column);
                default: fail(value, "expected value for role " + tok.text);
            }
        }
    }

    [[noreturn]] static void fail(Token const &tok, std::string const &msg) {
        if (tok.type == Tok::End) {
            throw PenmanError(PenmanError::Kind::UnbalancedParens, msg + " but input ended", tok.line, tok.column);
        }
        throw PenmanError(PenmanError::Kind::Syntax, msg + " but found '" + tok.text + "'", tok.line, tok.column);
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        }
        else {
            ++col_;
        }
        ++pos_;
    }

    static bool delimiter(char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')'; }

    Token lex(Metadata *meta = nullptr) {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            }
            if (pos_ < text_.size() && text_[pos_] == '#') {
                auto end = text_.find('\n', pos_);
                auto line = text_.substr(pos_, end == std::string_view::npos ? std::string_view::npos : end - pos_);
                if (meta != nullptr) {
                    parse_metadata(line, *meta);
                }
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
                continue;
            }
            break;
        }
        Token tok{Tok::End, "", line_, col_};
        if (pos_ >= text_.size()) {
            return tok;
        }
        char c = text_[pos_];
        if (c == '(' || c == ')' || c == '/') {
            tok.type = c == '(' ? Tok::LParen : c == ')' ? Tok::RParen : Tok::Slash;
            tok.text = std::string(1, c);
            advance();
            return tok;
        }
        if (c == '"') {
            advance();
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                    advance();
                }
                tok.text += text_[pos_];
                advance();
            }
            if (pos_ >= text_.size()) {
                throw PenmanError(PenmanError::Kind::Syntax, "unterminated string", tok.line, tok.column);
            }
            advance();
            tok.type = Tok::String;
            return tok;
        }
        while (pos_ < text_.size() && !delimiter(text_[pos_]) && !(text_[pos_] == '/' && !tok.text.empty() && tok.text.front() != ':')) {
            tok.text += text_[pos_];
            advance();
        }
        tok.type = tok.text.front() == ':' ? Tok::Role : Tok::Symbol;
        if (tok.type == Tok::Role && tok.text.size() == 1) {
            throw PenmanError(PenmanError::Kind::Syntax, "empty role name", tok.line, tok.column);
        }
        return tok;
    }

    static void parse_metadata(std::string_view line, Metadata &meta) {
        // `# ::key value`; other comment lines are ignored.
        auto at = line.find("::");
        if (at == std::string_view::npos) {
            return;
        }
        auto rest = line.substr(at + 2);
        auto space = rest.find_first_of(" \t");
        std::string key(rest.substr(0, space));
        std::string value;
        if (space != std::string_view::npos) {
            value = std::string(rest.substr(space + 1));
            auto b = value.find_first_not_of(" \t");
            auto e = value.find_last_not_of(" \t\r");
            value = b == std::string::npos ? "" : value.substr(b, e - b + 1);
        }
        meta.emplace_back(std::move(key), std::move(value));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::vector<Node> nodes_;
    std::vector<Pending> pending_;
    std::set<std::string> defined_;
};

} // namespace

std::vector<Graph> parse_penman_documents(std::string_view text) { return Parser(text).documents(); }

Graph parse_penman(std::string_view text) {
    auto graphs = parse_penman_documents(text);
    if (graphs.size() != 1) {
        throw PenmanError(PenmanError::Kind::Syntax,
                          "expected a single graph, found " + std::to_string(graphs.size()));
    }
    return std::move(graphs.front());
}

// {{{1 emission and queries

namespace {

std::string quote(std::string const &s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

void emit_node(Graph const &g, Node const &n, int depth, std::string &out) {
    out += "(" + n.id + " / " + n.instance;
    for (auto const &b : n.branches) {
        out += "\n" + std::string(static_cast<std::size_t>(4 * (depth + 1)), ' ') + b.role + " ";
        switch (b.kind) {
            case Branch::Kind::Child: emit_node(g, g.node(b.target), depth + 1, out); break;
            case Branch::Kind::Reference: out += b.target; break;
            case Branch::Kind::Attribute: out += b.quoted ? quote(b.target) : b.target; break;
        }
    }
    out += ")";
}

} // namespace

std::string emit_penman(Graph const &graph) {
    std::string out;
    for (auto const &[key, value] : graph.metadata()) {
        out += "# ::" + key + (value.empty() ? "" : " " + value) + "\n";
    }
    emit_node(graph, graph.node(graph.root()), 0, out);
    return out + "\n";
}

std::vector<std::pair<std::string, std::string>> concepts_of(Graph const &graph) {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(graph.nodes().size());
    for (auto const &n : graph.nodes()) {
        out.emplace_back(n.id, n.instance);
    }
    return out;
}

std::set<std::string> polarity_scope(Graph const &graph) {
    std::set<std::string> scope;
    std::function<void(std::string const &)> mark = [&](std::string const &id) {
        if (!scope.insert(id).second) {
            return;
        }
        for (auto const &child : graph.children(id)) {
            mark(child);
        }
    };
    for (auto const &n : graph.nodes()) {
        if (n.has_polarity()) {
            mark(n.id);
        }
    }
    return scope;
}

} // namespace nl2asp::amr
