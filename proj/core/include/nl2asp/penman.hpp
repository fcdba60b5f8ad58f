#pragma once

// AMR graphs in PENMAN notation: parsing, canonical emission, and the
// traversal queries used by the constraint compiler.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nl2asp::amr {

class PenmanError : public std::runtime_error {
public:
    enum class Kind { UnbalancedParens, DuplicateVariable, DanglingReference, EmptyInput, Syntax };

    PenmanError(Kind kind, std::string const &message, int line = 0, int column = 0);

    Kind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    Kind kind_;
    int line_;
    int column_;
};

char const *to_string(PenmanError::Kind kind);

struct Branch {
    enum class Kind { Child, Reference, Attribute };

    std::string role;
    Kind kind = Kind::Child;
    // Node id for Child and Reference, the constant for Attribute (quotes stripped).
    std::string target;
    bool quoted = false;

    friend bool operator==(Branch const &, Branch const &) = default;
};

struct Node {
    std::string id;
    std::string instance;
    // In source order; attributes and edges interleave as written.
    std::vector<Branch> branches;

    std::optional<std::string> attribute(std::string_view role) const;
    bool has_polarity() const;

    friend bool operator==(Node const &, Node const &) = default;
};

struct Edge {
    std::string source;
    std::string role;
    std::string target;
    bool reentrant = false;

    friend bool operator==(Edge const &, Edge const &) = default;
};

bool is_inverse_role(std::string_view role);

using Metadata = std::vector<std::pair<std::string, std::string>>;

class Graph {
public:
    // Nodes must be in preorder with nodes.front() the root.
    Graph(std::vector<Node> nodes, Metadata metadata = {});

    std::string const &root() const { return nodes_.front().id; }
    Node const &node(std::string_view id) const;
    bool contains(std::string_view id) const;
    // Preorder from the root; each defined node exactly once.
    std::vector<Node> const &nodes() const { return nodes_; }
    std::vector<Edge> edges() const;
    // The defining (non-reentrant) edge into `id`; empty for the root.
    std::optional<Edge> parent_edge(std::string_view id) const;
    std::vector<std::string> children(std::string_view id) const;

    Metadata const &metadata() const { return metadata_; }
    // The `# ::snt` sentence, empty if absent.
    std::string sentence() const;

    Graph with_concept(std::string_view id, std::string instance) const;
    Graph with_attribute(std::string_view id, std::string role, std::string value, bool quoted = false) const;
    Graph without_attribute(std::string_view id, std::string_view role) const;

    friend bool operator==(Graph const &a, Graph const &b) {
        return a.nodes_ == b.nodes_ && a.metadata_ == b.metadata_;
    }

private:
    Node &mutable_node(std::string_view id);

    std::vector<Node> nodes_;
    Metadata metadata_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> parent_;
};

Graph parse_penman(std::string_view text);
// Several graphs, each optionally preceded by `# ::` metadata lines.
std::vector<Graph> parse_penman_documents(std::string_view text);

std::string emit_penman(Graph const &graph);

std::vector<std::pair<std::string, std::string>> concepts_of(Graph const &graph);

// Nodes carrying `:polarity -` together with all of their tree descendants.
std::set<std::string> polarity_scope(Graph const &graph);

} // namespace nl2asp::amr
