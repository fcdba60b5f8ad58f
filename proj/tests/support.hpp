#pragma once

#include "nl2asp/asp.hpp"
#include "nl2asp/knowledge.hpp"
#include "nl2asp/penman.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef NL2ASP_CORPUS_DIR
#error "NL2ASP_CORPUS_DIR must be defined"
#endif

namespace nl2asp::test {

inline std::filesystem::path corpus(std::string const &rel = {}) {
    return std::filesystem::path(NL2ASP_CORPUS_DIR) / rel;
}

inline std::filesystem::path golden(std::string const &rel = {}) {
    return std::filesystem::path(NL2ASP_GOLDEN_DIR) / rel;
}

inline std::string slurp(std::filesystem::path const &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::vector<std::string> lines_of(std::string const &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.push_back(line);
        }
    }
    return out;
}

// Drops all whitespace outside string literals.
inline std::string squash(std::string const &text) {
    std::string out;
    bool in_string = false;
    for (char c : text) {
        if (c == '"') {
            in_string = !in_string;
        }
        if (in_string || !std::isspace(static_cast<unsigned char>(c))) {
            out += c;
        }
    }
    return out;
}

inline knowledge::KnowledgeBase zoo_kb() { return knowledge::read_kb_file(corpus("zoo/kb.txt").string()); }
inline knowledge::KnowledgeBase einstein_kb() { return knowledge::read_kb_file(corpus("einstein/kb.txt").string()); }

// Graph `index` (1-based) of a puzzle's AMR directory.
inline amr::Graph fixture_graph(std::string const &puzzle, int index) {
    char name[16];
    std::snprintf(name, sizeof name, "%02d.amr", index);
    return amr::parse_penman(slurp(corpus(puzzle + "/amr/" + name)));
}

inline std::vector<std::filesystem::path> fixture_amr_files() {
    std::vector<std::filesystem::path> out;
    for (auto const &entry : std::filesystem::recursive_directory_iterator(corpus())) {
        if (entry.path().extension() == ".amr") {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace nl2asp::test
