#include "nl2asp/prompt.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

namespace nl2asp::prompt {

PromptError::PromptError(Kind kind, std::string const &message, std::string stage, int line)
    : std::runtime_error(std::string(to_string(kind)) + (stage.empty() ? "" : " [" + stage + "]") + ": " + message),
      kind_(kind), stage_(std::move(stage)), line_(line) {}

char const *to_string(PromptError::Kind kind) {
    using K = PromptError::Kind;
    switch (kind) {
    case K::MissingBinding: return "MissingBinding";
    case K::MalformedList: return "MalformedList";
    case K::SyntaxError: return "SyntaxError";
    case K::EmptyResponse: return "EmptyResponse";
    case K::ReplayMiss: return "ReplayMiss";
    case K::ClientError: return "ClientError";
    case K::Transcript: return "Transcript";
    }
    return "?";
}

namespace {

using K = PromptError::Kind;

constexpr char const *categories_template = R"tpl(List each specific category of entities in this logic puzzle is asking to be determined, both implicitly and explicitly. Respond with only the list of categories and nothing else. Format the list in one line separated by commas. If multiple words are required to describe the category, separate them by underscores. Use only lowercase and alphanumeric characters. If a category in your list has a singular form, use the singular form. Take your time and double-check your answer. Use a value of 0 for the temperature.
Problem description: {problem description})tpl";

constexpr char const *entities_template = R"tpl(List all the entities in this logic puzzle. Respond with only the list of entities and nothing else. Format the list in one line separated by commas. If multiple words are required to describe the entity, separate them by underscores. Use only lowercase and alphanumeric characters. Take your time and double-check your answer. Use a value of 0 for the temperature.
Problem description: {problem description})tpl";

constexpr char const *assignment_template = R"tpl(Given the following categories and entities:
- Categories: {categories from prompt1}
- Entities: {entities from prompt2}
Assign entities to each category to which they belong. Entities may belong to more than one category. Format the list of entities that belong to a certain category as follows:
category: entity_1, entity_2, …, entity_N
In the response, start a new line for each list of entities in a category. The response should only include the lists, and nothing else. Take your time and double-check your answer. Use a value of 0 for the temperature.
Problem description: {problem description})tpl";

constexpr char const *facts_template = R"tpl(Given the following lists of entities assigned to a certain category:
{response from prompt 3}
In terms of Answer Set Programming code, represent each list of entities assigned to a category as an ASP fact in the following format:
category("entitiy_1";"entitiy_2";...;"entitiy_N").
Start a new line after each ASP fact. Respond with only ASP facts and nothing else. If an entity is numeral or ordinal, represent it in numeral format without quotation marks. If a predicate (category), P1 is inherently an attribute of another predicate, P2, format a fact in the following format:
P1_of("constant_1, "constant_2").
Do not try to solve the logic puzzle. Take your time and double-check your answer. Use a temperature of 0.
Problem description: {problem description})tpl";

constexpr char const *pairings_template = R"tpl(Given predicates: {predicates extracted}
In the following prompt, which of the given predicates has a one-to-one pairing? Format the list in one line separated by commas. Use only lowercase and alphanumeric characters. Take your time and double-check your answer. Use a temperature of 0:
{problem description})tpl";

constexpr char const *simplify_template = R"tpl(Create a series of constraints from the following text. Never list constant/category relations as constraints. Never include irrelevant information (instructions, background, etc.). Output on separate lines; never use list format. Use these keywords throughout for consistent language: {extracted predicates}.
{problem description})tpl";

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> out;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

bool is_fence(std::string const &line) { return trim(line).starts_with("```"); }

} // namespace

char const *to_string(TemplateId id) {
    switch (id) {
    case TemplateId::Categories: return "categories";
    case TemplateId::Entities: return "entities";
    case TemplateId::Assignment: return "assignment";
    case TemplateId::Facts: return "facts";
    case TemplateId::Pairings: return "pairings";
    case TemplateId::Simplify: return "simplify";
    }
    return "?";
}

std::optional<TemplateId> template_from_string(std::string_view name) {
    for (auto id : all_templates) {
        if (name == to_string(id)) {
            return id;
        }
    }
    return std::nullopt;
}

std::string_view template_body(TemplateId id) {
    switch (id) {
    case TemplateId::Categories: return categories_template;
    case TemplateId::Entities: return entities_template;
    case TemplateId::Assignment: return assignment_template;
    case TemplateId::Facts: return facts_template;
    case TemplateId::Pairings: return pairings_template;
    case TemplateId::Simplify: return simplify_template;
    }
    return {};
}

std::vector<std::string> placeholders(TemplateId id) {
    std::vector<std::string> out;
    auto body = template_body(id);
    std::size_t pos = 0;
    while ((pos = body.find('{', pos)) != std::string_view::npos) {
        auto end = body.find('}', pos);
        auto name = std::string(body.substr(pos + 1, end - pos - 1));
        if (std::find(out.begin(), out.end(), name) == out.end()) {
            out.push_back(name);
        }
        pos = end + 1;
    }
    return out;
}

std::string render(TemplateId id, Bindings const &bindings) {
    auto body = template_body(id);
    std::string out;
    std::size_t pos = 0;
    while (true) {
        auto open = body.find('{', pos);
        if (open == std::string_view::npos) {
            out.append(body.substr(pos));
            break;
        }
        out.append(body.substr(pos, open - pos));
        auto close = body.find('}', open);
        auto name = std::string(body.substr(open + 1, close - open - 1));
        auto it = bindings.find(name);
        if (it == bindings.end()) {
            throw PromptError(K::MissingBinding, "no value for {" + name + "}", to_string(id));
        }
        out += it->second;
        pos = close + 1;
    }
    return out;
}

// {{{1 parsing

std::vector<std::string> parse_categories(std::string_view response) {
    // A line ending in a comma continues the list on the next line.
    std::vector<std::string> content;
    bool continued = false;
    for (auto const &line : lines_of(response)) {
        if (trim(line).empty() || is_fence(line)) {
            continue;
        }
        if (continued) {
            content.back() += trim(line);
        } else {
            content.push_back(trim(line));
        }
        continued = content.back().ends_with(',');
    }
    if (content.empty()) {
        throw PromptError(K::EmptyResponse, "no list in response");
    }
    if (content.size() > 1) {
        throw PromptError(K::MalformedList, "expected one line, got " + std::to_string(content.size()));
    }
    std::vector<std::string> out;
    std::stringstream in(content.front());
    std::string item;
    while (std::getline(in, item, ',')) {
        auto name = trim(item);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        bool ok = !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
            return std::isalnum(c) || c == '_';
        });
        if (!ok) {
            throw PromptError(K::MalformedList, "illegal list item `" + trim(item) + "`");
        }
        out.push_back(name);
    }
    return out;
}

ParsedFacts parse_facts(std::string_view response) {
    ParsedFacts out;
    int lineno = 0;
    for (auto const &raw : lines_of(response)) {
        ++lineno;
        auto line = trim(raw);
        if (line.empty() || is_fence(line)) {
            continue;
        }
        std::vector<asp::Statement> parsed;
        try {
            parsed = asp::parse_fragment(line);
        } catch (asp::AspError const &e) {
            throw PromptError(K::SyntaxError, "line " + std::to_string(lineno) + ": " + e.what(), "facts", lineno);
        }
        if (parsed.size() != 1 || !std::holds_alternative<asp::Fact>(parsed.front())) {
            throw PromptError(K::SyntaxError, "line " + std::to_string(lineno) + ": expected one fact", "facts", lineno);
        }
        auto const &fact = std::get<asp::Fact>(parsed.front());
        auto arity = fact.pool.front().size();
        if (arity == 1) {
            knowledge::Category c{fact.predicate, {}, false};
            for (auto const &t : fact.pool) {
                c.entities.push_back(t.front());
            }
            out.categories.push_back(std::move(c));
        } else if (arity == 2 && fact.predicate.ends_with("_of")) {
            auto it = std::find_if(out.relational.begin(), out.relational.end(),
                                   [&](auto const &r) { return r.predicate == fact.predicate; });
            if (it == out.relational.end()) {
                out.relational.push_back({fact.predicate, {}});
                it = std::prev(out.relational.end());
            }
            for (auto const &t : fact.pool) {
                it->pairs.emplace_back(t[0], t[1]);
            }
        } else {
            throw PromptError(K::SyntaxError,
                              "line " + std::to_string(lineno) + ": unsupported fact shape `" + line + "`", "facts",
                              lineno);
        }
    }
    return out;
}

std::vector<std::string> parse_simplified(std::string_view response) {
    std::vector<std::string> out;
    for (auto const &line : lines_of(response)) {
        auto t = trim(line);
        if (!t.empty() && !is_fence(t)) {
            out.push_back(t);
        }
    }
    if (out.empty()) {
        throw PromptError(K::EmptyResponse, "no sentences in response", "simplify");
    }
    return out;
}

std::string predicate_list(ParsedFacts const &facts) {
    std::string out;
    for (auto const &c : facts.categories) {
        out += (out.empty() ? "" : ", ") + c.name;
    }
    for (auto const &r : facts.relational) {
        out += (out.empty() ? "" : ", ") + r.predicate;
    }
    return out;
}

// {{{1 transcripts

std::string normalize_prompt(std::string_view prompt) {
    std::string out;
    bool space = false;
    for (char c : prompt) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) {
            out += ' ';
            space = false;
        }
        out += c;
    }
    return out;
}

std::string prompt_hash(std::string_view prompt) {
    auto text = normalize_prompt(prompt);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

Transcript Transcript::load(std::string const &path) {
    std::ifstream in(path);
    if (!in) {
        throw PromptError(K::Transcript, "cannot open transcript '" + path + "'");
    }
    Transcript t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        try {
            auto j = nlohmann::json::parse(line);
            TranscriptEntry e{j.value("hash", ""), j.value("stage", ""), j.at("prompt").get<std::string>(),
                              j.at("response").get<std::string>()};
            if (e.hash.empty()) {
                e.hash = prompt_hash(e.prompt);
            }
            t.add(std::move(e));
        } catch (nlohmann::json::exception const &e) {
            throw PromptError(K::Transcript, path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return t;
}

void Transcript::add(TranscriptEntry entry) {
    for (auto &e : entries_) {
        if (e.hash == entry.hash) {
            e = std::move(entry);
            return;
        }
    }
    entries_.push_back(std::move(entry));
}

TranscriptEntry const *Transcript::find(std::string const &hash) const {
    for (auto const &e : entries_) {
        if (e.hash == hash) {
            return &e;
        }
    }
    return nullptr;
}

void Transcript::append(std::string const &path, TranscriptEntry const &entry) {
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw PromptError(K::Transcript, "cannot append to transcript '" + path + "'");
    }
    nlohmann::json j{{"hash", entry.hash}, {"stage", entry.stage}, {"prompt", entry.prompt},
                     {"response", entry.response}};
    out << j.dump() << "\n";
}

// {{{1 clients

std::string ReplayClient::send(TemplateId stage, std::string const &prompt) {
    auto const *e = transcript_.find(prompt_hash(prompt));
    if (e == nullptr) {
        throw PromptError(K::ReplayMiss, "no recorded response for this prompt", to_string(stage));
    }
    return e->response;
}

HttpChatClient::HttpChatClient(std::string endpoint, std::string model, std::optional<std::string> token)
    : endpoint_(std::move(endpoint)), model_(std::move(model)) {
    if (token) {
        token_ = *token;
    } else if (char const *env = std::getenv(token_variable)) {
        token_ = env;
    }
}

std::string HttpChatClient::send(TemplateId stage, std::string const &prompt) {
    static std::regex const url(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(endpoint_, m, url)) {
        throw PromptError(K::ClientError, "bad endpoint URL " + endpoint_, to_string(stage));
    }
    auto path = m[2].matched ? m[2].str() : std::string("/v1/chat/completions");
    httplib::Client cli(m[1].str());
    cli.set_read_timeout(300, 0);
    httplib::Headers headers;
    if (!token_.empty()) {
        headers.emplace("Authorization", "Bearer " + token_);
    }
    nlohmann::json body{{"model", model_},
                        {"temperature", 0},
                        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
    auto res = cli.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        throw PromptError(K::ClientError, "request failed: " + httplib::to_string(res.error()), to_string(stage));
    }
    if (res->status != 200) {
        throw PromptError(K::ClientError, "HTTP " + std::to_string(res->status) + ": " + res->body, to_string(stage));
    }
    try {
        auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (nlohmann::json::exception const &e) {
        throw PromptError(K::ClientError, std::string("unexpected response body: ") + e.what(), to_string(stage));
    }
}

std::string RecordingClient::send(TemplateId stage, std::string const &prompt) {
    auto response = inner_.send(stage, prompt);
    Transcript::append(path_, TranscriptEntry{prompt_hash(prompt), to_string(stage), prompt, response});
    return response;
}

// {{{1 pipeline

PipelineResult run_pipeline(std::string const &description, ChatClient &client, PipelineOptions const &options) {
    PipelineResult out;
    auto ask = [&](TemplateId id, Bindings const &b) {
        auto text = render(id, b);
        auto response = client.send(id, text);
        out.stages.push_back({id, text, response});
        return response;
    };
    auto staged = [](TemplateId id, auto &&f) {
        try {
            return f();
        } catch (PromptError const &e) {
            if (!e.stage().empty()) {
                throw;
            }
            throw PromptError(e.kind(), e.what(), to_string(id), e.line());
        }
    };

    auto categories = trim(ask(TemplateId::Categories, {{"problem description", description}}));
    staged(TemplateId::Categories, [&] { return parse_categories(categories); });
    auto entities = trim(ask(TemplateId::Entities, {{"problem description", description}}));
    staged(TemplateId::Entities, [&] { return parse_categories(entities); });
    auto assignment = trim(ask(TemplateId::Assignment, {{"categories from prompt1", categories},
                                                        {"entities from prompt2", entities},
                                                        {"problem description", description}}));
    auto facts_text =
        ask(TemplateId::Facts, {{"response from prompt 3", assignment}, {"problem description", description}});
    auto facts = staged(TemplateId::Facts, [&] { return parse_facts(facts_text); });
    auto predicates = predicate_list(facts);
    auto pairing_text =
        ask(TemplateId::Pairings, {{"predicates extracted", predicates}, {"problem description", description}});
    auto pairings = staged(TemplateId::Pairings, [&] { return parse_categories(pairing_text); });

    try {
        out.kb = knowledge::build_kb(facts.categories, facts.relational, pairings, options.reference);
    } catch (knowledge::KnowledgeError const &e) {
        throw PromptError(K::SyntaxError, e.what(), "pairings");
    }
    if (options.skip_simplify) {
        return out;
    }
    auto simplified =
        ask(TemplateId::Simplify, {{"extracted predicates", predicates}, {"problem description", description}});
    out.sentences = staged(TemplateId::Simplify, [&] { return parse_simplified(simplified); });
    return out;
}

} // namespace nl2asp::prompt
