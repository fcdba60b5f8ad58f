#pragma once

// The six LLM prompt stages: template rendering, response parsing, chat
// clients, and the transcript used for offline replay.

#include "nl2asp/knowledge.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nl2asp::prompt {

class PromptError : public std::runtime_error {
public:
    enum class Kind { MissingBinding, MalformedList, SyntaxError, EmptyResponse, ReplayMiss, ClientError, Transcript };

    PromptError(Kind kind, std::string const &message, std::string stage = {}, int line = 0);

    Kind kind() const noexcept { return kind_; }
    std::string const &stage() const noexcept { return stage_; }
    int line() const noexcept { return line_; }

private:
    Kind kind_;
    std::string stage_;
    int line_;
};

char const *to_string(PromptError::Kind kind);

enum class TemplateId { Categories, Entities, Assignment, Facts, Pairings, Simplify };

inline constexpr TemplateId all_templates[] = {TemplateId::Categories, TemplateId::Entities, TemplateId::Assignment,
                                               TemplateId::Facts,      TemplateId::Pairings, TemplateId::Simplify};

char const *to_string(TemplateId id);
std::optional<TemplateId> template_from_string(std::string_view name);

std::string_view template_body(TemplateId id);
// Placeholder names without braces, in order of first appearance.
std::vector<std::string> placeholders(TemplateId id);

using Bindings = std::map<std::string, std::string>;

std::string render(TemplateId id, Bindings const &bindings);

// {{{1 response parsing

std::vector<std::string> parse_categories(std::string_view response);

struct ParsedFacts {
    std::vector<knowledge::Category> categories;
    std::vector<knowledge::RelationalFact> relational;
};

ParsedFacts parse_facts(std::string_view response);

std::vector<std::string> parse_simplified(std::string_view response);

// {{{1 transcripts and clients

// Whitespace runs collapsed to one space, ends trimmed.
std::string normalize_prompt(std::string_view prompt);
// Hex SHA-256 of the normalized prompt.
std::string prompt_hash(std::string_view prompt);

struct TranscriptEntry {
    std::string hash;
    std::string stage;
    std::string prompt;
    std::string response;
};

class Transcript {
public:
    static Transcript load(std::string const &path);

    void add(TranscriptEntry entry);
    TranscriptEntry const *find(std::string const &hash) const;
    std::vector<TranscriptEntry> const &entries() const { return entries_; }

    static void append(std::string const &path, TranscriptEntry const &entry);

private:
    std::vector<TranscriptEntry> entries_;
};

class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string send(TemplateId stage, std::string const &prompt) = 0;
};

class ReplayClient : public ChatClient {
public:
    explicit ReplayClient(Transcript transcript) : transcript_(std::move(transcript)) {}
    std::string send(TemplateId stage, std::string const &prompt) override;

private:
    Transcript transcript_;
};

// OpenAI-style chat completions. The bearer token is read from NL2ASP_API_KEY.
class HttpChatClient : public ChatClient {
public:
    HttpChatClient(std::string endpoint, std::string model, std::optional<std::string> token = std::nullopt);
    std::string send(TemplateId stage, std::string const &prompt) override;

private:
    std::string endpoint_;
    std::string model_;
    std::string token_;
};

// Forwards to another client and appends each exchange to a transcript file.
class RecordingClient : public ChatClient {
public:
    RecordingClient(ChatClient &inner, std::string path) : inner_(inner), path_(std::move(path)) {}
    std::string send(TemplateId stage, std::string const &prompt) override;

private:
    ChatClient &inner_;
    std::string path_;
};

inline constexpr char const *token_variable = "NL2ASP_API_KEY";

// {{{1 pipeline

struct StageRecord {
    TemplateId stage;
    std::string prompt;
    std::string response;
};

struct PipelineResult {
    knowledge::KnowledgeBase kb;
    std::vector<std::string> sentences;
    std::vector<StageRecord> stages;
};

struct PipelineOptions {
    std::optional<std::string> reference;
    // Stop after the pairings stage.
    bool skip_simplify = false;
};

PipelineResult run_pipeline(std::string const &description, ChatClient &client, PipelineOptions const &options = {});

// Comma-joined predicate names of the facts, as fed to the pairings and simplify prompts.
std::string predicate_list(ParsedFacts const &facts);

} // namespace nl2asp::prompt
