#pragma once

#include "chiraag/errors.hpp"
#include "chiraag/log_triage.hpp"
#include "chiraag/spec_format.hpp"
#include "chiraag/sva_parse.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chiraag {

enum class PromptPurpose { Generate, Repair };

const char* to_string(PromptPurpose purpose);

struct Prompt {
    std::string system_preamble;
    std::string user_message;
    PromptPurpose purpose = PromptPurpose::Generate;
    std::uint32_t iteration = 0; // 0 iff purpose == Generate

    bool operator==(const Prompt&) const = default;
};

struct ProviderResponse {
    std::string text; // may be empty; providers can fail soft
    std::string provider_id;
    std::chrono::milliseconds latency{0};
};

// The evolving context of one pipeline run: primary turns only, iterations
// strictly increasing from 0. Format-repair retries are recorded in the
// trace, not here.
struct ConversationHistory {
    std::vector<std::pair<Prompt, ProviderResponse>> turns;

    void append(Prompt prompt, ProviderResponse response);
    std::uint32_t next_iteration() const;
};

// The prompt text shipped as data. Placeholders: {{spec}} in the generation
// template, {{failing_assertions}} and {{feedback}} in the repair templates.
// Any other {{...}} token is a startup error.
struct PromptTemplates {
    std::string system_preamble;
    std::string generate_template;
    std::string repair_template;
    std::string format_repair_template;

    static PromptTemplates load(const std::string& system_path,
                                const std::string& generate_path,
                                const std::string& repair_path,
                                const std::string& format_repair_path);
};

class CompletionProvider {
public:
    virtual ~CompletionProvider() = default;
    virtual std::string id() const = 0;
    // Blocking; may take seconds. Throws ProviderTimeout / ProviderRejected /
    // TranscriptExhausted.
    virtual ProviderResponse complete(const Prompt& prompt) = 0;
};

struct RemoteProviderConfig {
    std::string endpoint; // e.g. http://host:port/v1/chat/completions
    std::string model;
    std::chrono::milliseconds timeout{30000};
    int max_transport_retries = 2; // bounded retry on transient transport failures
    double temperature = 0.0;      // deterministic decoding by default
};

// Speaks the common HTTP chat-completion wire format. Credentials come from
// the CHIRAAG_API_KEY environment variable, never from configuration files.
class RemoteProvider : public CompletionProvider {
public:
    explicit RemoteProvider(RemoteProviderConfig config);
    std::string id() const override;
    ProviderResponse complete(const Prompt& prompt) override;

private:
    RemoteProviderConfig config_;
    std::string host_;
    int port_ = 80;
    std::string path_;
};

// Returns scripted responses from a .transcript.json file, in order. The
// cursor is owned by this instance; one instance per run.
class ReplayProvider : public CompletionProvider {
public:
    explicit ReplayProvider(const std::string& transcript_path);
    std::string id() const override;
    ProviderResponse complete(const Prompt& prompt) override;

    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        PromptPurpose purpose;
        std::string text;
    };
    std::vector<Entry> entries_;
    std::size_t cursor_ = 0;
    std::string origin_;
};

// Deterministic template substitution: the serialized spec is embedded
// verbatim. Identical specs yield byte-identical prompts.
Prompt build_generation_prompt(const FormattedSpec& spec, const PromptTemplates& templates);

// Selects the failing assertions from the suite (see select_failing), embeds
// their source plus the rendered feedback, and asks for corrected assertions
// in the same fenced format. Throws InvalidFeedbackKind for NoError or
// TestcaseFailure verdicts.
Prompt build_repair_prompt(const AssertionSuite& suite, const TriageVerdict& feedback,
                           const ConversationHistory& history,
                           const PromptTemplates& templates, std::size_t feedback_max_lines);

// One-shot retry prompt after an ExtractionFailure; same iteration as the
// repair it retries.
Prompt build_format_repair_prompt(const ExtractionFailure& failure, PromptPurpose purpose,
                                  std::uint32_t iteration, const PromptTemplates& templates);

// Which assertions a repair prompt should carry, in suite order:
// 1. assertions named by the verdict's evidence messages;
// 2. otherwise, for missing-signal verdicts, assertions referencing any of
//    the evidence signals;
// 3. otherwise the whole suite.
std::vector<const Assertion*> select_failing(const AssertionSuite& suite,
                                             const TriageVerdict& feedback);

// Pulls every fenced code block out of the response, splits the contents
// into property/assert blocks, and parses names. Throws ExtractionFailure
// when there is no fence, a block cannot be split, or no assertions remain.
AssertionSuite extract_assertions(const ProviderResponse& response,
                                  const std::string& design_name,
                                  AssertionOrigin origin);

} // namespace chiraag
