#include "chiraag/llm_gateway.hpp"

#include "chiraag/errors.hpp"
#include "chiraag/util.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <regex>
#include <thread>

using nlohmann::json;

namespace chiraag {

const char* to_string(PromptPurpose purpose) {
    return purpose == PromptPurpose::Generate ? "generate" : "repair";
}

void ConversationHistory::append(Prompt prompt, ProviderResponse response) {
    turns.emplace_back(std::move(prompt), std::move(response));
}

std::uint32_t ConversationHistory::next_iteration() const {
    return turns.empty() ? 0 : turns.back().first.iteration + 1;
}

// ---------------------------------------------------------------------------
// Templates

namespace {

void check_placeholders(const std::string& text, const std::vector<std::string>& allowed,
                        const std::string& path) {
    static const std::regex placeholder_re(R"(\{\{([A-Za-z0-9_]*)\}\})");
    auto begin = std::sregex_iterator(text.begin(), text.end(), placeholder_re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const std::string name = (*it)[1].str();
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            throw ConfigError("prompt template " + path + ": unknown placeholder {{" + name +
                              "}}");
        }
    }
}

std::string substitute(std::string text, const std::string& placeholder,
                       const std::string& value) {
    const std::string token = "{{" + placeholder + "}}";
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

} // namespace

PromptTemplates PromptTemplates::load(const std::string& system_path,
                                      const std::string& generate_path,
                                      const std::string& repair_path,
                                      const std::string& format_repair_path) {
    PromptTemplates t;
    t.system_preamble = read_file(system_path);
    t.generate_template = read_file(generate_path);
    t.repair_template = read_file(repair_path);
    t.format_repair_template = read_file(format_repair_path);
    check_placeholders(t.system_preamble, {}, system_path);
    check_placeholders(t.generate_template, {"spec"}, generate_path);
    check_placeholders(t.repair_template, {"failing_assertions", "feedback"}, repair_path);
    check_placeholders(t.format_repair_template, {"feedback"}, format_repair_path);
    return t;
}

// ---------------------------------------------------------------------------
// Prompt builders

Prompt build_generation_prompt(const FormattedSpec& spec, const PromptTemplates& templates) {
    Prompt p;
    p.system_preamble = templates.system_preamble;
    p.user_message = substitute(templates.generate_template, "spec", serialize_spec(spec));
    p.purpose = PromptPurpose::Generate;
    p.iteration = 0;
    return p;
}

std::vector<const Assertion*> select_failing(const AssertionSuite& suite,
                                             const TriageVerdict& feedback) {
    std::set<std::string> named;
    std::set<std::string> signals;
    for (const LogMessage& m : feedback.messages) {
        if (m.assertion_name) named.insert(*m.assertion_name);
        if (m.signal) signals.insert(*m.signal);
    }

    std::vector<const Assertion*> failing;
    if (!named.empty()) {
        for (const Assertion& a : suite.assertions) {
            if (named.count(a.name)) failing.push_back(&a);
        }
        if (!failing.empty()) return failing;
    }
    if (feedback.kind == TriageVerdict::Kind::SimulationFailure &&
        feedback.failure_kind == TriageVerdict::FailureKind::MissingSignal &&
        !signals.empty()) {
        for (const Assertion& a : suite.assertions) {
            if (!a.ast) continue;
            const std::set<std::string> referenced = extract_signals(*a.ast);
            const bool hit = std::any_of(signals.begin(), signals.end(),
                                         [&](const std::string& s) {
                                             return referenced.count(s) > 0;
                                         });
            if (hit) failing.push_back(&a);
        }
        if (!failing.empty()) return failing;
    }
    for (const Assertion& a : suite.assertions) failing.push_back(&a);
    return failing;
}

Prompt build_repair_prompt(const AssertionSuite& suite, const TriageVerdict& feedback,
                           const ConversationHistory& history,
                           const PromptTemplates& templates, std::size_t feedback_max_lines) {
    if (feedback.kind != TriageVerdict::Kind::SyntaxError &&
        feedback.kind != TriageVerdict::Kind::SimulationFailure) {
        throw InvalidFeedbackKind(std::string("repair prompts cannot be built for ") +
                                  to_string(feedback.kind) + " verdicts");
    }

    std::string failing_text;
    for (const Assertion* a : select_failing(suite, feedback)) {
        if (!failing_text.empty()) failing_text += "\n\n";
        failing_text += a->source_text;
    }

    Prompt p;
    p.system_preamble = templates.system_preamble;
    p.user_message = substitute(templates.repair_template, "failing_assertions", failing_text);
    p.user_message =
        substitute(p.user_message, "feedback", feedback_excerpt(feedback, feedback_max_lines));
    p.purpose = PromptPurpose::Repair;
    p.iteration = history.next_iteration();
    return p;
}

Prompt build_format_repair_prompt(const ExtractionFailure& failure, PromptPurpose purpose,
                                  std::uint32_t iteration, const PromptTemplates& templates) {
    std::string feedback = failure.reason;
    if (!failure.offending_text.empty()) {
        feedback += "\n";
        feedback += failure.offending_text;
    }
    Prompt p;
    p.system_preamble = templates.system_preamble;
    p.user_message = substitute(templates.format_repair_template, "feedback", feedback);
    p.purpose = purpose;
    p.iteration = iteration;
    return p;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

bool is_fence_line(const std::string& line, std::string* info = nullptr) {
    const std::string t = trim(line);
    if (t.rfind("```", 0) != 0) return false;
    if (info) *info = trim(t.substr(3));
    return true;
}

// Splits one fence's contents at `assert property (...);` boundaries.
std::vector<std::string> split_blocks(const std::string& fence, std::string* residual) {
    static const std::regex assert_re(R"(assert\s+property\s*\([^)]*\)\s*;)");
    std::vector<std::string> blocks;
    std::size_t pos = 0;
    auto begin = std::sregex_iterator(fence.begin(), fence.end(), assert_re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const std::size_t end = static_cast<std::size_t>(it->position() + it->length());
        blocks.push_back(fence.substr(pos, end - pos));
        pos = end;
    }
    *residual = fence.substr(pos);
    return blocks;
}

bool mentions_property(const std::string& text) {
    static const std::regex property_re(R"(\bproperty\b)");
    return std::regex_search(text, property_re);
}

} // namespace

AssertionSuite extract_assertions(const ProviderResponse& response,
                                  const std::string& design_name, AssertionOrigin origin) {
    std::vector<std::string> fences;
    {
        std::string current;
        bool inside = false;
        for (const std::string& line : split_lines(response.text)) {
            if (is_fence_line(line)) {
                if (inside) {
                    fences.push_back(current);
                    current.clear();
                    inside = false;
                } else {
                    inside = true;
                }
                continue;
            }
            if (inside) {
                current += line;
                current += "\n";
            }
        }
        // a truncated response may leave the last fence unterminated
        if (inside && !trim(current).empty()) fences.push_back(current);
    }
    if (fences.empty()) {
        throw ExtractionFailure("no code fence found", "");
    }

    static const std::regex name_re(R"(property\s+([A-Za-z_][A-Za-z0-9_]*))");
    AssertionSuite suite;
    suite.design_name = design_name;

    for (const std::string& fence : fences) {
        std::string residual;
        std::vector<std::string> blocks = split_blocks(fence, &residual);
        if (mentions_property(residual)) {
            throw ExtractionFailure("unsplittable block (property without a matching "
                                    "endproperty/assert pair)",
                                    trim(residual));
        }
        for (const std::string& raw_block : blocks) {
            Assertion a;
            a.origin = origin;

            // peel leading comment/blank lines; the first comment is kept
            std::vector<std::string> lines = split_lines(raw_block);
            std::size_t start = 0;
            while (start < lines.size()) {
                const std::string t = trim(lines[start]);
                if (t.empty()) {
                    ++start;
                } else if (t.rfind("//", 0) == 0) {
                    if (!a.comment) a.comment = trim(t.substr(2));
                    ++start;
                } else {
                    break;
                }
            }
            std::string source;
            for (std::size_t i = start; i < lines.size(); ++i) {
                if (i > start) source += "\n";
                source += lines[i];
            }
            source = trim(source);
            if (source.empty()) continue;

            ParseResult result = parse_assertion(source);
            if (auto* ast = std::get_if<PropertyAst>(&result)) {
                a.name = ast->name;
                a.ast = std::move(*ast);
            } else {
                std::smatch m;
                if (!std::regex_search(source, m, name_re)) {
                    throw ExtractionFailure("block has no property declaration", source);
                }
                a.name = m[1].str();
            }
            a.source_text = std::move(source);
            suite.assertions.push_back(std::move(a));
        }
    }
    if (suite.assertions.empty()) {
        throw ExtractionFailure("no assertion blocks found", "");
    }
    return suite;
}

// ---------------------------------------------------------------------------
// Providers

namespace {

std::chrono::milliseconds measure_since(std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count();
    return std::chrono::milliseconds((micros + 999) / 1000);
}

} // namespace

RemoteProvider::RemoteProvider(RemoteProviderConfig config) : config_(std::move(config)) {
    static const std::regex url_re(R"(^(https?)://([^/:]+)(?::([0-9]+))?(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(config_.endpoint, m, url_re)) {
        throw ConfigError("provider.endpoint is not a valid http(s) URL: " + config_.endpoint);
    }
    if (m[1].str() == "https") {
        throw ConfigError("https endpoints are not supported by this build; terminate TLS "
                          "with a local proxy and use an http endpoint");
    }
    host_ = m[2].str();
    port_ = m[3].matched ? std::stoi(m[3].str()) : 80;
    path_ = m[4].matched ? m[4].str() : "/";
}

std::string RemoteProvider::id() const { return "remote:" + config_.model; }

ProviderResponse RemoteProvider::complete(const Prompt& prompt) {
    json body = {
        {"model", config_.model},
        {"temperature", config_.temperature},
        {"messages",
         json::array({json{{"role", "system"}, {"content", prompt.system_preamble}},
                      json{{"role", "user"}, {"content", prompt.user_message}}})},
    };

    httplib::Headers headers;
    if (const char* key = std::getenv("CHIRAAG_API_KEY"); key != nullptr && *key != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    const auto start = std::chrono::steady_clock::now();
    httplib::Error last_error = httplib::Error::Success;
    for (int attempt = 0; attempt <= config_.max_transport_retries; ++attempt) {
        httplib::Client client(host_, port_);
        const auto secs =
            std::max<long>(1, static_cast<long>(config_.timeout.count() / 1000));
        client.set_connection_timeout(secs, 0);
        client.set_read_timeout(secs, 0);
        client.set_write_timeout(secs, 0);

        httplib::Result result =
            client.Post(path_, headers, body.dump(), "application/json");
        if (!result) {
            last_error = result.error();
            if (attempt < config_.max_transport_retries) {
                std::this_thread::sleep_for(std::chrono::milliseconds(50 * (attempt + 1)));
                continue;
            }
            break;
        }
        if (result->status != 200) {
            std::string excerpt = result->body.substr(0, 200);
            throw ProviderRejected(result->status, excerpt);
        }
        json parsed = json::parse(result->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") ||
            !parsed["choices"].is_array() || parsed["choices"].empty()) {
            throw ProviderRejected(result->status,
                                   std::string("unparseable completion body: ") +
                                       result->body.substr(0, 160));
        }
        const json& choice = parsed["choices"][0];
        std::string text;
        if (choice.contains("message") && choice["message"].contains("content") &&
            choice["message"]["content"].is_string()) {
            text = choice["message"]["content"].get<std::string>();
        } else if (choice.contains("text") && choice["text"].is_string()) {
            text = choice["text"].get<std::string>();
        } else {
            throw ProviderRejected(result->status, "completion body has no message content");
        }

        ProviderResponse resp;
        resp.text = std::move(text);
        resp.provider_id = id();
        resp.latency = measure_since(start);
        return resp;
    }
    throw ProviderTimeout("provider transport failure after " +
                          std::to_string(config_.max_transport_retries + 1) + " attempt(s): " +
                          httplib::to_string(last_error));
}

ReplayProvider::ReplayProvider(const std::string& transcript_path) : origin_(transcript_path) {
    json j;
    try {
        j = json::parse(read_file(transcript_path));
    } catch (const json::parse_error& e) {
        throw ConfigError("transcript " + transcript_path + ": " + e.what());
    }
    if (!j.is_array()) {
        throw ConfigError("transcript " + transcript_path + ": expected an array of entries");
    }
    for (const json& je : j) {
        if (!je.is_object() || !je.contains("purpose") || !je.contains("text") ||
            !je.at("purpose").is_string() || !je.at("text").is_string()) {
            throw ConfigError("transcript " + transcript_path +
                              ": entries need string fields 'purpose' and 'text'");
        }
        const std::string purpose = je.at("purpose").get<std::string>();
        Entry entry;
        if (purpose == "generate") {
            entry.purpose = PromptPurpose::Generate;
        } else if (purpose == "repair") {
            entry.purpose = PromptPurpose::Repair;
        } else {
            throw ConfigError("transcript " + transcript_path + ": unknown purpose '" +
                              purpose + "'");
        }
        entry.text = je.at("text").get<std::string>();
        entries_.push_back(std::move(entry));
    }
}

std::string ReplayProvider::id() const { return "replay"; }

ProviderResponse ReplayProvider::complete(const Prompt& prompt) {
    if (cursor_ >= entries_.size()) {
        throw TranscriptExhausted(entries_.size());
    }
    const Entry& entry = entries_[cursor_];
    if (entry.purpose != prompt.purpose) {
        throw ConfigError("transcript " + origin_ + ": entry " + std::to_string(cursor_ + 1) +
                          " has purpose '" + to_string(entry.purpose) + "' but the prompt is '" +
                          to_string(prompt.purpose) + "'");
    }
    ++cursor_;
    ProviderResponse resp;
    resp.text = entry.text;
    resp.provider_id = id();
    resp.latency = std::chrono::milliseconds(0);
    return resp;
}

} // namespace chiraag
