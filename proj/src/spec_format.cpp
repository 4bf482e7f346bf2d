#include "chiraag/spec_format.hpp"

#include "chiraag/errors.hpp"
#include "chiraag/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

using nlohmann::ordered_json;

namespace chiraag {

const std::vector<std::string> kSpecLabels = {
    "introduction",
    "system_overview",
    "definitions",
    "parameters",
    "functional_requirements",
    "timing_requirements",
    "extra_info",
};

void SpecDocument::validate() const {
    if (trim(body).empty()) {
        throw EmptyDocument();
    }
    if (!is_identifier(design_name)) {
        throw ConfigError("design_name is not a valid identifier: '" + design_name + "'");
    }
}

void FormattedSpec::validate() const {
    if (functional_requirements.empty()) {
        throw MissingFunctionalRequirements();
    }
    for (const auto& r : functional_requirements) {
        if (trim(r).empty()) {
            throw SchemaError("functional_requirements", "empty requirement entry");
        }
    }
    for (const auto& r : timing_requirements) {
        if (trim(r).empty()) {
            throw SchemaError("timing_requirements", "empty requirement entry");
        }
    }
}

namespace {

bool is_underline(const std::string& line) {
    std::string t = trim(line);
    if (t.size() < 2) return false;
    char c = t[0];
    if (c != '=' && c != '-') return false;
    return std::all_of(t.begin(), t.end(), [c](char x) { return x == c; });
}

// Deduplicates normalized headings with a numeric suffix so the uniqueness
// invariant holds on documents that reuse a title.
std::string unique_heading(const std::string& base, std::set<std::string>& seen) {
    std::string h = base;
    int k = 2;
    while (seen.count(h) > 0) {
        h = base + "_" + std::to_string(k++);
    }
    seen.insert(h);
    return h;
}

} // namespace

UnformattedExtract extract(const SpecDocument& doc,
                           const std::optional<std::string>& heading_pattern) {
    doc.validate();

    std::optional<std::regex> custom;
    if (heading_pattern) {
        try {
            custom.emplace(*heading_pattern);
        } catch (const std::regex_error& e) {
            throw ConfigError(std::string("invalid heading_pattern: ") + e.what());
        }
    }
    static const std::regex hash_heading(R"(^#+\s*(.*?)\s*$)");

    const std::vector<std::string> lines = split_lines(doc.body);
    const bool body_ends_with_newline = !doc.body.empty() && doc.body.back() == '\n';

    UnformattedExtract out;
    std::set<std::string> seen;
    SpecSection current;
    current.heading = "preamble";
    bool preamble_open = true;

    auto line_with_newline = [&](std::size_t i) {
        std::string s = lines[i];
        if (i + 1 < lines.size() || body_ends_with_newline) s += "\n";
        return s;
    };

    auto flush = [&]() {
        if (preamble_open && trim(current.content).empty()) {
            return; // empty preamble is dropped, not a section
        }
        out.sections.push_back(current);
    };

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        std::smatch m;
        std::string title;
        std::string raw;
        bool matched = false;

        if (custom) {
            if (std::regex_match(line, m, *custom)) {
                title = m.size() > 1 ? m[1].str() : line;
                raw = line_with_newline(i);
                matched = true;
            }
        } else {
            if (std::regex_match(line, m, hash_heading) && line[0] == '#') {
                title = m[1].str();
                raw = line_with_newline(i);
                matched = true;
            } else if (i + 1 < lines.size() && !trim(line).empty() && line[0] != '#' &&
                       is_underline(lines[i + 1])) {
                title = trim(line);
                raw = line_with_newline(i) + line_with_newline(i + 1);
                ++i;
                matched = true;
            }
        }

        if (matched) {
            flush();
            preamble_open = false;
            current = SpecSection{};
            current.heading = unique_heading(normalize_heading(title), seen);
            current.raw_heading_line = raw;
        } else {
            current.content += line_with_newline(i);
        }
    }
    flush();

    if (out.sections.empty()) {
        // No heading found and body is blank after trimming was already
        // rejected by validate(); keep everything as one preamble section.
        SpecSection s;
        s.heading = "preamble";
        s.content = doc.body;
        out.sections.push_back(std::move(s));
    }
    return out;
}

namespace {

bool looks_like_bullet(const std::string& line) {
    static const std::regex bullet(R"(^\s*([-*+]|\d+[.)])\s+\S.*$)");
    return std::regex_match(line, bullet);
}

std::string strip_bullet(const std::string& line) {
    static const std::regex bullet(R"(^\s*([-*+]|\d+[.)])\s+(.*)$)");
    std::smatch m;
    if (std::regex_match(line, m, bullet)) {
        return m[2].str();
    }
    return line;
}

// Splits a block of prose into entries at bullet boundaries when bullets are
// present, otherwise at sentence ends.
std::vector<std::string> split_entries(const std::string& content) {
    std::vector<std::string> entries;
    const auto lines = split_lines(content);
    const bool has_bullets = std::any_of(lines.begin(), lines.end(), looks_like_bullet);

    if (has_bullets) {
        std::string pending;
        for (const auto& line : lines) {
            if (looks_like_bullet(line)) {
                if (!trim(pending).empty()) entries.push_back(trim(pending));
                pending = strip_bullet(line);
            } else if (!trim(line).empty()) {
                // continuation line of the current bullet
                if (!pending.empty()) pending += " ";
                pending += trim(line);
            }
        }
        if (!trim(pending).empty()) entries.push_back(trim(pending));
        return entries;
    }

    std::string flat;
    for (const auto& line : lines) {
        if (!flat.empty()) flat += " ";
        flat += trim(line);
    }
    std::string pending;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        pending.push_back(flat[i]);
        if (flat[i] == '.' && (i + 1 == flat.size() || flat[i + 1] == ' ')) {
            std::string e = trim(pending);
            if (!e.empty() && e != ".") entries.push_back(e);
            pending.clear();
        }
    }
    std::string tail = trim(pending);
    if (!tail.empty()) entries.push_back(tail);
    return entries;
}

Definition parse_definition(const std::string& entry) {
    auto colon = entry.find(':');
    if (colon == std::string::npos) {
        return Definition{trim(entry), ""};
    }
    return Definition{trim(entry.substr(0, colon)), trim(entry.substr(colon + 1))};
}

Parameter parse_parameter(const std::string& entry) {
    Parameter p;
    std::string head = entry;
    auto colon = entry.find(':');
    if (colon != std::string::npos) {
        head = entry.substr(0, colon);
        p.description = trim(entry.substr(colon + 1));
    }
    // "name [12]" or "name = 0x3" carry a width or value
    static const std::regex with_width(R"(^\s*(\S+)\s*\[([^\]]+)\]\s*$)");
    static const std::regex with_value(R"(^\s*(\S+)\s*=\s*(\S.*?)\s*$)");
    std::smatch m;
    if (std::regex_match(head, m, with_width) || std::regex_match(head, m, with_value)) {
        p.name = m[1].str();
        p.width_or_value = m[2].str();
    } else {
        p.name = trim(head);
    }
    return p;
}

void append_text(std::string& field, const std::string& content) {
    std::string t = trim(content);
    if (t.empty()) return;
    if (!field.empty()) field += "\n\n";
    field += t;
}

} // namespace

FormattedSpec to_formatted(const UnformattedExtract& ex, const LabelMap& label_map) {
    for (const auto& [heading, label] : label_map) {
        if (std::find(kSpecLabels.begin(), kSpecLabels.end(), label) == kSpecLabels.end()) {
            throw ConfigError("label_map assigns unknown label '" + label + "' to heading '" +
                              heading + "'");
        }
    }

    FormattedSpec spec;
    std::string extra;

    for (const auto& section : ex.sections) {
        auto it = label_map.find(section.heading);
        const std::string label = it == label_map.end() ? "" : it->second;

        if (label == "introduction") {
            append_text(spec.introduction, section.content);
        } else if (label == "system_overview") {
            append_text(spec.system_overview, section.content);
        } else if (label == "definitions") {
            for (const auto& e : split_entries(section.content)) {
                spec.definitions.push_back(parse_definition(e));
            }
        } else if (label == "parameters") {
            for (const auto& e : split_entries(section.content)) {
                spec.parameters.push_back(parse_parameter(e));
            }
        } else if (label == "functional_requirements") {
            for (auto& e : split_entries(section.content)) {
                spec.functional_requirements.push_back(std::move(e));
            }
        } else if (label == "timing_requirements") {
            for (auto& e : split_entries(section.content)) {
                spec.timing_requirements.push_back(std::move(e));
            }
        } else if (label == "extra_info") {
            append_text(extra, section.content);
        } else {
            // unmapped sections land in extra_info, prefixed by their heading
            append_text(extra, section.heading + ":\n" + trim(section.content));
        }
    }

    if (!extra.empty()) {
        spec.extra_info = extra;
    }
    if (spec.functional_requirements.empty()) {
        throw MissingFunctionalRequirements();
    }
    spec.validate();
    return spec;
}

std::string serialize_spec(const FormattedSpec& spec) {
    ordered_json j;
    j["introduction"] = spec.introduction;
    j["system_overview"] = spec.system_overview;
    j["definitions"] = ordered_json::array();
    for (const auto& d : spec.definitions) {
        j["definitions"].push_back(ordered_json{{"term", d.term}, {"meaning", d.meaning}});
    }
    j["parameters"] = ordered_json::array();
    for (const auto& p : spec.parameters) {
        ordered_json e{{"name", p.name}, {"description", p.description}};
        if (p.width_or_value) {
            e["width_or_value"] = *p.width_or_value;
        }
        j["parameters"].push_back(std::move(e));
    }
    j["functional_requirements"] = spec.functional_requirements;
    j["timing_requirements"] = spec.timing_requirements;
    if (spec.extra_info) {
        j["extra_info"] = *spec.extra_info;
    }
    return j.dump(2) + "\n";
}

namespace {

void line_col_of_offset(const std::string& text, std::size_t offset, int& line, int& col) {
    line = 1;
    col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

std::string require_string(const ordered_json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(key, "missing");
    if (!j.at(key).is_string()) throw SchemaError(key, "expected a string");
    return j.at(key).get<std::string>();
}

} // namespace

FormattedSpec deserialize_spec(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        int line = 1, col = 1;
        line_col_of_offset(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
        throw SpecParseError(std::string("parse error at line ") + std::to_string(line) +
                                 ", col " + std::to_string(col) + ": " + e.what(),
                             line, col);
    }
    if (!j.is_object()) {
        throw SpecParseError("top level must be an object", 1, 1);
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find(kSpecLabels.begin(), kSpecLabels.end(), key) == kSpecLabels.end()) {
            throw SchemaError(key);
        }
    }

    FormattedSpec spec;
    spec.introduction = require_string(j, "introduction");
    spec.system_overview = require_string(j, "system_overview");

    if (!j.contains("definitions") || !j.at("definitions").is_array()) {
        throw SchemaError("definitions", "missing or not an array");
    }
    for (const auto& d : j.at("definitions")) {
        if (!d.is_object()) throw SchemaError("definitions", "entry is not an object");
        spec.definitions.push_back(
            Definition{require_string(d, "term"), require_string(d, "meaning")});
    }

    if (!j.contains("parameters") || !j.at("parameters").is_array()) {
        throw SchemaError("parameters", "missing or not an array");
    }
    for (const auto& p : j.at("parameters")) {
        if (!p.is_object()) throw SchemaError("parameters", "entry is not an object");
        Parameter param;
        param.name = require_string(p, "name");
        param.description = require_string(p, "description");
        if (p.contains("width_or_value")) {
            if (!p.at("width_or_value").is_string()) {
                throw SchemaError("width_or_value", "expected a string");
            }
            param.width_or_value = p.at("width_or_value").get<std::string>();
        }
        spec.parameters.push_back(std::move(param));
    }

    auto read_string_array = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_array()) {
            throw SchemaError(key, "missing or not an array");
        }
        std::vector<std::string> out;
        for (const auto& e : j.at(key)) {
            if (!e.is_string()) throw SchemaError(key, "entry is not a string");
            out.push_back(e.get<std::string>());
        }
        return out;
    };
    spec.functional_requirements = read_string_array("functional_requirements");
    spec.timing_requirements = read_string_array("timing_requirements");

    if (j.contains("extra_info")) {
        if (!j.at("extra_info").is_string()) throw SchemaError("extra_info", "expected a string");
        spec.extra_info = j.at("extra_info").get<std::string>();
    }

    if (spec.functional_requirements.empty()) {
        throw SchemaError("functional_requirements", "must be non-empty");
    }
    spec.validate();
    return spec;
}

} // namespace chiraag
