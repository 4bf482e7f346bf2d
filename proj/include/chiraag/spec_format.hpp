#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chiraag {

// An unstructured design-specification document as loaded from disk.
struct SpecDocument {
    std::string source_path;
    std::string body;
    std::string design_name;

    void validate() const;
};

struct SpecSection {
    std::string heading;          // normalized (lowercase, whitespace -> underscores)
    std::string raw_heading_line; // heading line(s) exactly as they appeared, "" for preamble
    std::string content;          // raw text between this heading and the next
};

struct UnformattedExtract {
    std::vector<SpecSection> sections;
};

struct Definition {
    std::string term;
    std::string meaning;
    bool operator==(const Definition&) const = default;
};

struct Parameter {
    std::string name;
    std::string description;
    std::optional<std::string> width_or_value;
    bool operator==(const Parameter&) const = default;
};

// The seven-label structured specification handed to the LLM.
struct FormattedSpec {
    std::string introduction;
    std::string system_overview;
    std::vector<Definition> definitions;
    std::vector<Parameter> parameters;
    std::vector<std::string> functional_requirements;
    std::vector<std::string> timing_requirements;
    std::optional<std::string> extra_info;

    bool operator==(const FormattedSpec&) const = default;
    void validate() const;
};

// Heading-to-label assignment. Keys are normalized source headings, values
// are one of the seven label names above.
using LabelMap = std::map<std::string, std::string>;

extern const std::vector<std::string> kSpecLabels;

// Splits the document at heading markers. Lines starting with '#' and
// setext-style underlined titles are headings by default; a custom
// single-capture regex can replace the '#' rule. Text before the first
// heading becomes a "preamble" section.
UnformattedExtract extract(const SpecDocument& doc,
                           const std::optional<std::string>& heading_pattern = std::nullopt);

FormattedSpec to_formatted(const UnformattedExtract& extract, const LabelMap& label_map);

std::string serialize_spec(const FormattedSpec& spec);
FormattedSpec deserialize_spec(const std::string& text);

} // namespace chiraag
