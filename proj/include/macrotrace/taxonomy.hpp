#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace macrotrace::taxonomy {

struct Rule {
    std::string pattern;  // case-insensitive substring of the normalized heading
    std::string label;

    bool operator==(const Rule&) const = default;
};

// Ordered first-match-wins mapping from raw headings to canonical sections.
struct TaxonomyConfig {
    std::string name;                 // "eight", "six", or a custom tag
    std::vector<std::string> labels;  // the active canonical label set
    std::vector<Rule> rules;

    bool operator==(const TaxonomyConfig&) const = default;
};

// Canonical label sets. The eight-way set drives the section-focus analysis,
// the six-way set drives co-contribution and clustering.
const std::vector<std::string>& eight_way_labels();
const std::vector<std::string>& six_way_labels();

// Shipped default rule tables. taxonomy_name must be "eight" or "six";
// anything else raises UsageError. The Conception category has no default
// patterns (no reliable heading keywords exist for it), so it only maps
// headings when a user config adds rules.
TaxonomyConfig default_rules(const std::string& taxonomy_name);

// First rule whose pattern occurs in the whitespace-normalized, lowercased
// heading wins; none if no rule matches.
std::optional<std::string> canonicalize(std::string_view raw_heading,
                                        const TaxonomyConfig& config);

// Every rule label must belong to the active label set.
void validate(const TaxonomyConfig& config);

// Line-delimited config format:
//   taxonomy <name>
//   label <Label>
//   rule <pattern>\t<Label>
void save_config(const TaxonomyConfig& config, std::ostream& out);
TaxonomyConfig load_config(std::istream& in, const std::string& display_name);
TaxonomyConfig load_config_file(const std::string& path);

}  // namespace macrotrace::taxonomy
