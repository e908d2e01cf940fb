#include "macrotrace/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "macrotrace/errors.hpp"
#include "macrotrace/text.hpp"

namespace macrotrace::taxonomy {

const std::vector<std::string>& eight_way_labels() {
    static const std::vector<std::string> labels = {
        "Introduction", "Discussion",  "Conception",  "Acknowledgments",
        "Methods",      "Results",     "Experiments", "Preliminaries",
    };
    return labels;
}

const std::vector<std::string>& six_way_labels() {
    static const std::vector<std::string> labels = {
        "Introduction", "Discussion", "Conclusion",
        "Preliminaries", "Methods",   "Results",
    };
    return labels;
}

TaxonomyConfig default_rules(const std::string& taxonomy_name) {
    TaxonomyConfig cfg;
    cfg.name = taxonomy_name;
    if (taxonomy_name == "eight") {
        cfg.labels = eight_way_labels();
        cfg.rules = {
            {"introduction", "Introduction"},
            {"discussion", "Discussion"},
            {"acknowledg", "Acknowledgments"},
            {"result", "Results"},
            {"finding", "Results"},
            {"experiment", "Experiments"},
            {"evaluation", "Experiments"},
            {"method", "Methods"},
            {"approach", "Methods"},
            {"model", "Methods"},
            {"algorithm", "Methods"},
            {"preliminar", "Preliminaries"},
            {"background", "Preliminaries"},
            {"related work", "Preliminaries"},
            {"notation", "Preliminaries"},
        };
    } else if (taxonomy_name == "six") {
        cfg.labels = six_way_labels();
        cfg.rules = {
            {"introduction", "Introduction"},
            {"discussion", "Discussion"},
            {"conclusion", "Conclusion"},
            {"concluding", "Conclusion"},
            {"result", "Results"},
            {"finding", "Results"},
            {"experiment", "Results"},
            {"evaluation", "Results"},
            {"method", "Methods"},
            {"approach", "Methods"},
            {"model", "Methods"},
            {"algorithm", "Methods"},
            {"preliminar", "Preliminaries"},
            {"background", "Preliminaries"},
            {"related work", "Preliminaries"},
            {"notation", "Preliminaries"},
        };
    } else {
        throw UsageError("unknown taxonomy '" + taxonomy_name + "' (expected eight or six)");
    }
    return cfg;
}

std::optional<std::string> canonicalize(std::string_view raw_heading,
                                        const TaxonomyConfig& config) {
    std::string heading = text::to_lower(text::normalize_ws(raw_heading));
    for (const Rule& rule : config.rules)
        if (heading.find(rule.pattern) != std::string::npos) return rule.label;
    return std::nullopt;
}

void validate(const TaxonomyConfig& config) {
    for (const Rule& rule : config.rules) {
        if (std::find(config.labels.begin(), config.labels.end(), rule.label) ==
            config.labels.end())
            throw DataError("taxonomy rule '" + rule.pattern + "' maps to label '" +
                            rule.label + "' outside the active label set");
        if (rule.pattern.empty())
            throw DataError("taxonomy rule with empty pattern (label '" + rule.label + "')");
    }
}

void save_config(const TaxonomyConfig& config, std::ostream& out) {
    out << "taxonomy " << config.name << "\n";
    for (const std::string& label : config.labels) out << "label " << label << "\n";
    for (const Rule& rule : config.rules)
        out << "rule " << rule.pattern << "\t" << rule.label << "\n";
}

TaxonomyConfig load_config(std::istream& in, const std::string& display_name) {
    TaxonomyConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fail = [&](const std::string& why) {
            throw DataError(display_name + ":" + std::to_string(lineno) + ": " + why);
        };
        if (line.rfind("taxonomy ", 0) == 0) {
            cfg.name = text::normalize_ws(line.substr(9));
            if (cfg.name.empty()) fail("empty taxonomy name");
        } else if (line.rfind("label ", 0) == 0) {
            std::string label = text::normalize_ws(line.substr(6));
            if (label.empty()) fail("empty label");
            cfg.labels.push_back(label);
        } else if (line.rfind("rule ", 0) == 0) {
            std::string rest = line.substr(5);
            std::size_t tab = rest.find('\t');
            if (tab == std::string::npos) fail("rule line needs '<pattern>\\t<label>'");
            Rule rule{text::to_lower(text::normalize_ws(rest.substr(0, tab))),
                      text::normalize_ws(rest.substr(tab + 1))};
            if (rule.pattern.empty() || rule.label.empty()) fail("empty rule pattern or label");
            cfg.rules.push_back(rule);
        } else {
            fail("unrecognized directive: '" + line + "'");
        }
    }
    if (cfg.name.empty()) throw DataError(display_name + ": missing 'taxonomy <name>' line");
    if (cfg.labels.empty()) throw DataError(display_name + ": no labels declared");
    validate(cfg);
    return cfg;
}

TaxonomyConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open taxonomy config '" + path + "'");
    return load_config(in, path);
}

}  // namespace macrotrace::taxonomy
