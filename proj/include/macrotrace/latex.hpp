#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace macrotrace::latex {

// One arXiv-style source bundle: a set of files plus the entry point.
struct RawPaperSource {
    std::string paper_id;
    std::string root_file;
    std::map<std::string, std::string> files;  // relative path -> bytes
};

enum class DefKind {
    newcommand,
    renewcommand,
    providecommand,
    def_family,            // \def \gdef \edef \xdef
    declare_math_operator,
    declare_robust,
};

std::string_view defkind_name(DefKind kind);
std::optional<DefKind> defkind_from_name(std::string_view name);

struct MacroDefinition {
    std::string name;          // control-sequence name, no backslash
    std::string body;          // replacement text as written, outer braces removed
    DefKind kind = DefKind::newcommand;
    std::size_t byte_offset = 0;  // start of the defining command
    std::size_t end_offset = 0;   // one past the end of the body

    bool operator==(const MacroDefinition&) const = default;
};

struct SectionSpan {
    std::string raw_heading;
    std::size_t start_offset = 0;  // first byte after the heading group
    std::size_t end_offset = 0;    // next \section, \end{document}, or end of text
    std::size_t index = 0;

    bool operator==(const SectionSpan&) const = default;
};

struct MacroUsage {
    std::string name;
    std::size_t byte_offset = 0;
    std::optional<std::size_t> section_index;  // none: before the first heading

    bool operator==(const MacroUsage&) const = default;
};

struct ParsedPaper {
    std::string paper_id;
    std::vector<MacroDefinition> definitions;
    std::vector<MacroUsage> usages;
    std::vector<SectionSpan> sections;
    std::vector<std::string> warnings;

    bool operator==(const ParsedPaper&) const = default;
};

// Remove every unescaped '%' together with the rest of its line. \% survives,
// verbatim/lstlisting environments and \verb arguments are left untouched,
// newlines are kept. Total: never throws on document content.
std::string strip_comments(std::string_view text,
                           std::vector<std::string>* warnings = nullptr);

// Flatten \input{...}/\include{...} against the bundle, recursively and
// cycle-safe. Targets are looked up as written and with ".tex" appended;
// unresolved or cyclic targets expand to nothing and leave a warning.
// Directives inside comments or verbatim are not followed.
std::string resolve_inputs(const RawPaperSource& source,
                           std::vector<std::string>* warnings = nullptr);

// Definition commands recognized: \newcommand(*), \renewcommand(*),
// \providecommand(*), \def, \gdef, \edef, \xdef, \DeclareMathOperator(*),
// \DeclareRobustCommand(*). Expects comment-stripped, flattened text.
std::vector<MacroDefinition> extract_macro_definitions(
    std::string_view text, std::vector<std::string>* warnings = nullptr);

// \section{...} and \section*{...} headings; each span covers the body up to
// the next \section, \end{document}, or end of text.
std::vector<SectionSpan> extract_sections(std::string_view text,
                                          std::vector<std::string>* warnings = nullptr);

// Occurrences of defined control sequences outside their own definition sites
// and outside verbatim, with the enclosing section resolved per SectionSpan.
std::vector<MacroUsage> scan_macro_usages(std::string_view text,
                                          const std::vector<MacroDefinition>& definitions);

// resolve_inputs -> strip_comments -> extract + scan, assembled into one record.
// Throws DataError if the root file is missing from the bundle.
ParsedPaper parse_paper(const RawPaperSource& source);

// Cache form: one JSON object per line. Byte offsets and non-ASCII bytes
// survive the round trip.
std::string parsed_paper_to_jsonl(const ParsedPaper& paper);
ParsedPaper parsed_paper_from_jsonl(std::string_view line, const std::string& where);

}  // namespace macrotrace::latex
