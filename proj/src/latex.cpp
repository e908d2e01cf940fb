#include "macrotrace/latex.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "macrotrace/errors.hpp"
#include "macrotrace/text.hpp"

namespace macrotrace::latex {

namespace {

using text::is_ascii_letter;

struct CsToken {
    std::string_view name;  // empty when the backslash is the last byte
    std::size_t end = 0;    // first byte after the token
};

// text[i] must be '\\'. A letter name runs to the first non-letter; otherwise
// the single following character is the name (control symbol).
CsToken read_cs(std::string_view t, std::size_t i) {
    if (i + 1 >= t.size()) return {std::string_view{}, i + 1};
    if (is_ascii_letter(t[i + 1])) {
        std::size_t j = i + 2;
        while (j < t.size() && is_ascii_letter(t[j])) ++j;
        return {t.substr(i + 1, j - i - 1), j};
    }
    return {t.substr(i + 1, 1), i + 2};
}

std::size_t skip_ws(std::string_view t, std::size_t i) {
    while (i < t.size() && text::is_space(t[i])) ++i;
    return i;
}

bool is_verbatim_env(std::string_view env) {
    return env == "verbatim" || env == "verbatim*" || env == "lstlisting";
}

enum class RegionKind { comment, verbatim };

struct Region {
    std::size_t begin = 0;
    std::size_t end = 0;
    RegionKind kind = RegionKind::comment;
};

void warn(std::vector<std::string>* warnings, std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
}

// Single left-to-right pass marking comment lines and verbatim stretches.
// Comment handling wins inside a comment, verbatim handling wins inside
// verbatim, exactly as a TeX reader would see the bytes.
std::vector<Region> scan_regions(std::string_view t, std::vector<std::string>* warnings) {
    std::vector<Region> out;
    std::size_t i = 0;
    const std::size_t n = t.size();
    while (i < n) {
        char c = t[i];
        if (c == '\\') {
            CsToken cs = read_cs(t, i);
            if (cs.name == "verb") {
                std::size_t j = cs.end;
                if (j < n && t[j] == '*') ++j;
                if (j >= n || t[j] == '\n') {
                    warn(warnings, "\\verb without delimiter");
                    i = cs.end;
                    continue;
                }
                char delim = t[j];
                std::size_t close = j + 1;
                while (close < n && t[close] != delim && t[close] != '\n') ++close;
                if (close >= n || t[close] == '\n') {
                    warn(warnings, "unterminated \\verb closed at end of line");
                    out.push_back({i, close, RegionKind::verbatim});
                    i = close;
                } else {
                    out.push_back({i, close + 1, RegionKind::verbatim});
                    i = close + 1;
                }
            } else if (cs.name == "begin") {
                std::size_t j = skip_ws(t, cs.end);
                if (j < n && t[j] == '{') {
                    std::size_t close = t.find('}', j + 1);
                    if (close != std::string_view::npos) {
                        std::string env(t.substr(j + 1, close - j - 1));
                        if (is_verbatim_env(env)) {
                            std::string closer = "\\end{" + env + "}";
                            std::size_t pos = t.find(closer, close + 1);
                            if (pos == std::string_view::npos) {
                                warn(warnings, "unterminated " + env +
                                                   " environment closed at end of input");
                                out.push_back({i, n, RegionKind::verbatim});
                                i = n;
                            } else {
                                out.push_back({i, pos + closer.size(), RegionKind::verbatim});
                                i = pos + closer.size();
                            }
                            continue;
                        }
                    }
                }
                i = cs.end;
            } else {
                i = cs.end;  // \% and any other control sequence
            }
        } else if (c == '%') {
            std::size_t eol = t.find('\n', i);
            if (eol == std::string_view::npos) eol = n;
            out.push_back({i, eol, RegionKind::comment});
            i = eol;  // the newline itself stays
        } else {
            ++i;
        }
    }
    return out;
}

// Cursor over the special regions of a text, for walks that must skip or
// copy them wholesale.
class RegionWalk {
  public:
    explicit RegionWalk(const std::vector<Region>& regions) : regions_(regions) {}

    // If i starts a region, return it and advance the cursor.
    const Region* at(std::size_t i) {
        while (idx_ < regions_.size() && regions_[idx_].end <= i) ++idx_;
        if (idx_ < regions_.size() && regions_[idx_].begin == i) return &regions_[idx_];
        return nullptr;
    }

  private:
    const std::vector<Region>& regions_;
    std::size_t idx_ = 0;
};

struct BraceGroup {
    bool balanced = false;
    std::size_t content_begin = 0;
    std::size_t content_end = 0;
    std::size_t end = 0;  // one past the closing brace when balanced
};

// t[open] must be '{'. Escaped braces do not count toward nesting.
BraceGroup read_brace_group(std::string_view t, std::size_t open) {
    BraceGroup g;
    g.content_begin = open + 1;
    int depth = 1;
    std::size_t i = open + 1;
    while (i < t.size()) {
        char c = t[i];
        if (c == '\\') {
            i += 2;
            continue;
        }
        if (c == '{') ++depth;
        if (c == '}') {
            --depth;
            if (depth == 0) {
                g.balanced = true;
                g.content_end = i;
                g.end = i + 1;
                return g;
            }
        }
        ++i;
    }
    return g;
}

// t[open] must be '['. Braces inside the group shield ']' from closing it.
struct BracketGroup {
    bool balanced = false;
    std::size_t end = 0;
};

BracketGroup read_bracket_group(std::string_view t, std::size_t open) {
    int brace_depth = 0;
    std::size_t i = open + 1;
    while (i < t.size()) {
        char c = t[i];
        if (c == '\\') {
            i += 2;
            continue;
        }
        if (c == '{') ++brace_depth;
        if (c == '}' && brace_depth > 0) --brace_depth;
        if (c == ']' && brace_depth == 0) return {true, i + 1};
        ++i;
    }
    return {false, t.size()};
}

struct DefCommand {
    DefKind kind;
    bool direct_name_only;  // def-family: \def\name, never \def{\name}
    bool takes_brackets;    // [nargs][default] after the name
};

const DefCommand* lookup_def_command(std::string_view name) {
    static const std::map<std::string_view, DefCommand> table = {
        {"newcommand", {DefKind::newcommand, false, true}},
        {"renewcommand", {DefKind::renewcommand, false, true}},
        {"providecommand", {DefKind::providecommand, false, true}},
        {"def", {DefKind::def_family, true, false}},
        {"gdef", {DefKind::def_family, true, false}},
        {"edef", {DefKind::def_family, true, false}},
        {"xdef", {DefKind::def_family, true, false}},
        {"DeclareMathOperator", {DefKind::declare_math_operator, false, false}},
        {"DeclareRobustCommand", {DefKind::declare_robust, false, true}},
    };
    auto it = table.find(name);
    return it == table.end() ? nullptr : &it->second;
}

}  // namespace

std::string_view defkind_name(DefKind kind) {
    switch (kind) {
        case DefKind::newcommand: return "newcommand";
        case DefKind::renewcommand: return "renewcommand";
        case DefKind::providecommand: return "providecommand";
        case DefKind::def_family: return "def-family";
        case DefKind::declare_math_operator: return "declare-math-operator";
        case DefKind::declare_robust: return "declare-robust";
    }
    return "newcommand";
}

std::optional<DefKind> defkind_from_name(std::string_view name) {
    static const std::array<DefKind, 6> kinds = {
        DefKind::newcommand,       DefKind::renewcommand,
        DefKind::providecommand,   DefKind::def_family,
        DefKind::declare_math_operator, DefKind::declare_robust,
    };
    for (DefKind k : kinds)
        if (defkind_name(k) == name) return k;
    return std::nullopt;
}

std::string strip_comments(std::string_view input, std::vector<std::string>* warnings) {
    std::vector<Region> regions = scan_regions(input, warnings);
    std::string out;
    out.reserve(input.size());
    std::size_t i = 0;
    for (const Region& r : regions) {
        if (r.kind == RegionKind::comment) {
            out.append(input.substr(i, r.begin - i));
            i = r.end;
        }
    }
    out.append(input.substr(i));
    return out;
}

namespace {

std::string expand_file(const RawPaperSource& src, const std::string& key,
                        std::vector<std::string>& stack,
                        std::vector<std::string>* warnings) {
    const std::string& body = src.files.at(key);
    std::vector<Region> regions = scan_regions(body, nullptr);
    RegionWalk walk(regions);
    std::string out;
    out.reserve(body.size());
    std::size_t i = 0;
    const std::size_t n = body.size();
    std::string_view t(body);
    while (i < n) {
        if (const Region* r = walk.at(i)) {
            out.append(t.substr(r->begin, r->end - r->begin));
            i = r->end;
            continue;
        }
        if (t[i] != '\\') {
            out.push_back(t[i]);
            ++i;
            continue;
        }
        CsToken cs = read_cs(t, i);
        if (cs.name != "input" && cs.name != "include") {
            out.append(t.substr(i, cs.end - i));
            i = cs.end;
            continue;
        }
        std::size_t p = skip_ws(t, cs.end);
        if (p >= n || t[p] != '{') {
            out.append(t.substr(i, cs.end - i));
            i = cs.end;
            continue;
        }
        std::size_t close = t.find('}', p + 1);
        if (close == std::string_view::npos) {
            out.append(t.substr(i, cs.end - i));
            i = cs.end;
            continue;
        }
        std::string target = text::normalize_ws(t.substr(p + 1, close - p - 1));
        i = close + 1;

        std::string trimmed = target;
        if (trimmed.rfind("./", 0) == 0) trimmed = trimmed.substr(2);
        std::string resolved;
        for (const std::string& cand :
             {target, target + ".tex", trimmed, trimmed + ".tex"}) {
            if (src.files.count(cand)) {
                resolved = cand;
                break;
            }
        }
        if (resolved.empty()) {
            warn(warnings, "unresolved \\" + std::string(cs.name) + "{" + target + "}");
            continue;
        }
        if (std::find(stack.begin(), stack.end(), resolved) != stack.end()) {
            warn(warnings, "input cycle at '" + resolved + "'; substituting empty text");
            continue;
        }
        stack.push_back(resolved);
        out.append(expand_file(src, resolved, stack, warnings));
        stack.pop_back();
    }
    return out;
}

}  // namespace

std::string resolve_inputs(const RawPaperSource& source, std::vector<std::string>* warnings) {
    if (!source.files.count(source.root_file))
        throw DataError("root file '" + source.root_file + "' not in bundle");
    std::vector<std::string> stack{source.root_file};
    return expand_file(source, source.root_file, stack, warnings);
}

std::vector<MacroDefinition> extract_macro_definitions(std::string_view t,
                                                       std::vector<std::string>* warnings) {
    std::vector<MacroDefinition> defs;
    std::vector<Region> regions = scan_regions(t, nullptr);
    RegionWalk walk(regions);
    std::size_t i = 0;
    const std::size_t n = t.size();
    while (i < n) {
        if (const Region* r = walk.at(i)) {
            i = r->end;
            continue;
        }
        if (t[i] != '\\') {
            ++i;
            continue;
        }
        CsToken cs = read_cs(t, i);
        const DefCommand* cmd = lookup_def_command(cs.name);
        if (!cmd) {
            i = cs.end;
            continue;
        }
        const std::size_t cmd_start = i;
        std::size_t p = skip_ws(t, cs.end);
        if (p < n && t[p] == '*') p = skip_ws(t, p + 1);

        // target name: \name directly, or {\name} for the LaTeX-style commands
        bool braced = false;
        if (!cmd->direct_name_only && p < n && t[p] == '{') {
            braced = true;
            p = skip_ws(t, p + 1);
        }
        if (p >= n || t[p] != '\\') {
            warn(warnings, "could not parse definition target after \\" +
                               std::string(cs.name));
            i = cs.end;
            continue;
        }
        CsToken name_tok = read_cs(t, p);
        if (name_tok.name.empty()) {
            warn(warnings, "could not parse definition target after \\" +
                               std::string(cs.name));
            i = cs.end;
            continue;
        }
        std::string name(name_tok.name);
        p = name_tok.end;
        if (braced) {
            p = skip_ws(t, p);
            if (p >= n || t[p] != '}') {
                warn(warnings, "malformed braced name in definition of \\" + name);
                i = cs.end;
                continue;
            }
            ++p;
        }

        bool failed = false;
        if (cmd->direct_name_only) {
            // def-family: skip the parameter text up to the replacement brace.
            // A blank line or a runaway scan means there is no body here.
            std::size_t q = p;
            int newlines = 0;
            while (q < n && t[q] != '{') {
                if (t[q] == '\\') {
                    q = read_cs(t, q).end;
                    continue;
                }
                if (t[q] == '\n') {
                    if (++newlines >= 2) break;
                } else if (!text::is_space(t[q])) {
                    newlines = 0;
                }
                if (q - p > 200) break;
                ++q;
            }
            if (q >= n || t[q] != '{') {
                warn(warnings, "definition of \\" + name + " has no body; skipped");
                i = cs.end;
                continue;
            }
            p = q;
        } else {
            if (cmd->takes_brackets) {
                for (int k = 0; k < 2; ++k) {
                    p = skip_ws(t, p);
                    if (p < n && t[p] == '[') {
                        BracketGroup bg = read_bracket_group(t, p);
                        if (!bg.balanced) {
                            warn(warnings, "unbalanced optional argument in definition of \\" +
                                               name + "; skipped");
                            failed = true;
                            break;
                        }
                        p = bg.end;
                    }
                }
            }
            if (!failed) p = skip_ws(t, p);
        }
        if (failed) {
            i = cs.end;
            continue;
        }

        if (p < n && t[p] == '{') {
            BraceGroup g = read_brace_group(t, p);
            if (!g.balanced) {
                warn(warnings, "unbalanced braces in definition of \\" + name + "; skipped");
                i = p + 1;
                continue;
            }
            defs.push_back({name, std::string(t.substr(g.content_begin,
                                                       g.content_end - g.content_begin)),
                            cmd->kind, cmd_start, g.end});
            i = g.end;
        } else if (p < n && t[p] == '\\') {
            // single-token replacement, e.g. \newcommand\eps\varepsilon
            CsToken body_tok = read_cs(t, p);
            defs.push_back({name, std::string(t.substr(p, body_tok.end - p)), cmd->kind,
                            cmd_start, body_tok.end});
            i = body_tok.end;
        } else {
            warn(warnings, "definition of \\" + name + " has no body; skipped");
            i = cs.end;
        }
    }
    return defs;
}

std::vector<SectionSpan> extract_sections(std::string_view t,
                                          std::vector<std::string>* warnings) {
    std::vector<SectionSpan> spans;
    std::vector<Region> regions = scan_regions(t, nullptr);
    RegionWalk walk(regions);

    bool have_pending = false;
    std::string pending_heading;
    std::size_t pending_start = 0;
    auto close_pending = [&](std::size_t end) {
        if (!have_pending) return;
        spans.push_back({pending_heading, pending_start, end, spans.size()});
        have_pending = false;
    };

    std::size_t i = 0;
    const std::size_t n = t.size();
    while (i < n) {
        if (const Region* r = walk.at(i)) {
            i = r->end;
            continue;
        }
        if (t[i] != '\\') {
            ++i;
            continue;
        }
        CsToken cs = read_cs(t, i);
        if (cs.name == "section") {
            const std::size_t cmd_start = i;
            std::size_t p = skip_ws(t, cs.end);
            if (p < n && t[p] == '*') p = skip_ws(t, p + 1);
            if (p < n && t[p] == '[') {
                BracketGroup bg = read_bracket_group(t, p);
                p = bg.balanced ? skip_ws(t, bg.end) : skip_ws(t, p + 1);
            }
            if (p >= n || t[p] != '{') {
                warn(warnings, "\\section without brace group ignored");
                i = cs.end;
                continue;
            }
            BraceGroup g = read_brace_group(t, p);
            std::string heading;
            std::size_t heading_end;
            if (g.balanced) {
                heading = std::string(t.substr(g.content_begin, g.content_end - g.content_begin));
                heading_end = g.end;
            } else {
                std::size_t eol = t.find('\n', p + 1);
                if (eol == std::string_view::npos) eol = n;
                heading = std::string(t.substr(p + 1, eol - p - 1));
                heading_end = eol;
                warn(warnings, "unbalanced braces in section heading; heading taken to end of line");
            }
            close_pending(cmd_start);
            have_pending = true;
            pending_heading = heading;
            pending_start = heading_end;
            i = heading_end;
            continue;
        }
        if (cs.name == "end") {
            std::size_t p = skip_ws(t, cs.end);
            if (p < n && t[p] == '{') {
                std::size_t close = t.find('}', p + 1);
                if (close != std::string_view::npos &&
                    t.substr(p + 1, close - p - 1) == "document") {
                    close_pending(i);
                    return spans;
                }
            }
            i = cs.end;
            continue;
        }
        i = cs.end;
    }
    close_pending(n);
    return spans;
}

namespace {

std::vector<MacroUsage> scan_usages_impl(std::string_view t,
                                         const std::vector<MacroDefinition>& definitions,
                                         const std::vector<SectionSpan>& sections) {
    std::set<std::string_view> names;
    std::map<std::string_view, std::vector<std::pair<std::size_t, std::size_t>>> own_sites;
    for (const MacroDefinition& d : definitions) {
        names.insert(d.name);
        own_sites[d.name].push_back({d.byte_offset, d.end_offset});
    }

    auto section_of = [&](std::size_t off) -> std::optional<std::size_t> {
        // sections are ordered and non-overlapping
        auto it = std::upper_bound(sections.begin(), sections.end(), off,
                                   [](std::size_t o, const SectionSpan& s) {
                                       return o < s.start_offset;
                                   });
        if (it == sections.begin()) return std::nullopt;
        --it;
        if (off < it->end_offset) return it->index;
        return std::nullopt;
    };

    std::vector<MacroUsage> usages;
    std::vector<Region> regions = scan_regions(t, nullptr);
    RegionWalk walk(regions);
    std::size_t i = 0;
    const std::size_t n = t.size();
    while (i < n) {
        if (const Region* r = walk.at(i)) {
            i = r->end;
            continue;
        }
        if (t[i] != '\\') {
            ++i;
            continue;
        }
        CsToken cs = read_cs(t, i);
        if (!cs.name.empty() && names.count(cs.name)) {
            bool own = false;
            for (auto [b, e] : own_sites[cs.name])
                if (i >= b && i < e) {
                    own = true;
                    break;
                }
            if (!own) usages.push_back({std::string(cs.name), i, section_of(i)});
        }
        i = cs.end;
    }
    return usages;
}

}  // namespace

std::vector<MacroUsage> scan_macro_usages(std::string_view t,
                                          const std::vector<MacroDefinition>& definitions) {
    return scan_usages_impl(t, definitions, extract_sections(t, nullptr));
}

ParsedPaper parse_paper(const RawPaperSource& source) {
    if (source.paper_id.empty()) throw DataError("paper with empty id");
    if (!source.files.count(source.root_file))
        throw DataError("paper '" + source.paper_id + "': root file '" + source.root_file +
                        "' not found in bundle");
    ParsedPaper pp;
    pp.paper_id = source.paper_id;
    std::string flat = resolve_inputs(source, &pp.warnings);
    std::string stripped = strip_comments(flat, &pp.warnings);
    pp.definitions = extract_macro_definitions(stripped, &pp.warnings);
    pp.sections = extract_sections(stripped, &pp.warnings);
    pp.usages = scan_usages_impl(stripped, pp.definitions, pp.sections);
    return pp;
}

}  // namespace macrotrace::latex
