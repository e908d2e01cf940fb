#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "macrotrace/date.hpp"
#include "macrotrace/latex.hpp"

namespace macrotrace::corpus {

enum class SignatureMode { name_body, name_only };

std::string_view signature_mode_name(SignatureMode mode);
std::optional<SignatureMode> signature_mode_from_name(std::string_view name);

struct PaperMeta {
    std::string paper_id;
    Date date;
    std::vector<std::string> authors;  // published order
    std::string discipline;
    std::string source_path;
    std::string root_file;  // optional; empty means auto-detect

    bool operator==(const PaperMeta&) const = default;
};

struct CorpusOptions {
    SignatureMode mode = SignatureMode::name_body;
    std::string taxonomy = "eight";

    bool operator==(const CorpusOptions&) const = default;
};

struct CorpusManifest {
    std::vector<PaperMeta> papers;
    CorpusOptions options;
};

// Line-delimited JSON, one paper per line. An optional first line
// {"options": {...}} sets corpus-level defaults. Errors carry line numbers.
CorpusManifest load_manifest(const std::string& path);
CorpusManifest manifest_from_stream(std::istream& in, const std::string& display_name);

// Canonical macro identity. Default mode keys on name plus the
// whitespace-normalized body (separated by NUL); name-only mode keys on the
// bare name.
struct MacroSignature {
    std::string key;

    auto operator<=>(const MacroSignature&) const = default;
};

MacroSignature signature_of(const latex::MacroDefinition& defn, SignatureMode mode);
std::string signature_display(const std::string& key);  // NUL shown as ':'

// Per (author, signature) history entry. first_seen is the date of the
// earliest processed paper by that author defining the signature; only_paper
// identifies the single source paper while paper_count == 1 so that
// attribution can exclude signatures known solely from the target paper.
struct HistoryEntry {
    Date first_seen;
    int paper_count = 0;
    std::string only_paper;

    bool operator==(const HistoryEntry&) const = default;
};

struct HistoryDB {
    SignatureMode mode = SignatureMode::name_body;
    // author_id -> signature key -> entry
    std::map<std::string, std::map<std::string, HistoryEntry>> entries;
    std::vector<std::string> build_order;  // processing order, ascending (date, paper_id)

    bool operator==(const HistoryDB&) const = default;
};

// Processes papers in ascending (date, paper_id) order; every signature
// defined in a paper is added to every listed author. Output is independent
// of manifest line order. Missing parsed papers raise DataError.
HistoryDB build_histories(const CorpusManifest& manifest,
                          const std::map<std::string, latex::ParsedPaper>& parsed);

// Signatures first seen strictly before `date`. Unknown authors yield {}.
std::set<std::string> history_as_of(const HistoryDB& db, const std::string& author_id,
                                    const Date& date);

// Header line {"format_version","mode","build_order"}, then one JSON record
// per (author, signature, first_seen) triple, record lines sorted
// lexicographically. Byte-stable for a fixed database.
void save_db(const HistoryDB& db, const std::string& path);
HistoryDB load_db(const std::string& path);

}  // namespace macrotrace::corpus
