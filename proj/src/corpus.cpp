#include "macrotrace/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "macrotrace/errors.hpp"
#include "macrotrace/text.hpp"

namespace macrotrace::corpus {

using nlohmann::json;

std::string_view signature_mode_name(SignatureMode mode) {
    return mode == SignatureMode::name_body ? "name_body" : "name_only";
}

std::optional<SignatureMode> signature_mode_from_name(std::string_view name) {
    if (name == "name_body") return SignatureMode::name_body;
    if (name == "name_only") return SignatureMode::name_only;
    return std::nullopt;
}

namespace {

json parse_json_line(const std::string& line, const std::string& where) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw DataError(where + ": malformed record (not a JSON object)");
    return j;
}

std::string require_string(const json& j, const char* field, const std::string& where) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string())
        throw DataError(where + ": missing or non-string field '" + field + "'");
    return it->get<std::string>();
}

}  // namespace

CorpusManifest manifest_from_stream(std::istream& in, const std::string& display_name) {
    CorpusManifest manifest;
    std::set<std::string> seen_ids;
    std::string line;
    int lineno = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = display_name + ":" + std::to_string(lineno);
        json j = parse_json_line(line, where);

        if (first_record && j.contains("options")) {
            const json& opts = j["options"];
            if (!opts.is_object()) throw DataError(where + ": 'options' must be an object");
            if (opts.contains("signature_mode")) {
                auto mode = signature_mode_from_name(opts["signature_mode"].get<std::string>());
                if (!mode)
                    throw DataError(where + ": unknown signature_mode '" +
                                    opts["signature_mode"].get<std::string>() + "'");
                manifest.options.mode = *mode;
            }
            if (opts.contains("taxonomy"))
                manifest.options.taxonomy = opts["taxonomy"].get<std::string>();
            first_record = false;
            continue;
        }
        first_record = false;

        PaperMeta meta;
        meta.paper_id = require_string(j, "paper_id", where);
        if (meta.paper_id.empty()) throw DataError(where + ": empty paper_id");
        meta.date = Date::parse(require_string(j, "date", where));
        auto authors_it = j.find("authors");
        if (authors_it == j.end() || !authors_it->is_array() || authors_it->empty())
            throw DataError(where + ": missing or empty 'authors' array");
        std::set<std::string> author_set;
        for (const json& a : *authors_it) {
            if (!a.is_string() || a.get<std::string>().empty())
                throw DataError(where + ": authors must be non-empty strings");
            std::string id = a.get<std::string>();
            if (!author_set.insert(id).second)
                throw DataError(where + ": duplicate author '" + id + "' in paper '" +
                                meta.paper_id + "'");
            meta.authors.push_back(id);
        }
        if (j.contains("discipline")) meta.discipline = j["discipline"].get<std::string>();
        meta.source_path = require_string(j, "source_path", where);
        if (j.contains("root_file")) meta.root_file = j["root_file"].get<std::string>();

        if (!seen_ids.insert(meta.paper_id).second)
            throw DataError(where + ": duplicate paper_id '" + meta.paper_id + "'");
        manifest.papers.push_back(std::move(meta));
    }
    return manifest;
}

CorpusManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open manifest '" + path + "'");
    return manifest_from_stream(in, path);
}

MacroSignature signature_of(const latex::MacroDefinition& defn, SignatureMode mode) {
    if (mode == SignatureMode::name_only) return {defn.name};
    return {defn.name + '\0' + text::normalize_ws(defn.body)};
}

std::string signature_display(const std::string& key) {
    std::string out = key;
    std::replace(out.begin(), out.end(), '\0', ':');
    return out;
}

HistoryDB build_histories(const CorpusManifest& manifest,
                          const std::map<std::string, latex::ParsedPaper>& parsed) {
    std::vector<const PaperMeta*> order;
    order.reserve(manifest.papers.size());
    for (const PaperMeta& meta : manifest.papers) {
        if (!parsed.count(meta.paper_id))
            throw DataError("no parsed paper for manifest entry '" + meta.paper_id + "'");
        order.push_back(&meta);
    }
    std::sort(order.begin(), order.end(), [](const PaperMeta* a, const PaperMeta* b) {
        if (a->date != b->date) return a->date < b->date;
        return a->paper_id < b->paper_id;
    });

    HistoryDB db;
    db.mode = manifest.options.mode;
    for (const PaperMeta* meta : order) {
        db.build_order.push_back(meta->paper_id);
        const latex::ParsedPaper& pp = parsed.at(meta->paper_id);
        std::set<std::string> keys;
        for (const latex::MacroDefinition& d : pp.definitions)
            keys.insert(signature_of(d, db.mode).key);
        for (const std::string& author : meta->authors) {
            auto& hist = db.entries[author];
            for (const std::string& key : keys) {
                auto [it, inserted] = hist.try_emplace(key, HistoryEntry{meta->date, 1,
                                                                         meta->paper_id});
                if (!inserted) {
                    HistoryEntry& e = it->second;
                    e.first_seen = std::min(e.first_seen, meta->date);
                    e.paper_count += 1;
                    e.only_paper.clear();
                }
            }
        }
    }
    return db;
}

std::set<std::string> history_as_of(const HistoryDB& db, const std::string& author_id,
                                    const Date& date) {
    std::set<std::string> out;
    auto it = db.entries.find(author_id);
    if (it == db.entries.end()) return out;
    for (const auto& [key, entry] : it->second)
        if (entry.first_seen < date) out.insert(key);
    return out;
}

namespace {

constexpr int kDbFormatVersion = 1;

std::string key_name(const std::string& key) {
    std::size_t nul = key.find('\0');
    return nul == std::string::npos ? key : key.substr(0, nul);
}

}  // namespace

void save_db(const HistoryDB& db, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write history db '" + path + "'");

    json header;
    header["format_version"] = kDbFormatVersion;
    header["mode"] = std::string(signature_mode_name(db.mode));
    header["build_order"] = db.build_order;
    out << header.dump() << "\n";

    std::vector<std::string> lines;
    for (const auto& [author, hist] : db.entries) {
        for (const auto& [key, entry] : hist) {
            json rec;
            rec["author"] = text::bytes_to_utf8(author);
            rec["name"] = text::bytes_to_utf8(key_name(key));
            if (db.mode == SignatureMode::name_body) {
                std::size_t nul = key.find('\0');
                rec["body"] = text::bytes_to_utf8(nul == std::string::npos
                                                      ? std::string()
                                                      : key.substr(nul + 1));
            }
            rec["first_seen"] = entry.first_seen.str();
            rec["n_papers"] = entry.paper_count;
            if (entry.paper_count == 1) rec["only_paper"] = entry.only_paper;
            lines.push_back(rec.dump());
        }
    }
    std::sort(lines.begin(), lines.end());
    for (const std::string& l : lines) out << l << "\n";
    if (!out) throw DataError("write failure on history db '" + path + "'");
}

HistoryDB load_db(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open history db '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty history db file");
    json header = parse_json_line(line, path + ":1");
    if (!header.contains("format_version") ||
        !header["format_version"].is_number_integer() ||
        header["format_version"].get<int>() != kDbFormatVersion)
        throw DataError(path + ": unsupported history db format version");
    HistoryDB db;
    auto mode = signature_mode_from_name(header.value("mode", ""));
    if (!mode) throw DataError(path + ": missing or unknown signature mode in header");
    db.mode = *mode;
    if (header.contains("build_order"))
        db.build_order = header["build_order"].get<std::vector<std::string>>();

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        json rec = parse_json_line(line, where);
        std::string author = text::utf8_to_bytes(require_string(rec, "author", where));
        std::string name = text::utf8_to_bytes(require_string(rec, "name", where));
        std::string key = name;
        if (db.mode == SignatureMode::name_body)
            key += '\0' + text::utf8_to_bytes(require_string(rec, "body", where));
        HistoryEntry entry;
        entry.first_seen = Date::parse(require_string(rec, "first_seen", where));
        entry.paper_count = rec.value("n_papers", 1);
        entry.only_paper = rec.value("only_paper", "");
        auto [it, inserted] = db.entries[author].try_emplace(key, entry);
        if (!inserted) throw DataError(where + ": duplicate (author, signature) record");
    }
    return db;
}

}  // namespace macrotrace::corpus
