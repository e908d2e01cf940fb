#include "macrotrace/records.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "macrotrace/errors.hpp"
#include "macrotrace/text.hpp"

namespace macrotrace::records {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, ptr);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

std::string csv_escape(const std::string& field) {
    bool needs_quoting = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quoting) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ",";
        out << csv_escape(fields[i]);
    }
    out << "\n";
}

void write_attribution_jsonl(std::ostream& out, const std::vector<AttributionRow>& rows) {
    for (const AttributionRow& r : rows) {
        ordered_json j;
        j["paper_id"] = r.paper_id;
        j["author_id"] = r.author_id;
        j["author_rank"] = r.author_rank;
        j["team_size"] = r.team_size;
        j["discipline"] = r.discipline;
        j["unique_count"] = r.unique_count;
        j["fractional_count"] = r.fractional_count;
        j["share"] = r.share;
        out << j.dump() << "\n";
    }
}

void write_attribution_csv(std::ostream& out, const std::vector<AttributionRow>& rows) {
    write_csv_row(out, {"paper_id", "author_id", "author_rank", "team_size", "discipline",
                        "unique_count", "fractional_count", "share"});
    for (const AttributionRow& r : rows)
        write_csv_row(out, {r.paper_id, r.author_id, std::to_string(r.author_rank),
                            std::to_string(r.team_size), r.discipline,
                            std::to_string(r.unique_count), format_double(r.fractional_count),
                            format_double(r.share)});
}

std::vector<AttributionRow> read_attribution_jsonl(std::istream& in,
                                                   const std::string& display_name) {
    std::vector<AttributionRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw DataError(display_name + ":" + std::to_string(lineno) +
                            ": malformed attribution record");
        AttributionRow r;
        try {
            r.paper_id = j.at("paper_id").get<std::string>();
            r.author_id = j.at("author_id").get<std::string>();
            r.author_rank = j.at("author_rank").get<int>();
            r.team_size = j.at("team_size").get<int>();
            r.discipline = j.value("discipline", "");
            r.unique_count = j.at("unique_count").get<int>();
            r.fractional_count = j.at("fractional_count").get<double>();
            r.share = j.at("share").get<double>();
        } catch (const json::exception& e) {
            throw DataError(display_name + ":" + std::to_string(lineno) + ": " + e.what());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_focus_jsonl(std::ostream& out, const std::vector<FocusRow>& rows) {
    for (const FocusRow& r : rows) {
        ordered_json j;
        j["paper_id"] = r.paper_id;
        j["author_id"] = r.author_id;
        j["author_rank"] = r.author_rank;
        j["team_size"] = r.team_size;
        j["section"] = r.section;
        j["fraction"] = r.fraction;
        j["contributed"] = r.contributed;
        out << j.dump() << "\n";
    }
}

void write_focus_csv(std::ostream& out, const std::vector<FocusRow>& rows) {
    write_csv_row(out, {"paper_id", "author_id", "author_rank", "team_size", "section",
                        "fraction", "contributed"});
    for (const FocusRow& r : rows)
        write_csv_row(out, {r.paper_id, r.author_id, std::to_string(r.author_rank),
                            std::to_string(r.team_size), r.section, format_double(r.fraction),
                            r.contributed ? "true" : "false"});
}

std::vector<FocusRow> read_focus_jsonl(std::istream& in, const std::string& display_name) {
    std::vector<FocusRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw DataError(display_name + ":" + std::to_string(lineno) +
                            ": malformed focus record");
        FocusRow r;
        try {
            r.paper_id = j.at("paper_id").get<std::string>();
            r.author_id = j.at("author_id").get<std::string>();
            r.author_rank = j.at("author_rank").get<int>();
            r.team_size = j.at("team_size").get<int>();
            r.section = j.at("section").get<std::string>();
            r.fraction = j.at("fraction").get<double>();
            r.contributed = j.at("contributed").get<bool>();
        } catch (const json::exception& e) {
            throw DataError(display_name + ":" + std::to_string(lineno) + ": " + e.what());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace macrotrace::records
