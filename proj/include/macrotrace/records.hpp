#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace macrotrace::records {

// Shortest round-trip decimal form; integral values get a trailing ".0" so
// the column stays typed. NaN renders as "NA".
std::string format_double(double v);
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// One record per (paper, author).
struct AttributionRow {
    std::string paper_id;
    std::string author_id;
    int author_rank = 1;
    int team_size = 1;
    std::string discipline;
    int unique_count = 0;
    double fractional_count = 0.0;
    double share = 0.0;

    bool operator==(const AttributionRow&) const = default;
};

// One record per (paper, author, bucket).
struct FocusRow {
    std::string paper_id;
    std::string author_id;
    int author_rank = 1;
    int team_size = 1;
    std::string section;  // canonical label or pseudo-bucket
    double fraction = 0.0;
    bool contributed = false;

    bool operator==(const FocusRow&) const = default;
};

void write_attribution_jsonl(std::ostream& out, const std::vector<AttributionRow>& rows);
void write_attribution_csv(std::ostream& out, const std::vector<AttributionRow>& rows);
std::vector<AttributionRow> read_attribution_jsonl(std::istream& in,
                                                   const std::string& display_name);

void write_focus_jsonl(std::ostream& out, const std::vector<FocusRow>& rows);
void write_focus_csv(std::ostream& out, const std::vector<FocusRow>& rows);
std::vector<FocusRow> read_focus_jsonl(std::istream& in, const std::string& display_name);

}  // namespace macrotrace::records
