#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "macrotrace/corpus.hpp"
#include "macrotrace/latex.hpp"
#include "macrotrace/taxonomy.hpp"

namespace macrotrace::attribution {

// strict_precedence: only signatures first seen strictly before the paper's
// date count as prior work. full_history: the author's whole timeline counts,
// excluding signatures known solely from the paper being attributed.
enum class HistoryPolicy { strict_precedence, full_history };

struct AuthorAttribution {
    std::string author_id;
    std::set<std::string> matched_signatures;
    double fractional_count = 0.0;
    int unique_count = 0;
    double share = 0.0;

    bool operator==(const AuthorAttribution&) const = default;
};

struct AttributionResult {
    std::string paper_id;
    std::vector<AuthorAttribution> authors;  // in meta.authors order
    double total_attributed = 0.0;           // signatures matched by >= 1 author

    bool operator==(const AttributionResult&) const = default;
};

// For each signature defined in the paper, every author whose history
// contains it receives 1/|matching authors| credit. Shares normalize
// fractional counts over the number of matched signatures; papers with no
// matches come back with all-zero shares.
AttributionResult attribute_paper(const latex::ParsedPaper& parsed,
                                  const corpus::PaperMeta& meta,
                                  const corpus::HistoryDB& db,
                                  HistoryPolicy policy = HistoryPolicy::strict_precedence);

// Pseudo-buckets used alongside the canonical labels in focus output.
inline constexpr const char* kOtherBucket = "other";        // heading matched no rule
inline constexpr const char* kUnsectionedBucket = "unsectioned";  // outside all spans

struct AuthorFocus {
    std::string author_id;
    // bucket -> number of distinct matched macro names with >= 1 usage there
    std::map<std::string, int> distinct_counts;
    // bucket -> distinct_counts[bucket] / sum over buckets; sums to 1
    std::map<std::string, double> fraction;
    int denominator = 0;  // sum over buckets of distinct_counts

    bool operator==(const AuthorFocus&) const = default;
};

struct SectionFocus {
    std::string paper_id;
    std::vector<AuthorFocus> authors;  // only authors with >= 1 located usage

    bool operator==(const SectionFocus&) const = default;
};

// A macro name is assigned to every bucket it appears in; the per-bucket
// fraction divides by the sum of per-bucket distinct counts, so an author's
// fractions (canonical labels plus the two pseudo-buckets) always sum to 1.
SectionFocus section_focus(const latex::ParsedPaper& parsed, const corpus::PaperMeta& meta,
                           const corpus::HistoryDB& db,
                           const taxonomy::TaxonomyConfig& taxonomy,
                           HistoryPolicy policy = HistoryPolicy::strict_precedence);

struct SectionContributionFlag {
    std::string paper_id;
    std::string author_id;
    std::string canonical_section;
    bool contributed = false;

    bool operator==(const SectionContributionFlag&) const = default;
};

// One flag per (author, canonical label); true iff the author's distinct
// count for that label is >= 1. Pseudo-buckets are not flagged.
std::vector<SectionContributionFlag> contribution_flags(
    const SectionFocus& focus, const taxonomy::TaxonomyConfig& taxonomy);

}  // namespace macrotrace::attribution
