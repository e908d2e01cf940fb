#include "macrotrace/attribution.hpp"

#include <algorithm>

#include "macrotrace/errors.hpp"

namespace macrotrace::attribution {

namespace {

bool author_matches(const corpus::HistoryDB& db, const std::string& author,
                    const std::string& key, const corpus::PaperMeta& meta,
                    HistoryPolicy policy) {
    auto ait = db.entries.find(author);
    if (ait == db.entries.end()) return false;
    auto kit = ait->second.find(key);
    if (kit == ait->second.end()) return false;
    const corpus::HistoryEntry& entry = kit->second;
    if (policy == HistoryPolicy::strict_precedence) return entry.first_seen < meta.date;
    // full history: everything except entries known solely from this paper
    return !(entry.paper_count == 1 && entry.only_paper == meta.paper_id);
}

// Defined signatures, deduplicated and in sorted key order. Credit is
// accumulated in this order on both the implementation and oracle sides, so
// equal inputs give bit-identical sums.
std::vector<std::string> sorted_signature_keys(const latex::ParsedPaper& parsed,
                                               corpus::SignatureMode mode) {
    std::set<std::string> keys;
    for (const latex::MacroDefinition& d : parsed.definitions)
        keys.insert(corpus::signature_of(d, mode).key);
    return {keys.begin(), keys.end()};
}

}  // namespace

AttributionResult attribute_paper(const latex::ParsedPaper& parsed,
                                  const corpus::PaperMeta& meta,
                                  const corpus::HistoryDB& db, HistoryPolicy policy) {
    if (meta.authors.empty())
        throw DataError("paper '" + meta.paper_id + "' has no authors");

    AttributionResult result;
    result.paper_id = parsed.paper_id;
    result.authors.reserve(meta.authors.size());
    for (const std::string& a : meta.authors) result.authors.push_back({a});

    for (const std::string& key : sorted_signature_keys(parsed, db.mode)) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < meta.authors.size(); ++i)
            if (author_matches(db, meta.authors[i], key, meta, policy)) members.push_back(i);
        if (members.empty()) continue;
        result.total_attributed += 1.0;
        const double credit = 1.0 / static_cast<double>(members.size());
        for (std::size_t i : members) {
            result.authors[i].matched_signatures.insert(key);
            result.authors[i].fractional_count += credit;
            result.authors[i].unique_count += 1;
        }
    }
    if (result.total_attributed > 0.0)
        for (AuthorAttribution& a : result.authors)
            a.share = a.fractional_count / result.total_attributed;
    return result;
}

SectionFocus section_focus(const latex::ParsedPaper& parsed, const corpus::PaperMeta& meta,
                           const corpus::HistoryDB& db,
                           const taxonomy::TaxonomyConfig& taxonomy_cfg,
                           HistoryPolicy policy) {
    taxonomy::validate(taxonomy_cfg);
    AttributionResult attr = attribute_paper(parsed, meta, db, policy);

    // section index -> bucket label
    std::vector<std::string> span_bucket(parsed.sections.size());
    for (const latex::SectionSpan& s : parsed.sections) {
        auto label = taxonomy::canonicalize(s.raw_heading, taxonomy_cfg);
        span_bucket[s.index] = label ? *label : std::string(kOtherBucket);
    }

    // macro name -> buckets it is used in
    std::map<std::string, std::set<std::string>> name_buckets;
    for (const latex::MacroUsage& u : parsed.usages) {
        std::string bucket = u.section_index ? span_bucket[*u.section_index]
                                             : std::string(kUnsectionedBucket);
        name_buckets[u.name].insert(std::move(bucket));
    }

    SectionFocus focus;
    focus.paper_id = parsed.paper_id;
    for (const AuthorAttribution& a : attr.authors) {
        std::set<std::string> matched_names;
        for (const std::string& key : a.matched_signatures) {
            std::size_t nul = key.find('\0');
            matched_names.insert(nul == std::string::npos ? key : key.substr(0, nul));
        }
        AuthorFocus af;
        af.author_id = a.author_id;
        for (const std::string& name : matched_names) {
            auto it = name_buckets.find(name);
            if (it == name_buckets.end()) continue;  // defined but never used
            for (const std::string& bucket : it->second) af.distinct_counts[bucket] += 1;
        }
        for (const auto& [bucket, count] : af.distinct_counts) af.denominator += count;
        if (af.denominator == 0) continue;  // no located usage for this author
        for (const auto& [bucket, count] : af.distinct_counts)
            af.fraction[bucket] =
                static_cast<double>(count) / static_cast<double>(af.denominator);
        focus.authors.push_back(std::move(af));
    }
    return focus;
}

std::vector<SectionContributionFlag> contribution_flags(
    const SectionFocus& focus, const taxonomy::TaxonomyConfig& taxonomy_cfg) {
    std::vector<SectionContributionFlag> flags;
    for (const AuthorFocus& af : focus.authors) {
        for (const std::string& label : taxonomy_cfg.labels) {
            auto it = af.distinct_counts.find(label);
            bool contributed = it != af.distinct_counts.end() && it->second >= 1;
            flags.push_back({focus.paper_id, af.author_id, label, contributed});
        }
    }
    return flags;
}

}  // namespace macrotrace::attribution
