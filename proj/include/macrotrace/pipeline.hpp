#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace macrotrace::pipeline {

// Mirrors the CLI flags. Paths are resolved relative to the working directory.
struct RunConfig {
    std::string manifest_path;
    std::string out_dir = "out";
    std::string mode = "auto";       // name_body | name_only | auto
    std::string taxonomy;            // eight | six | config file path; empty = auto
    int threshold = 1;               // predicted writer: unique_count >= threshold
    std::string history = "strict";  // strict | full
    int workers = 1;
    std::uint64_t seed = 0;
    int bootstrap = 0;               // OLS residual-bootstrap replicates; 0 = classical
    int max_team_size = 8;
    int cluster_k = 2;
    bool force = false;              // ignore the parse cache
};

// Exit codes shared with the CLI: 0 ok, 1 usage error, 2 data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Parse every manifest paper into out/cache/parsed.jsonl. Per-paper failures
// go to cache/ingest_errors.jsonl and do not abort the run; exits 0 iff at
// least one paper parsed.
int cmd_ingest(const RunConfig& config, std::ostream& log);

// Build and persist the per-author signature history database (out/history.db).
int cmd_build_db(const RunConfig& config, std::ostream& log);

// Attribute every paper; writes attribution + section-focus record files and
// the zero-attribution exclusion list.
int cmd_attribute(const RunConfig& config, std::ostream& log);

// which: fig1 | fig2 | fig3 | fig4 | all
int cmd_analyze(const RunConfig& config, const std::string& which, std::ostream& log);

// Exactly one of truth_path / editranks_path must be non-empty.
int cmd_validate(const RunConfig& config, const std::string& truth_path,
                 const std::string& editranks_path, std::ostream& log);

int cmd_dump_taxonomy(const RunConfig& config, std::ostream& out);

}  // namespace macrotrace::pipeline
