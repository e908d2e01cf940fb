#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace macrotrace::analytics {

struct RegressionResult {
    std::vector<std::string> terms;
    std::vector<double> coef;
    std::vector<double> std_err;
    std::vector<double> ci_low;   // 95% two-sided
    std::vector<double> ci_high;
    std::vector<double> p_value;  // two-sided, t distribution with n-k dof
    long n_obs = 0;
    double r_squared = 0.0;
};

struct OlsOptions {
    int bootstrap_reps = 0;  // > 0: residual-bootstrap standard errors
    std::uint64_t seed = 0;
};

// Least squares over the given design columns (intercept included by the
// caller). Classical homoskedastic standard errors unless bootstrap_reps is
// set. Rank-deficient designs raise DataError naming the collinear columns.
RegressionResult ols_fit(const std::vector<std::string>& term_names,
                         const std::vector<std::vector<double>>& columns,
                         const std::vector<double>& response,
                         const OlsOptions& options = {});

struct ContributionRecord {
    std::string paper_id;
    int author_rank = 1;  // 1-based position in the author list
    int team_size = 1;
    std::string discipline;
    double contribution = 0.0;  // unique attributed macro count
};

enum class Stratify { team_size, discipline };

struct StratumResult {
    std::string stratum;
    RegressionResult fit;
};

struct ModelRun {
    std::vector<StratumResult> results;
    std::vector<std::string> notices;  // skipped strata etc.
};

// Per stratum: contribution ~ 1 + rank dummies (reference = rank 1). Strata
// with fewer than two distinct ranks are skipped with a notice.
ModelRun author_order_model(std::vector<ContributionRecord> records, Stratify stratify,
                            const OlsOptions& options = {});

struct FocusRecord {
    std::string paper_id;
    std::string author_id;
    int author_rank = 1;
    int team_size = 1;
    std::string section;
    double fraction = 0.0;
};

// Per canonical section: fraction ~ 1 + rank dummies + team-size dummies
// (fixed effects; references are rank 1 and the smallest team size).
// Sections without observations are omitted.
ModelRun section_order_model(std::vector<FocusRecord> records,
                             const std::vector<std::string>& section_labels,
                             const OlsOptions& options = {});

struct FlagRecord {
    std::string paper_id;
    std::string author_id;
    std::string section;  // a contributed canonical section
};

struct CoContributionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> P;       // P[i][j]; NaN marks undefined rows
    std::vector<std::vector<long>> pair_counts;
    std::vector<long> support;                // N[i]
    long n_records = 0;                       // qualifying author-paper records
};

// P[i][j] = P(contributed to j | contributed to i) over author-paper records
// with >= 2 distinct contributed sections; diagonal 1; rows with zero support
// are NaN.
CoContributionMatrix cocontribution(const std::vector<FlagRecord>& flags,
                                    const std::vector<std::string>& labels);

struct ClusterTree {
    struct Merge {
        int left = 0;   // cluster ids; leaves are 0..n-1, merge m creates n+m
        int right = 0;
        double height = 0.0;
        int size = 0;
    };
    std::vector<Merge> merges;
    std::vector<int> cut;  // cluster id per label index, 0..k-1
    int k = 0;
};

// Ward linkage on d(i,j) = 1 - (P[i][j] + P[j][i]) / 2 via the standard
// recurrence update; cut extracted after n-k merges.
ClusterTree ward_cluster(const CoContributionMatrix& matrix, int k);

struct ValidationMetrics {
    long n_papers = 0;           // papers contributing to the recall average
    double precision = 0.0;      // macro average over papers with predictions
    double recall = 0.0;
    long precision_excluded = 0; // papers with empty prediction sets
    long truth_excluded = 0;     // papers with empty truth sets
};

// Macro-averaged per-paper precision/recall over papers present in both maps.
// Papers only on one side are appended to `mismatches` and skipped.
ValidationMetrics precision_recall(const std::map<std::string, std::set<std::string>>& predicted,
                                   const std::map<std::string, std::set<std::string>>& truth,
                                   std::vector<std::string>* mismatches = nullptr);

struct Correlation {
    double r = 0.0;
    double p = 0.0;  // two-sided, t with n-2 dof
    long n = 0;
};

// Sample Pearson correlation; requires equal lengths >= 3 and nonzero
// variance on both sides.
Correlation pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace macrotrace::analytics
