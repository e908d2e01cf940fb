#include "macrotrace/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "macrotrace/errors.hpp"
#include "macrotrace/rng.hpp"
#include "macrotrace/stats.hpp"

namespace macrotrace::analytics {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& columns, std::size_t rows) {
    Eigen::MatrixXd X(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) X(static_cast<long>(i), static_cast<long>(j)) = columns[j][i];
    return X;
}

}  // namespace

RegressionResult ols_fit(const std::vector<std::string>& term_names,
                         const std::vector<std::vector<double>>& columns,
                         const std::vector<double>& response, const OlsOptions& options) {
    const std::size_t n = response.size();
    const std::size_t k = columns.size();
    if (k == 0) throw DataError("ols_fit: no design columns");
    if (term_names.size() != k) throw DataError("ols_fit: term/column count mismatch");
    for (const auto& col : columns)
        if (col.size() != n) throw DataError("ols_fit: column length mismatch");
    if (n < k) throw DataError("ols_fit: fewer rows than columns");

    Eigen::MatrixXd X = to_matrix(columns, n);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) y(static_cast<long>(i)) = response[i];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (static_cast<std::size_t>(qr.rank()) < k) {
        // pivot order puts the dependent columns last
        std::ostringstream msg;
        msg << "ols_fit: design is rank-deficient; collinear columns:";
        const auto& perm = qr.colsPermutation().indices();
        for (long j = qr.rank(); j < static_cast<long>(k); ++j)
            msg << " " << term_names[static_cast<std::size_t>(perm(j))];
        throw DataError(msg.str());
    }

    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd resid = y - X * beta;
    const double rss = resid.squaredNorm();
    const double ymean = y.mean();
    const double tss = (y.array() - ymean).matrix().squaredNorm();
    const long dof = static_cast<long>(n) - static_cast<long>(k);

    const double yscale = std::max(1.0, y.cwiseAbs().maxCoeff());
    const bool exact_fit = std::sqrt(rss / static_cast<double>(n)) < 1e-12 * yscale;

    RegressionResult out;
    out.terms = term_names;
    out.n_obs = static_cast<long>(n);
    out.r_squared = tss > 0.0 ? 1.0 - rss / tss : (exact_fit ? 1.0 : 0.0);
    out.coef.resize(k);
    out.std_err.resize(k);
    out.ci_low.resize(k);
    out.ci_high.resize(k);
    out.p_value.resize(k);
    for (std::size_t j = 0; j < k; ++j) out.coef[j] = beta(static_cast<long>(j));

    std::vector<double> se(k, 0.0);
    if (options.bootstrap_reps > 0) {
        // residual bootstrap: resample residuals onto fitted values, refit
        Eigen::VectorXd fitted = X * beta;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<long>(k), 2);
        std::mt19937_64 gen(options.seed);
        Eigen::VectorXd ystar(n);
        for (int rep = 0; rep < options.bootstrap_reps; ++rep) {
            for (std::size_t i = 0; i < n; ++i)
                ystar(static_cast<long>(i)) =
                    fitted(static_cast<long>(i)) +
                    resid(static_cast<long>(rng::below(gen, n)));
            Eigen::VectorXd b = qr.solve(ystar);
            for (std::size_t j = 0; j < k; ++j) {
                sums(static_cast<long>(j), 0) += b(static_cast<long>(j));
                sums(static_cast<long>(j), 1) += b(static_cast<long>(j)) * b(static_cast<long>(j));
            }
        }
        const double reps = options.bootstrap_reps;
        for (std::size_t j = 0; j < k; ++j) {
            double mean = sums(static_cast<long>(j), 0) / reps;
            double var = sums(static_cast<long>(j), 1) / reps - mean * mean;
            se[j] = std::sqrt(std::max(0.0, var) * reps / std::max(1.0, reps - 1.0));
        }
    } else if (!exact_fit && dof > 0) {
        const double sigma2 = rss / static_cast<double>(dof);
        Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
        for (std::size_t j = 0; j < k; ++j)
            se[j] = std::sqrt(std::max(0.0, sigma2 * xtx_inv(static_cast<long>(j),
                                                             static_cast<long>(j))));
    }

    const double tcrit = dof > 0 ? stats::student_t_quantile(0.975, static_cast<double>(dof))
                                 : 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        out.std_err[j] = se[j];
        if (se[j] > 0.0 && dof > 0) {
            double t = out.coef[j] / se[j];
            out.p_value[j] = stats::student_t_two_sided_p(t, static_cast<double>(dof));
            out.ci_low[j] = out.coef[j] - tcrit * se[j];
            out.ci_high[j] = out.coef[j] + tcrit * se[j];
        } else {
            // exact fit (or saturated design): coefficients carry no sampling noise
            bool zero = std::fabs(out.coef[j]) < 1e-12 * yscale;
            out.p_value[j] = zero ? 1.0 : 0.0;
            out.ci_low[j] = out.coef[j];
            out.ci_high[j] = out.coef[j];
        }
    }
    return out;
}

namespace {

// rank dummies (reference = smallest rank) plus optional team-size fixed
// effects (reference = smallest team size)
struct DummyDesign {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

template <typename Row>
DummyDesign rank_dummy_design(const std::vector<Row>& rows, bool team_size_effects) {
    std::set<int> ranks, sizes;
    for (const Row& r : rows) {
        ranks.insert(r.author_rank);
        if (team_size_effects) sizes.insert(r.team_size);
    }
    DummyDesign d;
    const std::size_t n = rows.size();
    d.names.push_back("intercept");
    d.columns.emplace_back(n, 1.0);
    bool first = true;
    for (int rank : ranks) {
        if (first) {  // reference level
            first = false;
            continue;
        }
        std::vector<double> col(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (rows[i].author_rank == rank) col[i] = 1.0;
        d.names.push_back("rank_" + std::to_string(rank));
        d.columns.push_back(std::move(col));
    }
    if (team_size_effects) {
        bool first_size = true;
        for (int size : sizes) {
            if (first_size) {
                first_size = false;
                continue;
            }
            std::vector<double> col(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                if (rows[i].team_size == size) col[i] = 1.0;
            d.names.push_back("team_" + std::to_string(size));
            d.columns.push_back(std::move(col));
        }
    }
    return d;
}

}  // namespace

ModelRun author_order_model(std::vector<ContributionRecord> records, Stratify stratify,
                            const OlsOptions& options) {
    std::sort(records.begin(), records.end(),
              [](const ContributionRecord& a, const ContributionRecord& b) {
                  if (a.paper_id != b.paper_id) return a.paper_id < b.paper_id;
                  return a.author_rank < b.author_rank;
              });
    std::map<std::string, std::vector<ContributionRecord>> strata;
    for (ContributionRecord& r : records) {
        std::string key = stratify == Stratify::team_size ? std::to_string(r.team_size)
                                                          : r.discipline;
        strata[key].push_back(std::move(r));
    }

    ModelRun run;
    for (auto& [stratum, rows] : strata) {
        std::set<int> ranks;
        for (const ContributionRecord& r : rows) ranks.insert(r.author_rank);
        if (ranks.size() < 2) {
            run.notices.push_back("stratum '" + stratum +
                                  "' skipped: fewer than 2 distinct author ranks");
            continue;
        }
        DummyDesign design = rank_dummy_design(rows, false);
        std::vector<double> y;
        y.reserve(rows.size());
        for (const ContributionRecord& r : rows) y.push_back(r.contribution);
        run.results.push_back({stratum, ols_fit(design.names, design.columns, y, options)});
    }
    return run;
}

ModelRun section_order_model(std::vector<FocusRecord> records,
                             const std::vector<std::string>& section_labels,
                             const OlsOptions& options) {
    std::sort(records.begin(), records.end(), [](const FocusRecord& a, const FocusRecord& b) {
        if (a.paper_id != b.paper_id) return a.paper_id < b.paper_id;
        return a.author_rank < b.author_rank;
    });
    ModelRun run;
    for (const std::string& label : section_labels) {
        std::vector<FocusRecord> rows;
        for (const FocusRecord& r : records)
            if (r.section == label) rows.push_back(r);
        if (rows.empty()) continue;  // omitted from output
        std::set<int> ranks;
        for (const FocusRecord& r : rows) ranks.insert(r.author_rank);
        if (ranks.size() < 2) {
            run.notices.push_back("section '" + label +
                                  "' skipped: fewer than 2 distinct author ranks");
            continue;
        }
        DummyDesign design = rank_dummy_design(rows, true);
        std::vector<double> y;
        y.reserve(rows.size());
        for (const FocusRecord& r : rows) y.push_back(r.fraction);
        try {
            run.results.push_back({label, ols_fit(design.names, design.columns, y, options)});
        } catch (const DataError& e) {
            run.notices.push_back("section '" + label + "' skipped: " + e.what());
        }
    }
    return run;
}

CoContributionMatrix cocontribution(const std::vector<FlagRecord>& flags,
                                    const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> label_index;
    for (std::size_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = i;

    std::map<std::pair<std::string, std::string>, std::set<std::size_t>> by_author_paper;
    for (const FlagRecord& f : flags) {
        auto it = label_index.find(f.section);
        if (it == label_index.end())
            throw DataError("cocontribution: unknown section label '" + f.section + "'");
        by_author_paper[{f.paper_id, f.author_id}].insert(it->second);
    }

    const std::size_t m = labels.size();
    CoContributionMatrix out;
    out.labels = labels;
    out.support.assign(m, 0);
    out.pair_counts.assign(m, std::vector<long>(m, 0));
    out.P.assign(m, std::vector<double>(m, kNan));

    for (const auto& [key, sections] : by_author_paper) {
        if (sections.size() < 2) continue;  // needs >= 2 contributed sections
        out.n_records += 1;
        for (std::size_t i : sections) {
            out.support[i] += 1;
            for (std::size_t j : sections) out.pair_counts[i][j] += 1;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (out.support[i] == 0) continue;  // row stays NaN (undefined, not zero)
        for (std::size_t j = 0; j < m; ++j)
            out.P[i][j] = i == j ? 1.0
                                 : static_cast<double>(out.pair_counts[i][j]) /
                                       static_cast<double>(out.support[i]);
    }
    return out;
}

ClusterTree ward_cluster(const CoContributionMatrix& matrix, int k) {
    const int n = static_cast<int>(matrix.labels.size());
    if (k < 1 || k > n)
        throw DataError("ward_cluster: k must be between 1 and the number of labels");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::isnan(matrix.P[i][j]))
                throw DataError("ward_cluster: undefined entries in row '" +
                                matrix.labels[i] + "'");

    struct Cluster {
        int id;        // scipy-style: leaves 0..n-1, merge m creates n+m
        int smallest;  // smallest leaf index, for deterministic tie-breaking
        int size;
        bool active = true;
    };
    std::vector<Cluster> clusters;
    for (int i = 0; i < n; ++i) clusters.push_back({i, i, 1, true});

    // symmetrized dissimilarity
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) dist[i][j] = 1.0 - 0.5 * (matrix.P[i][j] + matrix.P[j][i]);

    ClusterTree tree;
    tree.k = k;
    std::vector<std::vector<int>> members(n);
    for (int i = 0; i < n; ++i) members[i] = {i};

    std::vector<int> active;  // slots
    for (int i = 0; i < n; ++i) active.push_back(i);

    std::vector<int> cut_assignment;
    int merges_done = 0;
    while (static_cast<int>(active.size()) > 1) {
        int best_a = -1, best_b = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < active.size(); ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                int a = active[x], b = active[y];
                double d = dist[a][b];
                if (d < best_d ||
                    (d == best_d && best_a >= 0 &&
                     std::min(clusters[a].smallest, clusters[b].smallest) <
                         std::min(clusters[best_a].smallest, clusters[best_b].smallest))) {
                    best_d = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        int a = best_a, b = best_b;
        // Ward recurrence (Lance-Williams) on squared distances
        const double na = clusters[a].size, nb = clusters[b].size;
        for (int m : active) {
            if (m == a || m == b) continue;
            const double nm = clusters[m].size;
            double d2 = ((na + nm) * dist[a][m] * dist[a][m] +
                         (nb + nm) * dist[b][m] * dist[b][m] - nm * best_d * best_d) /
                        (na + nb + nm);
            dist[a][m] = dist[m][a] = std::sqrt(std::max(0.0, d2));
        }
        tree.merges.push_back({clusters[a].id, clusters[b].id, best_d,
                               clusters[a].size + clusters[b].size});
        clusters[a].id = n + merges_done;
        clusters[a].size += clusters[b].size;
        clusters[a].smallest = std::min(clusters[a].smallest, clusters[b].smallest);
        clusters[b].active = false;
        members[a].insert(members[a].end(), members[b].begin(), members[b].end());
        active.erase(std::remove(active.begin(), active.end(), b), active.end());
        ++merges_done;

        if (static_cast<int>(active.size()) == k) {
            // snapshot the k-cluster assignment, numbered by smallest member
            std::vector<int> order(active.begin(), active.end());
            std::sort(order.begin(), order.end(), [&](int x, int y) {
                return clusters[x].smallest < clusters[y].smallest;
            });
            cut_assignment.assign(n, -1);
            for (std::size_t c = 0; c < order.size(); ++c)
                for (int leaf : members[order[c]]) cut_assignment[leaf] = static_cast<int>(c);
        }
    }
    if (k == n) {
        cut_assignment.resize(n);
        for (int i = 0; i < n; ++i) cut_assignment[i] = i;
    }
    tree.cut = std::move(cut_assignment);
    return tree;
}

ValidationMetrics precision_recall(
    const std::map<std::string, std::set<std::string>>& predicted,
    const std::map<std::string, std::set<std::string>>& truth,
    std::vector<std::string>* mismatches) {
    ValidationMetrics out;
    for (const auto& [paper, _] : predicted)
        if (!truth.count(paper) && mismatches)
            mismatches->push_back("paper '" + paper + "' predicted but absent from truth");
    double precision_sum = 0.0, recall_sum = 0.0;
    long n_prec = 0;
    for (const auto& [paper, true_set] : truth) {
        auto pit = predicted.find(paper);
        if (pit == predicted.end()) {
            if (mismatches)
                mismatches->push_back("paper '" + paper + "' in truth but not predicted");
            continue;
        }
        if (true_set.empty()) {
            out.truth_excluded += 1;
            continue;
        }
        const std::set<std::string>& pred = pit->second;
        std::size_t inter = 0;
        for (const std::string& a : pred) inter += true_set.count(a);
        if (pred.empty()) {
            out.precision_excluded += 1;
        } else {
            precision_sum += static_cast<double>(inter) / static_cast<double>(pred.size());
            n_prec += 1;
        }
        recall_sum += static_cast<double>(inter) / static_cast<double>(true_set.size());
        out.n_papers += 1;
    }
    out.precision = n_prec > 0 ? precision_sum / static_cast<double>(n_prec) : 0.0;
    out.recall = out.n_papers > 0 ? recall_sum / static_cast<double>(out.n_papers) : 0.0;
    return out;
}

Correlation pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DataError("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw DataError("pearson: need at least 3 observations");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw DataError("pearson: zero variance input");
    Correlation out;
    out.n = static_cast<long>(n);
    out.r = sxy / std::sqrt(sxx * syy);
    out.r = std::clamp(out.r, -1.0, 1.0);
    const double denom = 1.0 - out.r * out.r;
    if (denom <= 0.0) {
        out.p = 0.0;
    } else {
        double t = out.r * std::sqrt(static_cast<double>(n - 2) / denom);
        out.p = stats::student_t_two_sided_p(t, static_cast<double>(n - 2));
    }
    return out;
}

}  // namespace macrotrace::analytics
