#include "disentanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "independence.hpp"
#include "mic.hpp"
#include "rng.hpp"
#include "threads.hpp"

namespace crl {

namespace {

constexpr double kLassoLambdaFraction = 0.01;
constexpr int kLassoMaxIterations = 1000;
constexpr double kLassoTolerance = 1e-6;
constexpr double kTinyVariance = 1e-12;

void require_same_rows(const DataTable& factors, const DataTable& latents) {
    if (factors.rows() != latents.rows()) {
        fail(ErrorKind::Argument, "factors and latents differ in row count (" +
                                      std::to_string(factors.rows()) + " vs " +
                                      std::to_string(latents.rows()) + ")");
    }
}

double entropy_nats(const std::vector<double>& weights) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double w : weights) {
        if (w > 0.0) {
            double p = w / total;
            h -= p * std::log(p);
        }
    }
    return h;
}

std::vector<std::vector<int>> bin_all_columns(const DataTable& t, int bins) {
    std::vector<std::vector<int>> codes(t.cols());
    for (size_t c = 0; c < t.cols(); ++c) codes[c] = equal_frequency_bins(t.column_values(c), bins);
    return codes;
}

struct JointStats {
    double h_a = 0.0;
    double h_b = 0.0;
    double h_ab = 0.0;
    double mi = 0.0;
};

JointStats joint_stats(const std::vector<int>& a, int ka, const std::vector<int>& b, int kb) {
    std::vector<double> joint(static_cast<size_t>(ka) * kb, 0.0);
    std::vector<double> ma(ka, 0.0);
    std::vector<double> mb(kb, 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        joint[static_cast<size_t>(a[i]) * kb + b[i]] += 1.0;
        ma[a[i]] += 1.0;
        mb[b[i]] += 1.0;
    }
    JointStats s;
    s.h_a = entropy_nats(ma);
    s.h_b = entropy_nats(mb);
    s.h_ab = entropy_nats(joint);
    s.mi = std::max(0.0, s.h_a + s.h_b - s.h_ab);
    return s;
}

// Coordinate-descent lasso on standardized predictors and a centered target;
// lambda = 0.01 * max |cov(x_j, y)|. Objective (1/2n)||y - Xb||^2 + lambda |b|_1.
std::vector<double> fit_lasso(const std::vector<std::vector<double>>& x_std,
                              const std::vector<double>& y_centered) {
    const size_t p = x_std.size();
    const size_t n = y_centered.size();
    const double dn = static_cast<double>(n);

    double max_cov = 0.0;
    std::vector<double> cov(p, 0.0);
    for (size_t j = 0; j < p; ++j) {
        double acc = 0.0;
        for (size_t i = 0; i < n; ++i) acc += x_std[j][i] * y_centered[i];
        cov[j] = acc / dn;
        max_cov = std::max(max_cov, std::abs(cov[j]));
    }
    const double lambda = kLassoLambdaFraction * max_cov;

    std::vector<double> beta(p, 0.0);
    std::vector<double> residual = y_centered;
    std::vector<char> active(p, 0);
    for (size_t j = 0; j < p; ++j) {
        double var = 0.0;
        for (size_t i = 0; i < n; ++i) var += x_std[j][i] * x_std[j][i];
        active[j] = var > kTinyVariance ? 1 : 0;  // standardized columns have var n
    }
    for (int iter = 0; iter < kLassoMaxIterations; ++iter) {
        double max_change = 0.0;
        for (size_t j = 0; j < p; ++j) {
            if (!active[j]) continue;
            double rho = beta[j];
            double acc = 0.0;
            for (size_t i = 0; i < n; ++i) acc += x_std[j][i] * residual[i];
            rho += acc / dn;
            double updated = 0.0;
            if (rho > lambda) {
                updated = rho - lambda;
            } else if (rho < -lambda) {
                updated = rho + lambda;
            }
            double delta = updated - beta[j];
            if (delta != 0.0) {
                for (size_t i = 0; i < n; ++i) residual[i] -= delta * x_std[j][i];
                beta[j] = updated;
            }
            max_change = std::max(max_change, std::abs(delta));
        }
        if (max_change < kLassoTolerance) break;
    }
    return beta;
}

struct Standardized {
    std::vector<std::vector<double>> columns;
    std::vector<double> mean;
    std::vector<double> sd;
};

Standardized standardize(const DataTable& t, const std::vector<size_t>& rows) {
    Standardized s;
    const double dn = static_cast<double>(rows.size());
    for (size_t c = 0; c < t.cols(); ++c) {
        double mean = 0.0;
        for (size_t r : rows) mean += t.at(r, c);
        mean /= dn;
        double var = 0.0;
        for (size_t r : rows) {
            double d = t.at(r, c) - mean;
            var += d * d;
        }
        var /= dn;
        double sd = std::sqrt(var);
        std::vector<double> col(rows.size(), 0.0);
        if (sd > kTinyVariance) {
            for (size_t i = 0; i < rows.size(); ++i) col[i] = (t.at(rows[i], c) - mean) / sd;
        }
        s.columns.push_back(std::move(col));
        s.mean.push_back(mean);
        s.sd.push_back(sd);
    }
    return s;
}

// One prediction target per numeric factor; categorical factors expand to
// one-hot indicator targets that are re-aggregated per factor afterwards.
struct TargetGroup {
    std::string factor;
    std::vector<std::vector<double>> targets;
};

std::vector<TargetGroup> expand_targets(const DataTable& factors) {
    std::vector<TargetGroup> groups;
    for (size_t c = 0; c < factors.cols(); ++c) {
        TargetGroup g;
        g.factor = factors.column(c).name;
        auto col = factors.column_values(c);
        if (factors.column(c).is_categorical()) {
            int card = factors.column(c).cardinality;
            for (int level = 0; level < card; ++level) {
                std::vector<double> target(col.size(), 0.0);
                for (size_t r = 0; r < col.size(); ++r) target[r] = col[r] == level ? 1.0 : 0.0;
                g.targets.push_back(std::move(target));
            }
        } else {
            g.targets.emplace_back(col.begin(), col.end());
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

double normalized_entropy(const std::vector<double>& weights, size_t categories) {
    if (categories <= 1) return 0.0;
    return entropy_nats(weights) / std::log(static_cast<double>(categories));
}

}  // namespace

double binned_mi(const std::vector<int>& a, int ka, const std::vector<int>& b, int kb) {
    return joint_stats(a, ka, b, kb).mi;
}

std::pair<AssociationMatrix, AssociationMatrix> characteristic_matrices(const DataTable& factors,
                                                                        const DataTable& latents,
                                                                        Warnings* warnings) {
    require_same_rows(factors, latents);
    const size_t nf = factors.cols();
    const size_t nl = latents.cols();
    std::vector<CharacteristicStats> stats(nf * nl);
    std::vector<Warnings> pair_warnings(nf * nl);
    parallel_for(nf * nl, [&](size_t idx) {
        size_t i = idx / nl;
        size_t j = idx % nl;
        stats[idx] = characteristic_stats(factors.column_values(i), latents.column_values(j),
                                          &pair_warnings[idx]);
    });
    for (const auto& w : pair_warnings) {
        for (const auto& msg : w) warn(warnings, msg);
    }
    AssociationMatrix mic_m;
    AssociationMatrix tic_m;
    for (auto* m : {&mic_m, &tic_m}) {
        m->matrix.rows = nf;
        m->matrix.cols = nl;
        m->matrix.values.resize(nf * nl);
        for (size_t i = 0; i < nf; ++i) m->factor_names.push_back(factors.column(i).name);
        for (size_t j = 0; j < nl; ++j) m->latent_names.push_back(latents.column(j).name);
    }
    mic_m.metric = "mic";
    tic_m.metric = "tic";
    for (size_t idx = 0; idx < stats.size(); ++idx) {
        mic_m.matrix.values[idx] = stats[idx].mic;
        tic_m.matrix.values[idx] = stats[idx].tic;
    }
    return {std::move(mic_m), std::move(tic_m)};
}

AssociationMatrix association_matrix(const DataTable& factors, const DataTable& latents,
                                     const std::string& metric, Warnings* warnings) {
    if (metric != "mic" && metric != "tic") {
        fail(ErrorKind::Argument, "unknown association metric '" + metric +
                                      "' (expected mic or tic)");
    }
    auto [mic_m, tic_m] = characteristic_matrices(factors, latents, warnings);
    return metric == "mic" ? std::move(mic_m) : std::move(tic_m);
}

double irs(const DataTable& factors, const DataTable& latents, int bins, Warnings* warnings) {
    require_same_rows(factors, latents);
    const size_t n = factors.rows();
    if (bins < 2) fail(ErrorKind::Argument, "bins must be >= 2");
    if (n < static_cast<size_t>(10) * static_cast<size_t>(bins)) {
        fail(ErrorKind::Argument, "IRS needs at least 10 * bins samples");
    }
    auto fb = bin_all_columns(factors, bins);
    auto zb = bin_all_columns(latents, bins);

    double weighted = 0.0;
    double weight_total = 0.0;
    for (size_t j = 0; j < latents.cols(); ++j) {
        size_t best_factor = 0;
        double best_mi = -1.0;
        for (size_t k = 0; k < factors.cols(); ++k) {
            double mi = binned_mi(fb[k], bins, zb[j], bins);
            if (mi > best_mi) {
                best_mi = mi;
                best_factor = k;
            }
        }
        auto z = latents.column_values(j);
        double mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(n);
        double global_max = 0.0;
        for (double v : z) global_max = std::max(global_max, std::abs(v - mean));
        double score;
        if (global_max <= kTinyVariance) {
            score = 1.0;  // constant latent never moves
        } else {
            // Expected (over realizations of the associated factor) maximal
            // deviation of this latent from its conditional mean.
            std::vector<double> sum(bins, 0.0);
            std::vector<double> count(bins, 0.0);
            for (size_t r = 0; r < n; ++r) {
                sum[fb[best_factor][r]] += z[r];
                count[fb[best_factor][r]] += 1.0;
            }
            std::vector<double> maxdev(bins, 0.0);
            for (size_t r = 0; r < n; ++r) {
                int v = fb[best_factor][r];
                double dev = std::abs(z[r] - sum[v] / count[v]);
                maxdev[v] = std::max(maxdev[v], dev);
            }
            double expected = 0.0;
            for (int v = 0; v < bins; ++v) {
                if (count[v] > 0) expected += (count[v] / static_cast<double>(n)) * maxdev[v];
            }
            score = std::clamp(1.0 - expected / global_max, 0.0, 1.0);
        }
        weighted += best_mi * score;
        weight_total += best_mi;
    }
    if (weight_total <= 0.0) {
        warn(warnings, "degenerate latent space (no dependence on any factor); IRS is 1");
        return 1.0;
    }
    return std::clamp(weighted / weight_total, 0.0, 1.0);
}

double jemmig(const DataTable& factors, const DataTable& latents, int bins, Warnings* warnings) {
    (void)warnings;
    require_same_rows(factors, latents);
    if (bins < 2) fail(ErrorKind::Argument, "bins must be >= 2");
    if (factors.rows() < static_cast<size_t>(10) * static_cast<size_t>(bins)) {
        fail(ErrorKind::Argument, "JEMMIG needs at least 10 * bins samples");
    }
    if (latents.cols() < 2) {
        fail(ErrorKind::Argument, "JEMMIG needs at least 2 latent dimensions");
    }
    auto fb = bin_all_columns(factors, bins);
    auto zb = bin_all_columns(latents, bins);
    const double ln2 = std::log(2.0);
    const double log2_bins = std::log2(static_cast<double>(bins));

    double total = 0.0;
    for (size_t k = 0; k < factors.cols(); ++k) {
        double best_mi = -1.0;
        double runner_mi = -1.0;
        double best_joint = 0.0;
        double h_y = 0.0;
        for (size_t j = 0; j < latents.cols(); ++j) {
            auto s = joint_stats(fb[k], bins, zb[j], bins);
            h_y = s.h_a;
            if (s.mi > best_mi) {
                runner_mi = best_mi;
                best_mi = s.mi;
                best_joint = s.h_ab;
            } else if (s.mi > runner_mi) {
                runner_mi = s.mi;
            }
        }
        double raw_bits = (best_joint - best_mi + std::max(runner_mi, 0.0)) / ln2;
        double h_y_bits = h_y / ln2;
        double denom = h_y_bits + log2_bins;
        double score = denom > 0.0 ? (denom - raw_bits) / denom : 0.0;
        total += std::clamp(score, 0.0, 1.0);
    }
    return total / static_cast<double>(factors.cols());
}

DciResult dci(const DataTable& factors, const DataTable& latents, uint64_t seed,
              Warnings* warnings) {
    require_same_rows(factors, latents);
    const size_t n = factors.rows();
    const size_t p = latents.cols();
    const size_t nf = factors.cols();
    if (n < 10 * p) {
        fail(ErrorKind::Argument, "DCI needs at least 10 samples per latent dimension");
    }

    std::vector<size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);
    auto groups = expand_targets(factors);

    // Importance from the full-data fit.
    auto full = standardize(latents, all_rows);
    DciResult result;
    result.importance.rows = p;
    result.importance.cols = nf;
    result.importance.values.assign(p * nf, 0.0);
    for (size_t i = 0; i < nf; ++i) {
        for (const auto& target : groups[i].targets) {
            double mean = std::accumulate(target.begin(), target.end(), 0.0) /
                          static_cast<double>(n);
            std::vector<double> centered(n);
            for (size_t r = 0; r < n; ++r) centered[r] = target[r] - mean;
            auto beta = fit_lasso(full.columns, centered);
            for (size_t j = 0; j < p; ++j) {
                result.importance.values[j * nf + i] += std::abs(beta[j]);
            }
        }
    }

    double grand = std::accumulate(result.importance.values.begin(),
                                   result.importance.values.end(), 0.0);
    if (grand <= 0.0) {
        warn(warnings, "all-zero importance matrix; disentanglement and completeness are 0");
        result.disentanglement = 0.0;
        result.completeness = 0.0;
    } else {
        for (size_t j = 0; j < p; ++j) {
            std::vector<double> row(nf, 0.0);
            double row_sum = 0.0;
            for (size_t i = 0; i < nf; ++i) {
                row[i] = result.importance.values[j * nf + i];
                row_sum += row[i];
            }
            if (row_sum <= 0.0) continue;  // latent with no importance carries no weight
            double dj = 1.0 - normalized_entropy(row, nf);
            result.disentanglement += (row_sum / grand) * dj;
        }
        for (size_t i = 0; i < nf; ++i) {
            std::vector<double> col(p, 0.0);
            double col_sum = 0.0;
            for (size_t j = 0; j < p; ++j) {
                col[j] = result.importance.values[j * nf + i];
                col_sum += col[j];
            }
            double ci = col_sum > 0.0 ? 1.0 - normalized_entropy(col, p) : 0.0;
            result.completeness += ci / static_cast<double>(nf);
        }
        result.disentanglement = std::clamp(result.disentanglement, 0.0, 1.0);
        result.completeness = std::clamp(result.completeness, 0.0, 1.0);
    }

    // Informativeness on a held-out fifth of the data.
    std::vector<size_t> shuffled = all_rows;
    Rng rng(seed);
    for (size_t i = n - 1; i > 0; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i + 1));
        std::swap(shuffled[i], shuffled[j]);
    }
    const size_t test_size = std::max<size_t>(1, n / 5);
    std::vector<size_t> test_rows(shuffled.begin(), shuffled.begin() + test_size);
    std::vector<size_t> train_rows(shuffled.begin() + test_size, shuffled.end());
    if (train_rows.empty()) fail(ErrorKind::Argument, "DCI split leaves no training rows");

    auto train = standardize(latents, train_rows);
    for (size_t i = 0; i < nf; ++i) {
        double nmse_sum = 0.0;
        for (const auto& target : groups[i].targets) {
            const size_t tn = train_rows.size();
            double mean = 0.0;
            for (size_t r : train_rows) mean += target[r];
            mean /= static_cast<double>(tn);
            std::vector<double> centered(tn);
            for (size_t t = 0; t < tn; ++t) centered[t] = target[train_rows[t]] - mean;
            auto beta = fit_lasso(train.columns, centered);

            double mse = 0.0;
            double test_mean = 0.0;
            for (size_t r : test_rows) test_mean += target[r];
            test_mean /= static_cast<double>(test_rows.size());
            double test_var = 0.0;
            for (size_t r : test_rows) {
                double prediction = mean;
                for (size_t j = 0; j < p; ++j) {
                    if (train.sd[j] > kTinyVariance) {
                        prediction += beta[j] * (latents.at(r, j) - train.mean[j]) / train.sd[j];
                    }
                }
                double err = prediction - target[r];
                mse += err * err;
                double dv = target[r] - test_mean;
                test_var += dv * dv;
            }
            mse /= static_cast<double>(test_rows.size());
            test_var /= static_cast<double>(test_rows.size());
            if (test_var <= kTinyVariance) {
                nmse_sum += mse <= kTinyVariance ? 0.0 : 1.0;
            } else {
                nmse_sum += mse / test_var;
            }
        }
        double nmse = nmse_sum / static_cast<double>(groups[i].targets.size());
        result.informativeness += std::max(0.0, 1.0 - nmse) / static_cast<double>(nf);
    }
    result.informativeness = std::min(result.informativeness, 1.0);
    return result;
}

SuiteResult disentanglement_suite(const DataTable& factors, const DataTable& latents,
                                  const SuiteConfig& config, Warnings* warnings) {
    SuiteResult result;
    if (config.mic || config.tic) {
        auto [mic_m, tic_m] = characteristic_matrices(factors, latents, warnings);
        if (config.mic) {
            auto match = hungarian_match(mic_m.matrix);
            result.mic = std::clamp(match.total / static_cast<double>(mic_m.matrix.rows), 0.0, 1.0);
            result.mic_matching = std::move(match);
        }
        if (config.tic) {
            auto match = hungarian_match(tic_m.matrix);
            result.tic = std::clamp(match.total / static_cast<double>(tic_m.matrix.rows), 0.0, 1.0);
            result.tic_matching = std::move(match);
        }
    }
    if (config.irs) result.irs = irs(factors, latents, config.bins, warnings);
    if (config.jemmig) result.jemmig = jemmig(factors, latents, config.bins, warnings);
    if (config.dci) {
        auto r = dci(factors, latents, config.seed, warnings);
        result.dci_d = r.disentanglement;
        result.dci_c = r.completeness;
        result.dci_i = r.informativeness;
    }
    return result;
}

}  // namespace crl
