#include "generation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

namespace crl {

namespace {

constexpr double kRowSumTolerance = 1e-6;

void require_same_shape(const DataTable& a, const DataTable& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorKind::Argument, std::string(what) + ": tables differ in shape (" +
                                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                      " vs " + std::to_string(b.rows()) + "x" +
                                      std::to_string(b.cols()) + ")");
    }
}

void require_unit_range(const DataTable& t, const char* what) {
    for (size_t c = 0; c < t.cols(); ++c) {
        for (double v : t.column_values(c)) {
            if (v < 0.0 || v > 1.0) {
                fail(ErrorKind::Validation, std::string(what) + ": values must lie in [0, 1], found " +
                                                std::to_string(v) + " in column '" +
                                                t.column(c).name + "'");
            }
        }
    }
}

Eigen::MatrixXd as_matrix(const DataTable& t) {
    Eigen::MatrixXd m(t.rows(), t.cols());
    for (size_t c = 0; c < t.cols(); ++c) {
        for (size_t r = 0; r < t.rows(); ++r) m(r, c) = t.at(r, c);
    }
    return m;
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (m + m.transpose()));
    Eigen::VectorXd eigenvalues = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * eigenvalues.asDiagonal() * solver.eigenvectors().transpose();
}

void require_embeddings(const DataTable& a, const DataTable& b) {
    if (a.cols() != b.cols()) {
        fail(ErrorKind::Argument, "embedding sets differ in dimension (" +
                                      std::to_string(a.cols()) + " vs " + std::to_string(b.cols()) +
                                      ")");
    }
    if (a.rows() < 2 || b.rows() < 2) {
        fail(ErrorKind::Argument, "each embedding set needs at least 2 samples");
    }
}

}  // namespace

double reconstruction_score(const DataTable& original, const DataTable& reconstructed,
                            ReconstructionMode mode) {
    require_same_shape(original, reconstructed, "reconstruction");
    require_unit_range(original, "reconstruction");
    require_unit_range(reconstructed, "reconstruction");
    double acc = 0.0;
    for (size_t c = 0; c < original.cols(); ++c) {
        for (size_t r = 0; r < original.rows(); ++r) {
            double d = std::abs(original.at(r, c) - reconstructed.at(r, c));
            acc += mode == ReconstructionMode::Mae ? d : d * d;
        }
    }
    return 1.0 - acc / static_cast<double>(original.rows() * original.cols());
}

double composition_l1(const DataTable& original, const DataTable& null_intervention_output) {
    require_same_shape(original, null_intervention_output, "composition");
    double acc = 0.0;
    for (size_t c = 0; c < original.cols(); ++c) {
        for (size_t r = 0; r < original.rows(); ++r) {
            acc += std::abs(original.at(r, c) - null_intervention_output.at(r, c));
        }
    }
    return acc / static_cast<double>(original.rows() * original.cols());
}

double fid(const DataTable& a, const DataTable& b) {
    require_embeddings(a, b);
    Eigen::MatrixXd xa = as_matrix(a);
    Eigen::MatrixXd xb = as_matrix(b);
    Eigen::RowVectorXd mu_a = xa.colwise().mean();
    Eigen::RowVectorXd mu_b = xb.colwise().mean();
    Eigen::MatrixXd ca = xa.rowwise() - mu_a;
    Eigen::MatrixXd cb = xb.rowwise() - mu_b;
    Eigen::MatrixXd sigma_a = ca.transpose() * ca / static_cast<double>(a.rows() - 1);
    Eigen::MatrixXd sigma_b = cb.transpose() * cb / static_cast<double>(b.rows() - 1);

    Eigen::MatrixXd root_a = symmetric_sqrt(sigma_a);
    Eigen::MatrixXd cross = symmetric_sqrt(root_a * sigma_b * root_a);
    double value = (mu_a - mu_b).squaredNorm() + sigma_a.trace() + sigma_b.trace() -
                   2.0 * cross.trace();
    return std::max(value, 0.0);
}

double kid(const DataTable& a, const DataTable& b) {
    require_embeddings(a, b);
    Eigen::MatrixXd xa = as_matrix(a);
    Eigen::MatrixXd xb = as_matrix(b);
    const double d = static_cast<double>(a.cols());
    auto kernel_mean_within = [&](const Eigen::MatrixXd& x) {
        const Eigen::Index n = x.rows();
        Eigen::MatrixXd gram = x * x.transpose() / d;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                acc += std::pow(gram(i, j) + 1.0, 3);
            }
        }
        return acc / static_cast<double>(n * (n - 1));
    };
    Eigen::MatrixXd cross = xa * xb.transpose() / d;
    double cross_mean = 0.0;
    for (Eigen::Index i = 0; i < cross.rows(); ++i) {
        for (Eigen::Index j = 0; j < cross.cols(); ++j) {
            cross_mean += std::pow(cross(i, j) + 1.0, 3);
        }
    }
    cross_mean /= static_cast<double>(cross.rows() * cross.cols());
    return kernel_mean_within(xa) + kernel_mean_within(xb) - 2.0 * cross_mean;
}

double inception_score(const DataTable& probs) {
    const size_t n = probs.rows();
    const size_t k = probs.cols();
    std::vector<double> marginal(k, 0.0);
    for (size_t r = 0; r < n; ++r) {
        double sum = 0.0;
        for (size_t c = 0; c < k; ++c) {
            double v = probs.at(r, c);
            if (v < 0.0) {
                fail(ErrorKind::Validation, "probability table has a negative entry in row " +
                                                std::to_string(r));
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            fail(ErrorKind::Validation, "probability row " + std::to_string(r) +
                                            " sums to " + std::to_string(sum) + ", expected 1");
        }
        for (size_t c = 0; c < k; ++c) marginal[c] += probs.at(r, c) / static_cast<double>(n);
    }
    double mean_kl = 0.0;
    for (size_t r = 0; r < n; ++r) {
        double kl = 0.0;
        for (size_t c = 0; c < k; ++c) {
            double p = probs.at(r, c);
            if (p > 0.0) kl += p * std::log(p / marginal[c]);
        }
        mean_kl += kl / static_cast<double>(n);
    }
    return std::exp(mean_kl);
}

double iou(const BinaryMask& a, const BinaryMask& b, Warnings* warnings) {
    if (a.width() != b.width() || a.height() != b.height()) {
        fail(ErrorKind::Argument, "mask dimensions differ (" + std::to_string(a.width()) + "x" +
                                      std::to_string(a.height()) + " vs " +
                                      std::to_string(b.width()) + "x" + std::to_string(b.height()) +
                                      ")");
    }
    size_t intersection = 0;
    size_t uni = 0;
    for (size_t i = 0; i < a.bits().size(); ++i) {
        bool ba = a.bits()[i] != 0;
        bool bb = b.bits()[i] != 0;
        intersection += (ba && bb) ? 1 : 0;
        uni += (ba || bb) ? 1 : 0;
    }
    if (uni == 0) {
        warn(warnings, "both masks are empty; IoU defined as 1");
        return 1.0;
    }
    return static_cast<double>(intersection) / static_cast<double>(uni);
}

double effectiveness(const DataTable& target, const std::string& target_column,
                     const DataTable& predicted, const std::string& predicted_column,
                     EffectivenessKind kind) {
    int tc = target.require_column(target_column);
    int pc = predicted.require_column(predicted_column);
    if (target.rows() != predicted.rows()) {
        fail(ErrorKind::Argument, "effectiveness columns differ in length");
    }
    auto tv = target.column_values(tc);
    auto pv = predicted.column_values(pc);
    if (kind == EffectivenessKind::Regression) {
        if (target.column(tc).is_categorical() || predicted.column(pc).is_categorical()) {
            fail(ErrorKind::Argument, "regression effectiveness needs numeric columns");
        }
        double acc = 0.0;
        for (size_t i = 0; i < tv.size(); ++i) acc += std::abs(tv[i] - pv[i]);
        return acc / static_cast<double>(tv.size());
    }
    if (!target.column(tc).is_categorical() || !predicted.column(pc).is_categorical()) {
        fail(ErrorKind::Argument, "classification effectiveness needs categorical columns");
    }
    if (target.column(tc).cardinality != predicted.column(pc).cardinality) {
        fail(ErrorKind::Argument, "classification effectiveness needs a shared code space");
    }
    std::set<int> classes;
    for (size_t i = 0; i < tv.size(); ++i) {
        classes.insert(static_cast<int>(tv[i]));
        classes.insert(static_cast<int>(pv[i]));
    }
    double f1_sum = 0.0;
    for (int cls : classes) {
        size_t tp = 0;
        size_t fp = 0;
        size_t fn = 0;
        for (size_t i = 0; i < tv.size(); ++i) {
            bool is_true = static_cast<int>(tv[i]) == cls;
            bool is_pred = static_cast<int>(pv[i]) == cls;
            if (is_true && is_pred) ++tp;
            if (!is_true && is_pred) ++fp;
            if (is_true && !is_pred) ++fn;
        }
        double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        double f1 = precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        f1_sum += f1;
    }
    return f1_sum / static_cast<double>(classes.size());
}

CounterfactualAccuracy counterfactual_accuracy(const std::vector<CounterfactualCase>& cases,
                                               Warnings* warnings) {
    if (cases.empty()) fail(ErrorKind::Argument, "no counterfactual cases supplied");
    CounterfactualAccuracy acc;
    acc.cases = cases.size();
    for (const auto& c : cases) {
        acc.mean_iou += iou(c.generated, c.oracle, warnings);
        size_t differing = 0;
        for (size_t i = 0; i < c.generated.bits().size(); ++i) {
            if ((c.generated.bits()[i] != 0) != (c.oracle.bits()[i] != 0)) ++differing;
        }
        acc.mean_l1 += static_cast<double>(differing) / static_cast<double>(c.generated.bits().size());
    }
    acc.mean_iou /= static_cast<double>(cases.size());
    acc.mean_l1 /= static_cast<double>(cases.size());
    return acc;
}

}  // namespace crl
