#pragma once

#include <string>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace crl {

enum class ReconstructionMode { Mae, Mse };

// 1 - mean absolute (or squared) elementwise error; inputs must be in [0, 1].
double reconstruction_score(const DataTable& original, const DataTable& reconstructed,
                            ReconstructionMode mode);

// Mean absolute elementwise difference (no range requirement).
double composition_l1(const DataTable& original, const DataTable& null_intervention_output);

// Frechet distance between the Gaussian fits of two embedding sets;
// covariances use the n-1 divisor, the matrix square root a symmetric
// eigendecomposition with eigenvalues clamped at zero.
double fid(const DataTable& a, const DataTable& b);

// Unbiased squared MMD with kernel (x.y/d + 1)^3 over the full sets; negative
// values are legal for the unbiased estimator.
double kid(const DataTable& a, const DataTable& b);

// exp(mean KL(row || column-mean marginal)), KL in nats.
double inception_score(const DataTable& probs);

// Jaccard index; two empty masks score 1 with a warning.
double iou(const BinaryMask& a, const BinaryMask& b, Warnings* warnings = nullptr);

enum class EffectivenessKind { Classification, Regression };

// Macro-averaged F1 over observed classes, or mean absolute error.
double effectiveness(const DataTable& target, const std::string& target_column,
                     const DataTable& predicted, const std::string& predicted_column,
                     EffectivenessKind kind);

struct CounterfactualCase {
    BinaryMask generated;
    BinaryMask oracle;
    std::string variable;  // intervention descriptor
    double value = 0.0;

    CounterfactualCase(BinaryMask g, BinaryMask o, std::string var, double val)
        : generated(std::move(g)), oracle(std::move(o)), variable(std::move(var)), value(val) {}
};

struct CounterfactualAccuracy {
    double mean_iou = 0.0;
    double mean_l1 = 0.0;
    size_t cases = 0;
};

CounterfactualAccuracy counterfactual_accuracy(const std::vector<CounterfactualCase>& cases,
                                               Warnings* warnings = nullptr);

}  // namespace crl
