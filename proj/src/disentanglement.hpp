#pragma once

#include <optional>
#include <string>
#include <vector>

#include "assignment.hpp"
#include "error.hpp"
#include "types.hpp"

namespace crl {

struct AssociationMatrix {
    ScoreMatrix matrix;  // rows = factors, cols = latent dimensions
    std::vector<std::string> factor_names;
    std::vector<std::string> latent_names;
    std::string metric;  // "mic" or "tic"
};

// Both association matrices from one characteristic-matrix pass per pair;
// pairs are evaluated in parallel with a deterministic merge.
std::pair<AssociationMatrix, AssociationMatrix> characteristic_matrices(
    const DataTable& factors, const DataTable& latents, Warnings* warnings = nullptr);

AssociationMatrix association_matrix(const DataTable& factors, const DataTable& latents,
                                     const std::string& metric, Warnings* warnings = nullptr);

// Interventional robustness: per latent dimension, how little it moves when
// every factor other than its associated one varies. Weighted by the binned
// MI between each latent and its associated factor.
double irs(const DataTable& factors, const DataTable& latents, int bins,
           Warnings* warnings = nullptr);

// Joint entropy minus mutual information gap, reported in its normalized
// upward orientation: mean over factors of
// (H(y) + log2(bins) - raw) / (H(y) + log2(bins)), raw = H(y, z*) - I(y; z*)
// + I(y; z°), clamped to [0, 1].
double jemmig(const DataTable& factors, const DataTable& latents, int bins,
              Warnings* warnings = nullptr);

struct DciResult {
    double disentanglement = 0.0;
    double completeness = 0.0;
    double informativeness = 0.0;
    ScoreMatrix importance;  // rows = latents, cols = factors
};

// Importance matrix from an L1-regularized linear predictor per factor
// (coordinate descent, lambda = 0.01 * max |covariance|); informativeness on
// a seeded 20% held-out split.
DciResult dci(const DataTable& factors, const DataTable& latents, uint64_t seed,
              Warnings* warnings = nullptr);

struct SuiteConfig {
    int bins = 20;
    uint64_t seed = 0;
    bool mic = true;
    bool tic = true;
    bool irs = true;
    bool jemmig = true;
    bool dci = true;
};

struct SuiteResult {
    std::optional<double> mic;
    std::optional<double> tic;
    std::optional<double> irs;
    std::optional<double> jemmig;
    std::optional<double> dci_d;
    std::optional<double> dci_c;
    std::optional<double> dci_i;
    std::optional<Matching> mic_matching;
    std::optional<Matching> tic_matching;
};

// MIC/TIC are the mean of Hungarian-matched association entries; the other
// components delegate to their dedicated estimators.
SuiteResult disentanglement_suite(const DataTable& factors, const DataTable& latents,
                                  const SuiteConfig& config, Warnings* warnings = nullptr);

// Rank-based binned mutual information (nats) between two integer codings.
double binned_mi(const std::vector<int>& a, int ka, const std::vector<int>& b, int kb);

}  // namespace crl
