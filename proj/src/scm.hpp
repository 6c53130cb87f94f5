#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace crl {

enum class NoiseKind { Gaussian, Uniform, Constant };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Gaussian;
    double sigma = 0.1;  // gaussian
    double a = 0.0;      // uniform lower
    double b = 1.0;      // uniform upper
    double value = 0.0;  // constant
};

enum class MechanismKind { Linear, Tanh, Square, Sin, Categorical };

// Numeric mechanisms are a linear form (optionally pushed through a named
// nonlinearity) with additive noise; categorical mechanisms are per-level
// logits over the same linear form, sampled through a softmax.
struct Mechanism {
    MechanismKind kind = MechanismKind::Linear;
    std::vector<double> weights;  // one per parent, in graph parent order
    double bias = 0.0;
    std::vector<std::vector<double>> logit_weights;  // [level][parent]
    std::vector<double> logit_bias;                  // [level]
};

class Scm {
public:
    Scm(CausalGraph graph, std::map<std::string, Mechanism> mechanisms,
        std::map<std::string, NoiseSpec> noise);

    const CausalGraph& graph() const { return graph_; }
    const Mechanism* mechanism(int node) const;
    const NoiseSpec& noise(int node) const { return noise_[static_cast<size_t>(node)]; }

    // Ancestral sampling in topological order; draws come from per-(row, node)
    // counter streams, so the result is independent of evaluation order.
    DataTable sample(size_t n, uint64_t seed) const;

    // Graph surgery: assigned nodes lose their incoming edges and mechanisms
    // and become constant roots. The original model is untouched.
    Scm intervene(const std::vector<std::pair<std::string, double>>& assignments) const;

    // Abduction / action / prediction for fully numeric additive-noise
    // models; `observation` is indexed by graph variable order.
    std::vector<double> counterfactual(
        const std::vector<double>& observation,
        const std::vector<std::pair<std::string, double>>& assignments) const;

private:
    double mechanism_value(int node, const std::vector<double>& values) const;
    int sample_categorical(int node, const std::vector<double>& values, double u) const;

    CausalGraph graph_;
    std::vector<std::optional<Mechanism>> mechanisms_;  // by node index
    std::vector<NoiseSpec> noise_;
    std::vector<int> topo_;  // node indices in topological order
};

Scm parse_scm(const std::string& json_text, const std::string& origin);
Scm load_scm(const std::string& path);
std::string scm_to_json(const Scm& scm);
void save_scm(const Scm& scm, const std::string& path);

std::vector<std::pair<std::string, double>> parse_assignments(const std::string& spec);

}  // namespace crl
