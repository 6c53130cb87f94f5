#pragma once

#include <string>
#include <vector>

#include "error.hpp"

namespace crl {

// Row-major score matrix with rows <= cols; rows are factors, columns latent
// dimensions.
struct ScoreMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> values;  // rows x cols

    double at(size_t r, size_t c) const { return values[r * cols + c]; }
};

struct Matching {
    std::vector<int> assignment;   // factor index -> latent index, injective
    double total = 0.0;
    std::vector<double> per_pair;  // matched score per factor
};

struct SweepResult {
    double min = 0.0;
    double max = 0.0;
    std::vector<int> argmin;
    std::vector<int> argmax;
    size_t evaluated = 0;
};

// Injective assignment maximizing the total matched score; ties are broken
// toward the lexicographically smallest assignment vector.
Matching hungarian_match(const ScoreMatrix& m);

// Exhaustive evaluation of every injective assignment (cols <= 8).
SweepResult permutation_sweep(const ScoreMatrix& m);

}  // namespace crl
