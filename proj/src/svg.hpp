#pragma once

#include <string>

#include "aggregation.hpp"

namespace crl {

// 800x800 SVG 1.1 documents; one closed stroke-plus-translucent-fill path per
// model. Radar polygons have N vertices on the metric axes; origami polygons
// interleave N auxiliary vertices at radius h, giving 2N vertices.
std::string svg_radar(const ScoreCard& card);
std::string svg_origami(const ScoreCard& card);

}  // namespace crl
