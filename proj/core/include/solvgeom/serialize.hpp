#pragma once

#include "solvgeom/algebra.hpp"

#include <string>

namespace solvgeom {

/**
 * @brief Text form of an algebra (JSON object).
 *
 *   { "dim": 3, "labels": ["X","Y","Z"], "gram": "identity",
 *     "structure": [[0, 1, 2, 1.0]],
 *     "decoration": { "a_indices": [], "n_indices": [0,1,2], "roots": [] } }
 *
 * gram is "identity" or a row-major array (flat n*n, or n rows).
 * Structure entries use 0-based indices with i<j. Floats are written with
 * 17 significant digits.
 */
std::string serialize(const MetricLieAlgebra& algebra);

// Throws ParseError on malformed or invalid documents.
MetricLieAlgebra deserialize(const std::string& text);

}  // namespace solvgeom
