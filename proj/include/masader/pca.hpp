#pragma once

#include "masader/matrix.hpp"

namespace masader {

// Projects rows onto the top two principal components of the centered data.
// Each component is oriented so its largest-magnitude entry is positive
// (first such entry on ties). Components with (numerically) zero variance
// produce a zero coordinate.
Matrix project_2d(const Matrix& vectors);

}  // namespace masader
