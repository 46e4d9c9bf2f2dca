#pragma once

#include "torsionkit/surface.hpp"

namespace tk {

// S^1 x Sigma_g split by k parallel non-separating curves: a planar piece
// with k boundary circles and a genus g-k+1 piece, each with a unique minimum.
SurfaceSpec vg_family_spec(int g, int k);

// Disconnected negative region: two one-holed tori glued to a genus-one
// piece with two holes; one plus saddle flows down into both minima.
SurfaceSpec disconnected_region_spec();

SurfaceSpec sphere_spec();
SurfaceSpec torus_spec();

}  // namespace tk
