#pragma once

#include <string>
#include <vector>

#include "amo/spectrum.hpp"

namespace amo::cli {

// Renders butterfly tiles into a fixed 1200x900 SVG. x is p/q on [0,1],
// y is E on [-(2+2|lambda|), 2+2|lambda|] with SVG's downward axis, one
// segment per band, stroke width 8/q. The bytes are a pure function of
// the tiles, the coupling, and the library version; tiles whose edge
// solve failed become comments so the failure is visible in the file.
std::string butterfly_svg(double coupling, long long q_max,
                          const std::vector<spectrum::ButterflyTile>& tiles);

}  // namespace amo::cli
