#pragma once

#include <string>

#include "dimcert/gdms.hpp"

namespace dimcert {

/// Draws the vertex regions and the images phi_w(X) for admissible words up to
/// the given depth into an SVG file. Moebius images of circles are native
/// circle elements (exact); polynomial images are sampled polylines. 3D
/// systems are drawn as xy projections.
void emit_figure(const SystemSpec& spec, int depth, const std::string& path);

} // namespace dimcert
