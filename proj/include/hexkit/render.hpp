#pragma once

#include "hexkit/grid.hpp"
#include "hexkit/image.hpp"

namespace hexkit {

struct RenderOptions {
    double scale = 10.0;      // output pixels per pitch unit
    int supersample = 1;      // sub-samples per axis: 1, 2 or 4
    double background = 0.0;
    int threads = 1;
};

// Box-filtered CPU rasterization of a HexArray; the canvas covers the grid's
// bounding box.
Image rasterize(const HexArray<double>& hex, const RenderOptions& opts = {});

}  // namespace hexkit
