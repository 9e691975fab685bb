#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hexkit/grid.hpp"
#include "hexkit/image.hpp"
#include "hexkit/transform.hpp"

namespace hexkit {

using Polygon = std::vector<Eigen::Vector2d>;

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

// Sutherland-Hodgman clip of a convex polygon against an axis-aligned
// rectangle. Subjects with fewer than 3 vertices clip to nothing.
Polygon clip_convex(const Polygon& subject, const Rect& rect);

// Signed shoelace area; positive for counterclockwise vertex order.
double polygon_area(const Polygon& poly);

/// One intersection cell between a transformed-lattice cell and a reference
/// pixel.
struct Overlap {
    int64_t pixel_x = 0;
    int64_t pixel_y = 0;
    int64_t cell = 0;  // linewise index in the transformed lattice
    double area = 0.0;
};

struct Subarea {
    int64_t pixel_x = 0;
    int64_t pixel_y = 0;
    double area = 0.0;
    double ref_value = 0.0;          // I(a)
    double transformed_value = 0.0;  // K(a)
};

enum class MseNormalizer {
    TotalArea,     // 1 / sum |a|: area-weighted mean
    SubareaCount,  // 1 / number of subareas
};

class UndefinedMetric : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Projection of every hexagon of a grid centered on a width x height raster
// onto its pixels. Overlaps are ordered by cell, then pixel row, then column.
std::vector<Overlap> hex_overlaps(const HexGridSpec& spec, int64_t width, int64_t height);

// Projection of a cols x rows square resampling spanning the same raster.
std::vector<Overlap> square_overlaps(int64_t cols, int64_t rows, int64_t width, int64_t height);

std::vector<Subarea> subareas(const Image& ref, const HexArray<double>& hex, int64_t channel = 0);

double weighted_mse(std::span<const Subarea> cells, MseNormalizer norm = MseNormalizer::TotalArea);

// Area-weighted MSE between a reference image and its hexagonal transform,
// averaged over channels.
double weighted_mse(const Image& ref, const HexArray<double>& hex, MseNormalizer norm = MseNormalizer::TotalArea);

// Same measure for a square resampling whose cells span the reference image.
double weighted_mse(const Image& ref, const Image& resampled, MseNormalizer norm = MseNormalizer::TotalArea);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// 10 log10(max_i^2 / mse); +infinity for a perfect match.
double psnr(double mse, double max_i = 255.0);

struct EfficiencyReport {
    double radius = 0.0;
    double t_q = 0.0;    // square transformation efficiency, dB
    double t_h = 0.0;    // hexagonal transformation efficiency, dB
    double delta = 0.0;  // t_h - t_q
    double mse_q = 0.0;
    double mse_h = 0.0;
    double max_i = 255.0;
    int64_t hex_rows = 0;
    int64_t hex_cols = 0;
    bool skipped = false;
    std::string warning;
};

struct SweepOptions {
    InterpMode mode = InterpMode::Bilinear;
    MseNormalizer normalizer = MseNormalizer::TotalArea;
    double max_i = 255.0;
};

EfficiencyReport efficiency_at(const Image& img, double radius, const SweepOptions& opts = {});
std::vector<EfficiencyReport> efficiency_sweep(const Image& img, std::span<const double> radii,
                                               const SweepOptions& opts = {});

}  // namespace hexkit
