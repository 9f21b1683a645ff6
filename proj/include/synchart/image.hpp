#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synchart {

struct ImageMeta {
    int width = 0;
    int height = 0;
    std::uint64_t bytes = 0;
    double variance = 0.0;  // grayscale pixel variance
    friend bool operator==(const ImageMeta&, const ImageMeta&) = default;
};

inline constexpr int kMinImageSide = 64;
/// Below this grayscale variance an image counts as blank.
inline constexpr double kBlankVarianceThreshold = 1.0;

struct ImageCheck {
    std::optional<ImageMeta> meta;
    std::string problem;  // set when meta is empty
};

/// Decodes a JPEG with libjpeg; corrupt or truncated data, sides under 64 px
/// and near-constant pixels all fail.
ImageCheck validate_image(std::string_view bytes);
ImageCheck validate_image_file(const std::filesystem::path& path);

/// RGB raster, row-major, 3 bytes per pixel.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Raster(int w, int h, std::uint8_t fill = 255);
    void fill_rect(int x0, int y0, int x1, int y1, std::uint32_t color);
};

std::string encode_jpeg(const Raster& raster, int quality = 90);

}  // namespace synchart
