#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "somcheck/geometry.hpp"

namespace somcheck {

struct Color {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Color&) const = default;
};

/// 8-bit RGB raster. Alpha in source PNGs is discarded on load.
class Image {
public:
    Image() = default;
    Image(int width, int height, Color fill = {255, 255, 255});

    int width() const { return width_; }
    int height() const { return height_; }

    Color get(int x, int y) const;
    void set(int x, int y, Color c);

    void fill_rect(const Bounds& r, Color c);
    void draw_rect_outline(const Bounds& r, Color c, int stroke);
    /// 45-degree hatch lines inside the rectangle, one line every `pitch` px.
    void hatch_rect(const Bounds& r, Color c, int pitch);
    /// Draws text with the built-in 5x7 glyph set (digits and a few
    /// punctuation marks); scale multiplies glyph pixels.
    void draw_text(int x, int y, const std::string& s, Color c, int scale = 2);

    static int text_width(const std::string& s, int scale = 2);
    static int text_height(int scale = 2);

    const std::vector<std::uint8_t>& pixels() const { return data_; }

    bool operator==(const Image&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;  // RGB, row-major
};

Image load_png(const std::filesystem::path& path);
/// Writes with fixed zlib/filter settings so identical images produce
/// byte-identical files.
void save_png(const Image& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const Image& img);

}  // namespace somcheck
