#include "somcheck/image.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "somcheck/errors.hpp"

namespace somcheck {

Image::Image(int width, int height, Color fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * height * 3) {
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

Color Image::get(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
}

void Image::set(int x, int y, Color c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
}

void Image::fill_rect(const Bounds& r, Color c) {
    const int x1 = std::max(0, r.x1), y1 = std::max(0, r.y1);
    const int x2 = std::min(width_, r.x2), y2 = std::min(height_, r.y2);
    for (int y = y1; y < y2; ++y)
        for (int x = x1; x < x2; ++x) set(x, y, c);
}

void Image::draw_rect_outline(const Bounds& r, Color c, int stroke) {
    fill_rect({r.x1, r.y1, r.x2, r.y1 + stroke}, c);
    fill_rect({r.x1, r.y2 - stroke, r.x2, r.y2}, c);
    fill_rect({r.x1, r.y1, r.x1 + stroke, r.y2}, c);
    fill_rect({r.x2 - stroke, r.y1, r.x2, r.y2}, c);
}

void Image::hatch_rect(const Bounds& r, Color c, int pitch) {
    const int x1 = std::max(0, r.x1), y1 = std::max(0, r.y1);
    const int x2 = std::min(width_, r.x2), y2 = std::min(height_, r.y2);
    for (int y = y1; y < y2; ++y)
        for (int x = x1; x < x2; ++x)
            if ((x + y) % pitch == 0) set(x, y, c);
}

namespace {

// 5x7 glyphs, row-major bit masks, MSB = leftmost column.
struct Glyph {
    char ch;
    std::array<std::uint8_t, 7> rows;
};

constexpr Glyph kGlyphs[] = {
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
};

const Glyph* find_glyph(char c) {
    for (const auto& g : kGlyphs)
        if (g.ch == c) return &g;
    return nullptr;
}

}  // namespace

void Image::draw_text(int x, int y, const std::string& s, Color c, int scale) {
    int cx = x;
    for (char ch : s) {
        const Glyph* g = find_glyph(ch);
        if (g) {
            for (int gy = 0; gy < 7; ++gy)
                for (int gx = 0; gx < 5; ++gx)
                    if (g->rows[gy] & (0x10 >> gx))
                        fill_rect({cx + gx * scale, y + gy * scale,
                                   cx + (gx + 1) * scale, y + (gy + 1) * scale},
                                  c);
        }
        cx += 6 * scale;
    }
}

int Image::text_width(const std::string& s, int scale) {
    return static_cast<int>(s.size()) * 6 * scale;
}

int Image::text_height(int scale) { return 7 * scale; }

namespace {

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteState {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteState() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

void append_bytes(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

void flush_noop(png_structp) {}

}  // namespace

Image load_png(const std::filesystem::path& path) {
    PngReadCloser s;
    s.fp = std::fopen(path.string().c_str(), "rb");
    if (!s.fp) throw Error("cannot open image: " + path.string());

    s.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    s.info = png_create_info_struct(s.png);
    if (!s.png || !s.info) throw Error("libpng init failed");
    if (setjmp(png_jmpbuf(s.png)))
        throw MalformedDocument("invalid PNG: " + path.string());

    png_init_io(s.png, s.fp);
    png_read_info(s.png, s.info);

    png_set_expand(s.png);
    png_set_strip_16(s.png);
    png_set_strip_alpha(s.png);
    png_set_gray_to_rgb(s.png);
    png_set_interlace_handling(s.png);
    png_read_update_info(s.png, s.info);

    const int w = static_cast<int>(png_get_image_width(s.png, s.info));
    const int h = static_cast<int>(png_get_image_height(s.png, s.info));
    if (png_get_rowbytes(s.png, s.info) != static_cast<png_size_t>(w) * 3)
        throw MalformedDocument("unexpected PNG layout: " + path.string());

    Image img(w, h);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h * 3);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(s.png, rows.data());

    // Copy into the image through its own storage to keep layout private.
    Image out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
            out.set(x, y, {buf[i], buf[i + 1], buf[i + 2]});
        }
    return out;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
    PngWriteState s;
    s.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    s.info = png_create_info_struct(s.png);
    if (!s.png || !s.info) throw Error("libpng init failed");

    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(s.png))) throw Error("PNG encode failed");

    png_set_write_fn(s.png, &out, append_bytes, flush_noop);
    // Fixed settings keep encoded bytes reproducible across runs.
    png_set_compression_level(s.png, 6);
    png_set_filter(s.png, 0, PNG_FILTER_NONE);
    png_set_IHDR(s.png, s.info, img.width(), img.height(), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(s.png, s.info);

    const auto& px = img.pixels();
    for (int y = 0; y < img.height(); ++y)
        png_write_row(s.png, const_cast<png_bytep>(
                                 px.data() + static_cast<std::size_t>(y) * img.width() * 3));
    png_write_end(s.png, s.info);
    return out;
}

void save_png(const Image& img, const std::filesystem::path& path) {
    const auto bytes = encode_png(img);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write image: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace somcheck
