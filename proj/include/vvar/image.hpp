#ifndef VVAR_IMAGE_HPP
#define VVAR_IMAGE_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vvar {

/// 8-bit grayscale raster, row-major, row 0 at the top.
struct GrayImage {
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<uint8_t> pixels;

    GrayImage() = default;
    GrayImage(uint32_t w, uint32_t h, uint8_t fill = 0)
        : width(w), height(h), pixels(size_t(w) * h, fill) {}

    uint8_t at(uint32_t row, uint32_t col) const { return pixels[size_t(row) * width + col]; }
    uint8_t& at(uint32_t row, uint32_t col) { return pixels[size_t(row) * width + col]; }

    bool operator==(const GrayImage&) const = default;
};

/// Quadrant digits a_1..a_m, each in {1,2,3,4}:
/// 1 = upper left, 2 = upper right, 3 = lower left, 4 = lower right.
struct QuadAddress {
    std::vector<uint8_t> digits;

    bool operator==(const QuadAddress&) const = default;
};

/// Square sub-image of a 2^m image; side is 2^(m-n) for a piece of level n.
struct Block {
    uint32_t side = 0;
    std::vector<uint8_t> pixels;

    bool operator==(const Block&) const = default;
};

// ---- PGM (binary P5, maxval 255) -------------------------------------------

/// Parse a binary PGM. Accepts comments and arbitrary header whitespace;
/// rejects anything that is not P5 with maxval 255. Throws PgmError.
GrayImage load_pgm(std::span<const uint8_t> bytes);

/// Canonical encoding: "P5\n<w> <h>\n255\n" followed by the raw raster.
std::vector<uint8_t> save_pgm(const GrayImage& image);

// ---- square resampling ------------------------------------------------------

/// Smallest m with width <= 2^m and height <= 2^m.
int min_depth(uint32_t width, uint32_t height);

/// Nearest-neighbour resample onto a 2^m x 2^m grid. Target pixel (a,b) reads
/// source pixel (floor((a+0.5)*h/2^m), floor((b+0.5)*w/2^m)), clamped.
GrayImage to_square(const GrayImage& image, int m);

/// Inverse index map of to_square: output (r,c) reads square pixel
/// (floor((r+0.5)*2^m/h), floor((c+0.5)*2^m/w)).
GrayImage from_square(const GrayImage& square, uint32_t width, uint32_t height);

// ---- quadrant addressing ----------------------------------------------------

QuadAddress pixel_to_address(uint32_t row, uint32_t col, int m);
std::pair<uint32_t, uint32_t> address_to_pixel(const QuadAddress& addr);

/// Piece position (prow, pcol) of the piece with the given quadrant-order
/// index at a level, and its inverse. Index digits in base 4 are the address
/// digits minus one.
std::pair<uint32_t, uint32_t> piece_coords(uint64_t index, int level);
uint64_t piece_index(uint32_t prow, uint32_t pcol, int level);

// ---- pieces -----------------------------------------------------------------

/// All 4^n nonoverlapping level-n pieces of a 2^m square image, enumerated in
/// quadrant-address order.
std::vector<Block> extract_pieces(const GrayImage& image, int n);

/// max pixel - min pixel.
int block_variation(const Block& block);

/// Depth m of a square power-of-two image; -1 if the image is not one.
int image_depth(const GrayImage& image);

} // namespace vvar

#endif
