#include "vvar/image.hpp"
#include "vvar/errors.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace vvar {

namespace {

// Header token scanner: skips whitespace and '#' comments between fields.
class PnmScanner {
public:
    explicit PnmScanner(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    size_t pos() const { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            uint8_t c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Unsigned decimal field, at most 9 digits.
    uint32_t read_number(const char* what) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size())
            throw PgmError(PgmError::Kind::BadHeader, std::string("missing ") + what);
        if (!std::isdigit(bytes_[pos_]))
            throw PgmError(PgmError::Kind::BadHeader, std::string("malformed ") + what);
        uint64_t value = 0;
        int digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (++digits > 9)
                throw PgmError(PgmError::Kind::BadHeader, std::string("oversized ") + what);
            ++pos_;
        }
        return static_cast<uint32_t>(value);
    }

    // Exactly one whitespace byte separates the maxval from the raster.
    void expect_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw PgmError(PgmError::Kind::BadHeader, "missing separator before pixel data");
        ++pos_;
    }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

} // namespace

GrayImage load_pgm(std::span<const uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw PgmError(PgmError::Kind::BadMagic, "not a binary PGM (expected P5)");

    PnmScanner scan(bytes.subspan(2));
    uint32_t width = scan.read_number("width");
    uint32_t height = scan.read_number("height");
    uint32_t maxval = scan.read_number("maxval");
    if (width == 0 || height == 0)
        throw PgmError(PgmError::Kind::BadHeader, "zero image dimension");
    if (maxval != 255)
        throw PgmError(PgmError::Kind::UnsupportedMaxval,
                       "unsupported maxval " + std::to_string(maxval));
    scan.expect_single_space();

    size_t offset = 2 + scan.pos();
    size_t need = size_t(width) * height;
    if (bytes.size() - offset < need)
        throw PgmError(PgmError::Kind::Truncated, "truncated pixel data");
    if (bytes.size() - offset > need)
        throw PgmError(PgmError::Kind::TrailingData, "trailing bytes after pixel data");

    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(bytes.begin() + offset, bytes.end());
    return img;
}

std::vector<uint8_t> save_pgm(const GrayImage& image) {
    std::string header = "P5\n" + std::to_string(image.width) + " " +
                         std::to_string(image.height) + "\n255\n";
    std::vector<uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

int min_depth(uint32_t width, uint32_t height) {
    uint32_t side = std::max(width, height);
    int m = 0;
    while ((uint32_t(1) << m) < side) ++m;
    return m;
}

GrayImage to_square(const GrayImage& image, int m) {
    if (m < 0 || m > 15)
        throw std::invalid_argument("to_square: depth out of range");
    uint32_t side = uint32_t(1) << m;
    if (image.width > side || image.height > side)
        throw std::invalid_argument("to_square: depth too small for input dimensions");
    if (image.width == side && image.height == side) return image;

    GrayImage out(side, side);
    for (uint32_t a = 0; a < side; ++a) {
        // floor((a+0.5)*h/side), exact in integer arithmetic
        uint32_t sr = static_cast<uint32_t>((uint64_t(2 * a + 1) * image.height) / (2 * uint64_t(side)));
        sr = std::min(sr, image.height - 1);
        for (uint32_t b = 0; b < side; ++b) {
            uint32_t sc = static_cast<uint32_t>((uint64_t(2 * b + 1) * image.width) / (2 * uint64_t(side)));
            sc = std::min(sc, image.width - 1);
            out.at(a, b) = image.at(sr, sc);
        }
    }
    return out;
}

GrayImage from_square(const GrayImage& square, uint32_t width, uint32_t height) {
    int m = image_depth(square);
    if (m < 0)
        throw std::invalid_argument("from_square: input is not a square power-of-two image");
    uint32_t side = square.width;
    if (width == 0 || height == 0 || width > side || height > side)
        throw std::invalid_argument("from_square: target dimensions do not fit the square");
    if (width == side && height == side) return square;

    GrayImage out(width, height);
    for (uint32_t r = 0; r < height; ++r) {
        uint32_t sr = static_cast<uint32_t>((uint64_t(2 * r + 1) * side) / (2 * uint64_t(height)));
        sr = std::min(sr, side - 1);
        for (uint32_t c = 0; c < width; ++c) {
            uint32_t sc = static_cast<uint32_t>((uint64_t(2 * c + 1) * side) / (2 * uint64_t(width)));
            sc = std::min(sc, side - 1);
            out.at(r, c) = square.at(sr, sc);
        }
    }
    return out;
}

QuadAddress pixel_to_address(uint32_t row, uint32_t col, int m) {
    if (m < 0 || m > 15)
        throw std::invalid_argument("pixel_to_address: depth out of range");
    uint32_t side = uint32_t(1) << m;
    if (row >= side || col >= side)
        throw std::invalid_argument("pixel_to_address: coordinates out of range");
    QuadAddress addr;
    addr.digits.resize(m);
    for (int j = 1; j <= m; ++j) {
        uint32_t rbit = (row >> (m - j)) & 1;
        uint32_t cbit = (col >> (m - j)) & 1;
        addr.digits[j - 1] = static_cast<uint8_t>(1 + 2 * rbit + cbit);
    }
    return addr;
}

std::pair<uint32_t, uint32_t> address_to_pixel(const QuadAddress& addr) {
    uint32_t row = 0, col = 0;
    for (uint8_t d : addr.digits) {
        if (d < 1 || d > 4)
            throw std::invalid_argument("address_to_pixel: digit out of range");
        uint32_t q = d - 1;
        row = (row << 1) | (q >> 1);
        col = (col << 1) | (q & 1);
    }
    return {row, col};
}

std::pair<uint32_t, uint32_t> piece_coords(uint64_t index, int level) {
    uint32_t prow = 0, pcol = 0;
    for (int j = level - 1; j >= 0; --j) {
        uint64_t digit = (index >> (2 * j)) & 3;
        prow = (prow << 1) | static_cast<uint32_t>(digit >> 1);
        pcol = (pcol << 1) | static_cast<uint32_t>(digit & 1);
    }
    return {prow, pcol};
}

uint64_t piece_index(uint32_t prow, uint32_t pcol, int level) {
    uint64_t index = 0;
    for (int j = level - 1; j >= 0; --j) {
        uint64_t digit = 2 * ((prow >> j) & 1) + ((pcol >> j) & 1);
        index = (index << 2) | digit;
    }
    return index;
}

std::vector<Block> extract_pieces(const GrayImage& image, int n) {
    int m = image_depth(image);
    if (m < 0)
        throw std::invalid_argument("extract_pieces: image is not a square power-of-two image");
    if (n < 0 || n > m)
        throw std::invalid_argument("extract_pieces: level out of range");

    uint32_t side = uint32_t(1) << (m - n);
    uint64_t count = uint64_t(1) << (2 * n);
    std::vector<Block> pieces(count);
    for (uint64_t i = 0; i < count; ++i) {
        auto [prow, pcol] = piece_coords(i, n);
        Block& b = pieces[i];
        b.side = side;
        b.pixels.resize(size_t(side) * side);
        uint32_t r0 = prow * side, c0 = pcol * side;
        for (uint32_t r = 0; r < side; ++r) {
            const uint8_t* src = &image.pixels[size_t(r0 + r) * image.width + c0];
            std::copy(src, src + side, &b.pixels[size_t(r) * side]);
        }
    }
    return pieces;
}

int block_variation(const Block& block) {
    if (block.pixels.empty())
        throw std::invalid_argument("block_variation: empty block");
    auto [mn, mx] = std::minmax_element(block.pixels.begin(), block.pixels.end());
    return int(*mx) - int(*mn);
}

int image_depth(const GrayImage& image) {
    if (image.width != image.height || image.width == 0) return -1;
    uint32_t side = image.width;
    if ((side & (side - 1)) != 0) return -1;
    int m = 0;
    while ((uint32_t(1) << m) < side) ++m;
    return m;
}

} // namespace vvar
