#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "vvar/errors.hpp"
#include "vvar/image.hpp"

using namespace vvar;

namespace {

std::vector<uint8_t> pgm_bytes(const std::string& header,
                               std::initializer_list<uint8_t> pixels) {
    std::vector<uint8_t> bytes(header.begin(), header.end());
    bytes.insert(bytes.end(), pixels);
    return bytes;
}

} // namespace

TEST_CASE("load_pgm parses a minimal P5 file") {
    auto img = load_pgm(pgm_bytes("P5\n2 2\n255\n", {0, 1, 2, 3}));
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.at(0, 0) == 0);
    CHECK(img.at(0, 1) == 1);
    CHECK(img.at(1, 0) == 2);
    CHECK(img.at(1, 1) == 3);
}

TEST_CASE("load_pgm accepts comments and mixed whitespace") {
    auto img = load_pgm(pgm_bytes("P5 # comment\n# another\n 2\t1 \n255 ", {9, 7}));
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.pixels == std::vector<uint8_t>{9, 7});
}

TEST_CASE("load_pgm error cases are distinct") {
    CHECK_THROWS_WITH_AS(load_pgm(pgm_bytes("P6\n1 1\n255\n", {0})),
                         doctest::Contains("P5"), PgmError);
    CHECK_THROWS_AS(load_pgm(pgm_bytes("P5\n1 1\n65535\n", {0, 0})), PgmError);
    try {
        load_pgm(pgm_bytes("P5\n1 1\n65535\n", {0, 0}));
    } catch (const PgmError& e) {
        CHECK(e.kind() == PgmError::Kind::UnsupportedMaxval);
        CHECK(std::string(e.what()).find("unsupported maxval") != std::string::npos);
    }
    try {
        load_pgm(pgm_bytes("P5\n2 2\n255\n", {0, 1, 2}));
        FAIL("expected truncation");
    } catch (const PgmError& e) {
        CHECK(e.kind() == PgmError::Kind::Truncated);
    }
    try {
        load_pgm(pgm_bytes("P5\n1 1\n255\n", {0, 1}));
        FAIL("expected trailing data");
    } catch (const PgmError& e) {
        CHECK(e.kind() == PgmError::Kind::TrailingData);
    }
    CHECK_THROWS_AS(load_pgm(pgm_bytes("P5\nx 1\n255\n", {0})), PgmError);
}

TEST_CASE("save_pgm canonical form") {
    GrayImage one(1, 1);
    one.pixels = {42};
    auto bytes = save_pgm(one);
    CHECK(bytes == pgm_bytes("P5\n1 1\n255\n", {42}));

    GrayImage sq(2, 2);
    sq.pixels = {0, 1, 2, 3};
    CHECK(save_pgm(sq) == pgm_bytes("P5\n2 2\n255\n", {0, 1, 2, 3}));
}

TEST_CASE("pgm roundtrips both ways on random rasters") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        uint32_t w = std::uniform_int_distribution<uint32_t>(1, 17)(rng);
        uint32_t h = std::uniform_int_distribution<uint32_t>(1, 17)(rng);
        GrayImage img = vvar_test::random_image(w, h, rng);
        auto bytes = save_pgm(img);
        CHECK(load_pgm(bytes) == img);
        CHECK(save_pgm(load_pgm(bytes)) == bytes);
    }
}

TEST_CASE("to_square is the identity on power-of-two squares") {
    std::mt19937 rng(11);
    GrayImage img = vvar_test::random_image(8, 8, rng);
    CHECK(to_square(img, 3) == img);
}

TEST_CASE("to_square replicates a single pixel") {
    GrayImage img(1, 1);
    img.pixels = {77};
    GrayImage sq = to_square(img, 1);
    CHECK(sq.width == 2);
    CHECK(sq.pixels == std::vector<uint8_t>{77, 77, 77, 77});
}

TEST_CASE("to_square matches the brute-force nearest-index rule") {
    std::mt19937 rng(13);
    GrayImage img = vvar_test::random_image(4, 2, rng);   // 2x4 pixels grid
    int m = 2;
    GrayImage sq = to_square(img, m);
    uint32_t side = 4;
    for (uint32_t a = 0; a < side; ++a)
        for (uint32_t b = 0; b < side; ++b) {
            // Oracle: floating-point centre-of-cell flooring, clamped.
            auto clampi = [](long v, long hi) { return std::min(std::max(v, 0L), hi); };
            long sr = clampi(long(std::floor((a + 0.5) * img.height / side)), img.height - 1);
            long sc = clampi(long(std::floor((b + 0.5) * img.width / side)), img.width - 1);
            CHECK(sq.at(a, b) == img.at(uint32_t(sr), uint32_t(sc)));
        }
    CHECK_THROWS_AS(to_square(img, 1), std::invalid_argument);
}

TEST_CASE("from_square inverts to_square on full-size and constant images") {
    std::mt19937 rng(17);
    GrayImage img = vvar_test::random_image(8, 8, rng);
    CHECK(from_square(to_square(img, 3), 8, 8) == img);

    GrayImage flat(5, 3, 99);
    CHECK(from_square(to_square(flat, 3), 5, 3) == flat);
}

TEST_CASE("from_square matches the brute-force index map") {
    std::mt19937 rng(19);
    GrayImage sq = vvar_test::random_image(8, 8, rng);
    uint32_t w = 5, h = 3;
    GrayImage out = from_square(sq, w, h);
    CHECK(out.width == w);
    CHECK(out.height == h);
    for (uint32_t r = 0; r < h; ++r)
        for (uint32_t c = 0; c < w; ++c) {
            long sr = long(std::floor((r + 0.5) * 8.0 / h));
            long sc = long(std::floor((c + 0.5) * 8.0 / w));
            CHECK(out.at(r, c) == sq.at(uint32_t(sr), uint32_t(sc)));
        }
    CHECK_THROWS_AS(from_square(sq, 9, 3), std::invalid_argument);
}

TEST_CASE("pixel_to_address picks quadrants top-down") {
    CHECK(pixel_to_address(0, 0, 2).digits == std::vector<uint8_t>{1, 1});
    CHECK(pixel_to_address(3, 3, 2).digits == std::vector<uint8_t>{4, 4});
    CHECK(pixel_to_address(3, 1, 2).digits == std::vector<uint8_t>{3, 4});
    CHECK_THROWS_AS(pixel_to_address(4, 0, 2), std::invalid_argument);
}

TEST_CASE("address_to_pixel inverts pixel_to_address exhaustively") {
    QuadAddress all_ul;
    all_ul.digits = {1, 1, 1, 1};
    CHECK(address_to_pixel(all_ul) == std::pair<uint32_t, uint32_t>{0, 0});

    QuadAddress ur1;
    ur1.digits = {2};
    CHECK(address_to_pixel(ur1) == std::pair<uint32_t, uint32_t>{0, 1});

    for (int m = 1; m <= 6; ++m) {
        uint32_t side = uint32_t(1) << m;
        for (uint32_t r = 0; r < side; ++r)
            for (uint32_t c = 0; c < side; ++c)
                CHECK(address_to_pixel(pixel_to_address(r, c, m)) ==
                      std::pair<uint32_t, uint32_t>{r, c});
    }
}

TEST_CASE("extract_pieces level 0 and level m") {
    std::mt19937 rng(23);
    GrayImage img = vvar_test::random_image(4, 4, rng);

    auto whole = extract_pieces(img, 0);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].side == 4);
    CHECK(whole[0].pixels == img.pixels);

    // Level m: one-pixel blocks in address order are a permutation of the raster.
    auto leaves = extract_pieces(img, 2);
    REQUIRE(leaves.size() == 16);
    for (uint64_t i = 0; i < 16; ++i) {
        auto addr = QuadAddress{};
        for (int j = 1; j >= 0; --j)
            addr.digits.push_back(static_cast<uint8_t>(((i >> (2 * j)) & 3) + 1));
        auto [r, c] = address_to_pixel(addr);
        CHECK(leaves[i].pixels == std::vector<uint8_t>{img.at(r, c)});
    }
    CHECK_THROWS_AS(extract_pieces(img, 3), std::invalid_argument);
}

TEST_CASE("extract_pieces level 1 matches the hand partition") {
    GrayImage img(4, 4);
    for (int i = 0; i < 16; ++i) img.pixels[i] = static_cast<uint8_t>(i);
    auto pieces = extract_pieces(img, 1);
    REQUIRE(pieces.size() == 4);
    CHECK(pieces[0].pixels == std::vector<uint8_t>{0, 1, 4, 5});      // upper left
    CHECK(pieces[1].pixels == std::vector<uint8_t>{2, 3, 6, 7});      // upper right
    CHECK(pieces[2].pixels == std::vector<uint8_t>{8, 9, 12, 13});    // lower left
    CHECK(pieces[3].pixels == std::vector<uint8_t>{10, 11, 14, 15});  // lower right
}

TEST_CASE("pieces tile the image at every level") {
    std::mt19937 rng(29);
    GrayImage img = vvar_test::random_image(16, 16, rng);
    for (int n = 0; n <= 4; ++n) {
        auto pieces = extract_pieces(img, n);
        GrayImage rebuilt(16, 16);
        uint32_t side = pieces[0].side;
        for (uint64_t i = 0; i < pieces.size(); ++i) {
            auto [pr, pc] = piece_coords(i, n);
            for (uint32_t r = 0; r < side; ++r)
                for (uint32_t c = 0; c < side; ++c)
                    rebuilt.at(pr * side + r, pc * side + c) =
                        pieces[i].pixels[size_t(r) * side + c];
        }
        CHECK(rebuilt == img);
    }
}

TEST_CASE("block_variation") {
    Block flat{2, {9, 9, 9, 9}};
    CHECK(block_variation(flat) == 0);
    Block extremes{2, {0, 255, 10, 10}};
    CHECK(block_variation(extremes) == 255);
    Block mid{2, {10, 12, 11, 25}};
    CHECK(block_variation(mid) == 15);

    std::mt19937 rng(31);
    for (int t = 0; t < 20; ++t) {
        GrayImage img = vvar_test::random_image(4, 4, rng);
        for (auto& b : extract_pieces(img, 1))
            CHECK((block_variation(b) == 0) ==
                  std::all_of(b.pixels.begin(), b.pixels.end(),
                              [&](uint8_t p) { return p == b.pixels[0]; }));
    }
}
