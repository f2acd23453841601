#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstring>

#include "vvar/clustering.hpp"
#include "vvar/codec.hpp"
#include "vvar/errors.hpp"
#include "vvar/rd.hpp"

namespace py = pybind11;
using namespace vvar;

namespace {

using Array = py::array_t<uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage image_from_array(const Array& arr) {
    if (arr.ndim() != 2)
        throw std::invalid_argument("expected a 2-D uint8 array (height, width)");
    GrayImage img(static_cast<uint32_t>(arr.shape(1)),
                  static_cast<uint32_t>(arr.shape(0)));
    std::memcpy(img.pixels.data(), arr.data(), img.pixels.size());
    return img;
}

py::array_t<uint8_t> array_from_image(const GrayImage& img) {
    py::array_t<uint8_t> arr({py::ssize_t(img.height), py::ssize_t(img.width)});
    std::memcpy(arr.mutable_data(), img.pixels.data(), img.pixels.size());
    return arr;
}

VTuple tuple_from_values(const std::vector<int64_t>& values) {
    return VTuple::from_values(values);
}

std::vector<uint8_t> bytes_to_vector(const py::bytes& data) {
    std::string_view view = data;
    return std::vector<uint8_t>(view.begin(), view.end());
}

py::bytes vector_to_bytes(const std::vector<uint8_t>& data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

py::bytes encode_py(const Array& arr, const std::vector<int64_t>& tuple, int threshold,
                    uint64_t seed, uint32_t max_iter, bool weighted, uint32_t threads) {
    GrayImage image = image_from_array(arr);
    VTuple v = tuple_from_values(tuple);
    uint16_t orig_w = static_cast<uint16_t>(image.width);
    uint16_t orig_h = static_cast<uint16_t>(image.height);
    GrayImage square = to_square(image, v.depth());

    EncodeSettings s;
    s.tuple = v;
    s.threshold = threshold;
    s.seed = seed;
    s.max_iter = max_iter;
    s.weighted = weighted;
    s.threads = threads;
    VVarCode code = encode(square, s);
    code.width = orig_w;
    code.height = orig_h;
    return vector_to_bytes(serialize(code));
}

py::array_t<uint8_t> decode_py(const py::bytes& data, bool square) {
    VVarCode code = deserialize(bytes_to_vector(data));
    return array_from_image(square ? decode(code) : decode_original(code));
}

int decode_pixel_py(const py::bytes& data, uint32_t row, uint32_t col) {
    VVarCode code = deserialize(bytes_to_vector(data));
    return decode_pixel(code, pixel_to_address(row, col, code.depth()));
}

py::dict verify_py(const Array& arr, const std::vector<int64_t>& tuple) {
    GrayImage image = image_from_array(arr);
    VTuple v = tuple_from_values(tuple);
    VariabilityReport report = verify_v_variability(to_square(image, v.depth()), v);
    py::dict out;
    out["pass"] = report.pass;
    out["counts"] = report.counts;
    out["bounds"] = report.bounds;
    return out;
}

double storage_upper_bound_py(const std::vector<int64_t>& tuple) {
    return storage_upper_bound(tuple_from_values(tuple)).to_double();
}

double storage_with_constants_py(
    const std::vector<int64_t>& tuple,
    const std::map<int, std::pair<int64_t, int64_t>>& proportions) {
    std::map<int, Rational> p;
    for (const auto& [level, frac] : proportions)
        p[level] = Rational(frac.first, frac.second);
    return storage_with_constants(tuple_from_values(tuple), p).to_double();
}

py::dict constant_proportions_py(const py::bytes& data) {
    VVarCode code = deserialize(bytes_to_vector(data));
    py::dict out;
    for (const auto& [level, p] : constant_proportions(code))
        out[py::int_(level)] = py::make_tuple(p.num(), p.den());
    return out;
}

py::list presets_py() {
    py::list out;
    for (const Preset& p : presets()) {
        py::dict row;
        row["label"] = p.label;
        std::vector<int64_t> values;
        VTuple v = p.tuple();
        for (int k = 1; k <= v.depth(); ++k) values.push_back(v.value(k));
        row["tuple"] = values;
        row["model_bytes"] = p.model_bytes;
        out.append(row);
    }
    return out;
}

py::list sweep_py(const Array& arr, int64_t budget, const std::vector<int>& thresholds,
                  const std::vector<uint64_t>& seeds, uint32_t threads,
                  uint32_t max_iter) {
    GrayImage image = to_square(image_from_array(arr), 9);
    SweepOptions options;
    options.budget = budget;
    options.thresholds = thresholds;
    options.seeds = seeds;
    options.threads = threads;
    options.max_iter = max_iter;

    py::list out;
    for (const RDPoint& p : sweep(image, options)) {
        py::dict row;
        std::vector<int64_t> values;
        for (int k = 1; k <= p.tuple.depth(); ++k) values.push_back(p.tuple.value(k));
        row["tuple"] = values;
        row["threshold"] = int(p.threshold);
        row["seed"] = p.seed;
        row["model_bytes"] = p.model_bytes.to_double();
        row["file_bytes"] = p.file_bytes;
        row["psnr"] = p.psnr_db;
        out.append(row);
    }
    return out;
}

std::vector<size_t> pareto_frontier_py(
    const std::vector<std::pair<double, double>>& points) {
    // Model bytes are exact multiples of 1/8, so the rational reconstruction
    // below is lossless for anything the sweep produces.
    std::vector<RDPoint> pts(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        pts[i].tuple = VTuple::from_values(std::array<int64_t, 1>{1});
        pts[i].model_bytes = Rational(std::llround(points[i].first * 8.0), 8);
        pts[i].psnr_db = points[i].second;
        pts[i].seed = i;   // carry the original index through
    }
    std::vector<size_t> kept;
    for (const RDPoint& p : frontier(pts)) kept.push_back(p.seed);
    return kept;
}

} // namespace

PYBIND11_MODULE(_vvar, m) {
    m.doc() = "V-variable grayscale image codec";

    py::register_exception<PgmError>(m, "PgmError", PyExc_ValueError);
    py::register_exception<CodeError>(m, "CodeError", PyExc_ValueError);

    m.def("load_pgm",
          [](const py::bytes& data) {
              return array_from_image(load_pgm(bytes_to_vector(data)));
          },
          py::arg("data"), "Parse a binary PGM (P5, maxval 255) into an array.");
    m.def("save_pgm",
          [](const Array& arr) { return vector_to_bytes(save_pgm(image_from_array(arr))); },
          py::arg("image"), "Canonical binary PGM bytes for an array.");

    m.def("min_depth", &min_depth, py::arg("width"), py::arg("height"),
          "Smallest m with both dimensions <= 2^m.");
    m.def("to_square",
          [](const Array& arr, int m) {
              return array_from_image(to_square(image_from_array(arr), m));
          },
          py::arg("image"), py::arg("m"),
          "Nearest-neighbour resample onto a 2^m x 2^m grid.");
    m.def("from_square",
          [](const Array& arr, uint32_t width, uint32_t height) {
              return array_from_image(from_square(image_from_array(arr), width, height));
          },
          py::arg("square"), py::arg("width"), py::arg("height"),
          "Inverse of to_square for the given original size.");

    m.def("encode", &encode_py, py::arg("image"), py::arg("tuple"),
          py::arg("threshold") = 0, py::arg("seed") = 0, py::arg("max_iter") = 100,
          py::arg("weighted") = false, py::arg("threads") = 1,
          "Compress an image; non-square inputs are squared to 2^m first. "
          "Returns the serialized .vvar bytes.");
    m.def("decode", &decode_py, py::arg("code"), py::arg("square") = false,
          "Reconstruct an image from .vvar bytes; square=True keeps the "
          "2^m x 2^m raster instead of the original size.");
    m.def("decode_pixel", &decode_pixel_py, py::arg("code"), py::arg("row"),
          py::arg("col"), "Random-access decode of one pixel of the square raster.");

    m.def("psnr",
          [](const Array& a, const Array& b) {
              return psnr(image_from_array(a), image_from_array(b));
          },
          py::arg("a"), py::arg("b"),
          "Peak signal-to-noise ratio in dB (inf for identical images).");

    m.def("verify", &verify_py, py::arg("image"), py::arg("tuple"),
          "Distinct piece counts per level against the tuple's bounds.");

    m.def("storage_upper_bound", &storage_upper_bound_py, py::arg("tuple"),
          "Model bytes of a tuple (exact; every value is a multiple of 1/8).");
    m.def("storage_with_constants", &storage_with_constants_py, py::arg("tuple"),
          py::arg("proportions"),
          "Model bytes with constant-substitution proportions, given as "
          "{parent_level: (numerator, denominator)}.");
    m.def("constant_proportions", &constant_proportions_py, py::arg("code"),
          "Constant-flag proportions per stored parent level, as fractions.");

    m.def("presets", &presets_py, "The eleven rule-of-thumb tuples.");
    m.def("sweep", &sweep_py, py::arg("image"), py::arg("budget") = 5000,
          py::arg("thresholds") = std::vector<int>{0, 15, 30, 45},
          py::arg("seeds") = std::vector<uint64_t>{0}, py::arg("threads") = 0,
          py::arg("max_iter") = 100,
          "Rate-distortion sweep over the tuple space on a 512x512 image.");
    m.def("pareto_frontier", &pareto_frontier_py, py::arg("points"),
          "Indices of the Pareto-maximal (model_bytes, psnr) points, sorted "
          "by model bytes.");
}
