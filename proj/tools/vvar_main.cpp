// Command line front end: encode / decode / psnr / verify / sweep / presets.
//
// Exit status: 0 success, 1 usage error, 2 I/O or file format error,
// 3 validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vvar/codec.hpp"
#include "vvar/errors.hpp"
#include "vvar/rd.hpp"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw vvar::PgmError(vvar::PgmError::Kind::Truncated, "cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::string& path, const void* data, size_t size) {
    std::ofstream out(path, std::ios::binary);
    if (!out.write(static_cast<const char*>(data), std::streamsize(size)))
        throw std::ios_base::failure("cannot write " + path);
}

std::vector<int64_t> parse_int_list(const std::string& text) {
    std::vector<int64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        int64_t v;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
        if (used != item.size()) throw UsageError("not a number: '" + item + "'");
        values.push_back(v);
    }
    if (values.empty()) throw UsageError("empty list");
    return values;
}

vvar::VTuple tuple_from_flags(const std::string& preset_label,
                              const std::string& tuple_text) {
    if (!preset_label.empty() && !tuple_text.empty())
        throw UsageError("--preset and --tuple are mutually exclusive");
    if (!preset_label.empty()) {
        const vvar::Preset* p = vvar::find_preset(preset_label);
        if (!p) throw UsageError("unknown preset '" + preset_label + "'");
        return p->tuple();
    }
    if (tuple_text.empty()) throw UsageError("one of --preset or --tuple is required");
    return vvar::VTuple::from_values(parse_int_list(tuple_text));
}

std::string format_psnr(double db) {
    if (std::isinf(db)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", db);
    return buf;
}

int run(int argc, char** argv) {
    CLI::App app{"V-variable grayscale image codec"};
    app.require_subcommand(1);

    std::string in_path, out_path, preset_label, tuple_text;
    int threshold = 0;
    uint64_t seed = 0;
    uint32_t max_iter = 100, threads = 1;

    CLI::App* cmd_encode = app.add_subcommand("encode", "Compress a PGM image");
    cmd_encode->add_option("--preset", preset_label, "Preset label (see 'presets')");
    cmd_encode->add_option("--tuple", tuple_text, "Comma-separated V_1,...,V_m");
    cmd_encode->add_option("--threshold", threshold, "Constant-block threshold")
        ->check(CLI::Range(0, 255));
    cmd_encode->add_option("--seed", seed, "Clustering seed");
    cmd_encode->add_option("--max-iter", max_iter, "Max k-means iterations");
    cmd_encode->add_option("--threads", threads, "Clustering threads (0 = hardware)");
    cmd_encode->add_option("input", in_path, "Input .pgm")->required();
    cmd_encode->add_option("output", out_path, "Output .vvar")->required();

    CLI::App* cmd_decode = app.add_subcommand("decode", "Reconstruct a PGM image");
    cmd_decode->add_option("input", in_path, "Input .vvar")->required();
    cmd_decode->add_option("output", out_path, "Output .pgm")->required();

    std::string psnr_a, psnr_b;
    CLI::App* cmd_psnr = app.add_subcommand("psnr", "Peak signal-to-noise ratio");
    cmd_psnr->add_option("a", psnr_a, "First .pgm")->required();
    cmd_psnr->add_option("b", psnr_b, "Second .pgm")->required();

    CLI::App* cmd_verify = app.add_subcommand("verify", "Check per-level variability");
    cmd_verify->add_option("--preset", preset_label, "Preset label");
    cmd_verify->add_option("--tuple", tuple_text, "Comma-separated V_1,...,V_m");
    cmd_verify->add_option("input", in_path, "Input .pgm")->required();

    std::string thresholds_text = "0,15,30,45", seeds_text = "0", csv_path;
    int64_t budget = 5000;
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Rate-distortion sweep");
    cmd_sweep->add_option("--budget", budget, "Max model bytes");
    cmd_sweep->add_option("--thresholds", thresholds_text, "Comma-separated thresholds");
    cmd_sweep->add_option("--seeds", seeds_text, "Comma-separated seeds");
    cmd_sweep->add_option("--threads", threads, "Worker threads (0 = hardware)");
    cmd_sweep->add_option("--out", csv_path, "Output CSV path")->required();
    cmd_sweep->add_option("input", in_path, "Input .pgm")->required();

    CLI::App* cmd_presets = app.add_subcommand("presets", "List the preset tuples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (*cmd_encode) {
        vvar::VTuple tuple = tuple_from_flags(preset_label, tuple_text);
        vvar::GrayImage image = vvar::load_pgm(read_file(in_path));
        uint16_t orig_w = static_cast<uint16_t>(image.width);
        uint16_t orig_h = static_cast<uint16_t>(image.height);
        vvar::GrayImage square = vvar::to_square(image, tuple.depth());

        vvar::EncodeSettings settings;
        settings.tuple = tuple;
        settings.threshold = threshold;
        settings.seed = seed;
        settings.max_iter = max_iter;
        settings.threads = threads;
        vvar::VVarCode code = vvar::encode(square, settings);
        code.width = orig_w;
        code.height = orig_h;

        std::vector<uint8_t> bytes = vvar::serialize(code);
        write_file(out_path, bytes.data(), bytes.size());
        std::cout << "model " << vvar::storage_upper_bound(tuple).to_string()
                  << " B, file " << bytes.size() << " B\n";
    } else if (*cmd_decode) {
        vvar::VVarCode code = vvar::deserialize(read_file(in_path));
        std::vector<uint8_t> bytes = vvar::save_pgm(vvar::decode_original(code));
        write_file(out_path, bytes.data(), bytes.size());
    } else if (*cmd_psnr) {
        vvar::GrayImage a = vvar::load_pgm(read_file(psnr_a));
        vvar::GrayImage b = vvar::load_pgm(read_file(psnr_b));
        std::cout << format_psnr(vvar::psnr(a, b)) << "\n";
    } else if (*cmd_verify) {
        vvar::VTuple tuple = tuple_from_flags(preset_label, tuple_text);
        vvar::GrayImage image = vvar::load_pgm(read_file(in_path));
        vvar::GrayImage square = vvar::to_square(image, tuple.depth());
        vvar::VariabilityReport report = vvar::verify_v_variability(square, tuple);
        for (size_t n = 0; n < report.counts.size(); ++n)
            std::cout << "level " << n + 1 << ": " << report.counts[n]
                      << " distinct (bound " << report.bounds[n] << ")\n";
        std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
        if (!report.pass) return 3;
    } else if (*cmd_sweep) {
        vvar::GrayImage image = vvar::load_pgm(read_file(in_path));
        vvar::GrayImage square = vvar::to_square(image, 9);

        vvar::SweepOptions options;
        options.budget = budget;
        options.thresholds.clear();
        for (int64_t t : parse_int_list(thresholds_text))
            options.thresholds.push_back(static_cast<int>(t));
        options.seeds.clear();
        for (int64_t s : parse_int_list(seeds_text))
            options.seeds.push_back(static_cast<uint64_t>(s));
        options.threads = threads;

        std::vector<vvar::RDPoint> points = vvar::sweep(square, options);
        std::string csv = vvar::to_csv(points);
        write_file(csv_path, csv.data(), csv.size());
        std::cout << points.size() << " points\n";
    } else if (*cmd_presets) {
        std::printf("%-6s %5s %5s %5s %5s %5s  %s\n", "label", "V4", "V5", "V6", "V7",
                    "V8", "model bytes");
        for (const vvar::Preset& p : vvar::presets())
            std::printf("%-6s %5lld %5lld %5lld %5lld %5lld  %lld\n", p.label.c_str(),
                        (long long)p.middle[0], (long long)p.middle[1],
                        (long long)p.middle[2], (long long)p.middle[3],
                        (long long)p.middle[4], (long long)p.model_bytes);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const vvar::PgmError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vvar::CodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
