#include "gdm/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gdm/pnm.hpp"
#include "gdm/rng.hpp"

namespace fs = std::filesystem;

namespace gdm {

void Dataset::validate() const {
    if (n() < 1) throw std::invalid_argument("dataset: needs at least one sample");
    int expected = 1;
    for (int v : dims) expected *= v;
    if (expected != d()) throw std::invalid_argument("dataset: dims do not match sample width");
    if (!samples.allFinite()) throw std::invalid_argument("dataset: non-finite sample values");
    if (samples.cwiseAbs().maxCoeff() > 1.5)
        throw std::invalid_argument("dataset: samples outside [-1.5, 1.5]");
}

Eigen::Vector2d mixture_mode_center(int modes, double radius, int mode) {
    const double angle = 2.0 * M_PI * mode / modes;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

Dataset gaussian_mixture_2d(int modes, double radius, double sigma, int n, uint64_t seed) {
    if (modes < 1) throw std::invalid_argument("mixture: modes must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("mixture: sigma must be > 0");
    if (n < 1) throw std::invalid_argument("mixture: n must be >= 1");
    Dataset ds;
    ds.dims = {2};
    ds.samples.resize(n, 2);
    Rng rng(mix_seed(seed, 0x6d697832ull));
    for (int i = 0; i < n; ++i) {
        const int mode = static_cast<int>(rng.uniform_index(modes));
        const Eigen::Vector2d c = mixture_mode_center(modes, radius, mode);
        ds.samples(i, 0) = c.x() + sigma * rng.normal();
        ds.samples(i, 1) = c.y() + sigma * rng.normal();
    }
    ds.validate();
    return ds;
}

Eigen::VectorXd render_factor_image(int height, int width, const Eigen::Vector4d& factors) {
    // factors in [0,1]: background level, blob center x, blob center y,
    // blob radius. Smooth bump on a flat background, range kept in [-1, 1].
    const double background = -0.9 + 0.9 * factors(0);
    const double cx = (0.15 + 0.7 * factors(1)) * (width - 1);
    const double cy = (0.15 + 0.7 * factors(2)) * (height - 1);
    const double r = (0.08 + 0.22 * factors(3)) * std::min(height, width);
    const double amplitude = 0.85;
    Eigen::VectorXd img(static_cast<Eigen::Index>(height) * width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            const double bump = amplitude * std::exp(-0.5 * (dx * dx + dy * dy) / (r * r));
            img(static_cast<Eigen::Index>(y) * width + x) = background + bump;
        }
    return img;
}

Dataset synthetic_factors(int height, int width, int n, uint64_t seed) {
    if (height != width || (height != 8 && height != 16 && height != 32))
        throw std::invalid_argument("synthetic factors: size must be 8, 16 or 32 square");
    if (n < 1) throw std::invalid_argument("synthetic factors: n must be >= 1");
    Dataset ds;
    ds.dims = {height, width};
    ds.samples.resize(n, static_cast<Eigen::Index>(height) * width);
    Eigen::MatrixXd labels(n, 4);
    Rng rng(mix_seed(seed, 0x66616374ull));
    for (int i = 0; i < n; ++i) {
        Eigen::Vector4d f;
        for (int j = 0; j < 4; ++j) f(j) = rng.uniform();
        labels.row(i) = f.transpose();
        ds.samples.row(i) = render_factor_image(height, width, f).transpose();
    }
    ds.factor_labels = labels;
    ds.validate();
    return ds;
}

namespace {

// Area-average resample of a square crop down to (th, tw).
Eigen::VectorXd box_downsample(const Eigen::MatrixXd& src, int th, int tw) {
    const int sh = static_cast<int>(src.rows());
    const int sw = static_cast<int>(src.cols());
    Eigen::VectorXd out(static_cast<Eigen::Index>(th) * tw);
    for (int y = 0; y < th; ++y)
        for (int x = 0; x < tw; ++x) {
            const double y0 = static_cast<double>(y) * sh / th;
            const double y1 = static_cast<double>(y + 1) * sh / th;
            const double x0 = static_cast<double>(x) * sw / tw;
            const double x1 = static_cast<double>(x + 1) * sw / tw;
            double acc = 0.0, area = 0.0;
            for (int sy = static_cast<int>(y0); sy < static_cast<int>(std::ceil(y1)); ++sy)
                for (int sx = static_cast<int>(x0); sx < static_cast<int>(std::ceil(x1)); ++sx) {
                    const double wy = std::min<double>(y1, sy + 1) - std::max<double>(y0, sy);
                    const double wx = std::min<double>(x1, sx + 1) - std::max<double>(x0, sx);
                    acc += wy * wx * src(sy, sx);
                    area += wy * wx;
                }
            out(static_cast<Eigen::Index>(y) * tw + x) = acc / area;
        }
    return out;
}

}  // namespace

Dataset load_image_dir(const std::string& path, int target_height, int target_width,
                       int* skipped) {
    if (target_height < 1 || target_width < 1)
        throw std::invalid_argument("image dir: bad target size");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("image dir: no PGM/PPM files in " + path);

    std::vector<Eigen::VectorXd> rows;
    int skip_count = 0;
    for (const auto& file : files) {
        try {
            const PnmImage img = read_pnm(file.string());
            Eigen::MatrixXd gray(img.height, img.width);
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x) {
                    const size_t base =
                        (static_cast<size_t>(y) * img.width + x) * img.channels;
                    double v;
                    if (img.channels == 3)
                        v = 0.299 * img.pixels[base] + 0.587 * img.pixels[base + 1] +
                            0.114 * img.pixels[base + 2];
                    else
                        v = img.pixels[base];
                    gray(y, x) = v / 127.5 - 1.0;
                }
            const int side = std::min(img.height, img.width);
            const int oy = (img.height - side) / 2;
            const int ox = (img.width - side) / 2;
            rows.push_back(
                box_downsample(gray.block(oy, ox, side, side), target_height, target_width));
        } catch (const std::exception& e) {
            ++skip_count;
            std::cerr << "warning: skipping " << file << ": " << e.what() << "\n";
        }
    }
    if (skipped) *skipped = skip_count;
    if (rows.empty()) throw std::runtime_error("image dir: no readable images in " + path);

    Dataset ds;
    ds.dims = {target_height, target_width};
    ds.samples.resize(static_cast<Eigen::Index>(rows.size()), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i) ds.samples.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    ds.validate();
    return ds;
}

void save_dataset_cache(const std::string& path, const Dataset& dataset) {
    dataset.validate();
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw std::runtime_error("dataset cache: cannot open " + path + " for writing");
    bin.write(reinterpret_cast<const char*>(dataset.samples.data()),
              static_cast<std::streamsize>(sizeof(double) * dataset.samples.size()));
    if (dataset.factor_labels)
        bin.write(reinterpret_cast<const char*>(dataset.factor_labels->data()),
                  static_cast<std::streamsize>(sizeof(double) * dataset.factor_labels->size()));
    if (!bin) throw std::runtime_error("dataset cache: write failed for " + path);

    nlohmann::json meta;
    meta["n"] = dataset.n();
    meta["d"] = dataset.d();
    meta["dims"] = dataset.dims;
    meta["factor_dim"] =
        dataset.factor_labels ? static_cast<int>(dataset.factor_labels->cols()) : 0;
    std::ofstream side(path + ".json");
    if (!side) throw std::runtime_error("dataset cache: cannot write sidecar for " + path);
    side << meta.dump(2) << "\n";
}

Dataset load_dataset_cache(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("dataset cache: missing sidecar " + path + ".json");
    nlohmann::json meta = nlohmann::json::parse(side);
    Dataset ds;
    const int n = meta.at("n").get<int>();
    const int d = meta.at("d").get<int>();
    ds.dims = meta.at("dims").get<std::vector<int>>();
    const int factor_dim = meta.at("factor_dim").get<int>();

    std::ifstream bin(path, std::ios::binary);
    if (!bin) throw std::runtime_error("dataset cache: cannot open " + path);
    ds.samples.resize(n, d);
    bin.read(reinterpret_cast<char*>(ds.samples.data()),
             static_cast<std::streamsize>(sizeof(double) * ds.samples.size()));
    if (factor_dim > 0) {
        Eigen::MatrixXd labels(n, factor_dim);
        bin.read(reinterpret_cast<char*>(labels.data()),
                 static_cast<std::streamsize>(sizeof(double) * labels.size()));
        ds.factor_labels = labels;
    }
    if (!bin) throw std::runtime_error("dataset cache: truncated payload in " + path);
    ds.validate();
    return ds;
}

}  // namespace gdm
