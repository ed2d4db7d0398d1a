#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gdm {

struct Dataset {
    std::vector<int> dims;     // {height, width} for images, {2} for points
    Eigen::MatrixXd samples;   // n x d, values roughly in [-1, 1]
    std::optional<Eigen::MatrixXd> factor_labels;  // n x m, synthetic sets only

    int n() const { return static_cast<int>(samples.rows()); }
    int d() const { return static_cast<int>(samples.cols()); }
    int height() const { return dims.size() == 2 ? dims[0] : 1; }
    int width() const { return dims.size() == 2 ? dims[1] : static_cast<int>(dims[0]); }
    void validate() const;
};

// Equally spaced isotropic modes on a circle.
Dataset gaussian_mixture_2d(int modes, double radius, double sigma, int n, uint64_t seed);

// Center of the mode nearest to each generated sample; used as a ground
// truth by tests.
Eigen::Vector2d mixture_mode_center(int modes, double radius, int mode);

// Grayscale blob images driven by four latent factors (background level,
// blob x, blob y, blob radius); labels hold the raw factor values in [0,1].
Dataset synthetic_factors(int height, int width, int n, uint64_t seed);

// Deterministic renderer behind synthetic_factors, exposed so labels can be
// re-rendered and compared bit for bit.
Eigen::VectorXd render_factor_image(int height, int width, const Eigen::Vector4d& factors);

// Loads every PGM/PPM in a directory: grayscale conversion (luma weights
// 0.299/0.587/0.114), center crop to square, box downsample to target, and
// the exact [0,255] -> [-1,1] pixel mapping. Unreadable files are skipped
// with a warning; their count is returned through skipped (optional).
Dataset load_image_dir(const std::string& path, int target_height, int target_width,
                       int* skipped = nullptr);

// Raw float64 block plus JSON sidecar ({path}.json) describing shape.
void save_dataset_cache(const std::string& path, const Dataset& dataset);
Dataset load_dataset_cache(const std::string& path);

}  // namespace gdm
