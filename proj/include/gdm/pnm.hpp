#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gdm {

// Binary PGM (P5) / PPM (P6), 8-bit.
struct PnmImage {
    int width = 0;
    int height = 0;
    int channels = 1;  // 1 = gray, 3 = rgb
    std::vector<uint8_t> pixels;  // row-major, interleaved
};

PnmImage read_pnm(const std::string& path);
void write_pgm(const std::string& path, int height, int width,
               const std::vector<uint8_t>& gray);

// Maps a [-1, 1] vector to 8-bit gray and writes it as P5.
void write_pgm_normalized(const std::string& path, int height, int width,
                          const Eigen::VectorXd& values);

// Round-trip-exact 8-bit mapping: to_unit(from 0..255) and back.
double pixel_to_unit(uint8_t p);
uint8_t unit_to_pixel(double v);

}  // namespace gdm
