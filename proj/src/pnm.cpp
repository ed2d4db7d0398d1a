#include "gdm/pnm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gdm {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

}  // namespace

double pixel_to_unit(uint8_t p) { return static_cast<double>(p) / 127.5 - 1.0; }

uint8_t unit_to_pixel(double v) {
    const double scaled = std::round((v + 1.0) * 127.5);
    return static_cast<uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

PnmImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("pnm: cannot open " + path);
    const std::string magic = next_token(in);
    PnmImage img;
    if (magic == "P5")
        img.channels = 1;
    else if (magic == "P6")
        img.channels = 3;
    else
        throw std::runtime_error("pnm: unsupported magic '" + magic + "' in " + path);
    img.width = std::stoi(next_token(in));
    img.height = std::stoi(next_token(in));
    const int maxval = std::stoi(next_token(in));
    if (img.width < 1 || img.height < 1) throw std::runtime_error("pnm: bad dimensions in " + path);
    if (maxval < 1 || maxval > 255)
        throw std::runtime_error("pnm: only 8-bit images supported: " + path);
    const size_t n = static_cast<size_t>(img.width) * img.height * img.channels;
    img.pixels.resize(n);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("pnm: truncated pixel data in " + path);
    if (maxval != 255)
        for (auto& p : img.pixels)
            p = static_cast<uint8_t>((static_cast<int>(p) * 255 + maxval / 2) / maxval);
    return img;
}

void write_pgm(const std::string& path, int height, int width,
               const std::vector<uint8_t>& gray) {
    if (static_cast<size_t>(height) * width != gray.size())
        throw std::invalid_argument("pnm: pixel count does not match dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pnm: cannot open " + path + " for writing");
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(gray.data()),
              static_cast<std::streamsize>(gray.size()));
    if (!out) throw std::runtime_error("pnm: write failed for " + path);
}

void write_pgm_normalized(const std::string& path, int height, int width,
                          const Eigen::VectorXd& values) {
    if (values.size() != static_cast<Eigen::Index>(height) * width)
        throw std::invalid_argument("pnm: value count does not match dimensions");
    std::vector<uint8_t> gray(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) gray[i] = unit_to_pixel(values(i));
    write_pgm(path, height, width, gray);
}

}  // namespace gdm
