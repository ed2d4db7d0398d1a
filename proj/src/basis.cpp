#include "gdm/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace gdm {

namespace {

constexpr uint32_t kCacheMagic = 0x424d4447;  // "GDMB"

// Orthonormal DCT-II basis vectors as matrix columns: column u is the
// u-th cosine mode sampled at half-integer grid points.
Eigen::MatrixXd dct2_basis_1d(int n) {
    Eigen::MatrixXd b(n, n);
    const double s0 = std::sqrt(1.0 / n);
    const double s = std::sqrt(2.0 / n);
    for (int u = 0; u < n; ++u)
        for (int i = 0; i < n; ++i)
            b(i, u) = (u == 0 ? s0 : s) * std::cos(M_PI * (2.0 * i + 1.0) * u / (2.0 * n));
    return b;
}

// Mirror an out-of-range index back into [0, n) with edge repetition
// (half-sample symmetric extension), folding as often as needed.
int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

struct EigSorted {
    Eigen::MatrixXd vectors;  // columns, sorted by descending eigenvalue
    Eigen::VectorXd values;
};

EigSorted eigendecompose_descending(const Eigen::MatrixXd& m, const std::string& what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed for " + what);
    const int n = static_cast<int>(m.rows());
    EigSorted out;
    out.vectors.resize(n, n);
    out.values.resize(n);
    for (int i = 0; i < n; ++i) {
        // Eigen returns ascending order; flip it.
        const int src = n - 1 - i;
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        // Deterministic sign: largest-magnitude entry positive.
        int arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        out.vectors.col(i) = v;
        out.values(i) = solver.eigenvalues()(src);
    }
    return out;
}

}  // namespace

std::string basis_kind_name(BasisKind kind) {
    switch (kind) {
        case BasisKind::identity: return "identity";
        case BasisKind::dct2: return "dct2";
        case BasisKind::blur: return "blur";
    }
    return "identity";
}

BasisKind basis_kind_from_name(const std::string& name) {
    if (name == "identity") return BasisKind::identity;
    if (name == "dct2") return BasisKind::dct2;
    if (name == "blur") return BasisKind::blur;
    throw std::invalid_argument("unknown basis kind: " + name);
}

Eigen::MatrixXd gaussian_blur_matrix_1d(int n, double sigma) {
    if (n < 1) throw std::invalid_argument("blur matrix: n must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("blur matrix: sigma must be > 0");
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
    Eigen::VectorXd kernel(2 * radius + 1);
    for (int m = -radius; m <= radius; ++m)
        kernel(m + radius) = std::exp(-0.5 * (m * m) / (sigma * sigma));
    kernel /= kernel.sum();

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int m = -radius; m <= radius; ++m) w(i, reflect_index(i + m, n)) += kernel(m + radius);
    return 0.5 * (w + w.transpose());
}

OrthoBasis OrthoBasis::identity(int d) {
    if (d < 1) throw std::invalid_argument("identity basis: d must be >= 1");
    OrthoBasis b;
    b.kind_ = BasisKind::identity;
    b.d_ = d;
    b.height_ = 1;
    b.width_ = d;
    b.freq_order_.resize(d);
    b.freq_rank_.resize(d);
    std::iota(b.freq_order_.begin(), b.freq_order_.end(), 0);
    std::iota(b.freq_rank_.begin(), b.freq_rank_.end(), 0);
    b.spectrum_ = Eigen::VectorXd::LinSpaced(d, 0.0, d - 1.0);
    return b;
}

OrthoBasis OrthoBasis::dct2(int height, int width) {
    if (height < 1 || width < 1) throw std::invalid_argument("dct2 basis: bad dimensions");
    OrthoBasis b;
    b.kind_ = BasisKind::dct2;
    b.height_ = height;
    b.width_ = width;
    b.d_ = height * width;
    b.row_basis_ = dct2_basis_1d(height);
    b.col_basis_ = dct2_basis_1d(width);
    b.build_freq_order_dct();
    return b;
}

OrthoBasis OrthoBasis::blur(int height, int width, double sigma) {
    if (height < 1 || width < 1) throw std::invalid_argument("blur basis: bad dimensions");
    if (!(sigma > 0.0)) throw std::invalid_argument("blur basis: sigma must be > 0");
    OrthoBasis b;
    b.kind_ = BasisKind::blur;
    b.height_ = height;
    b.width_ = width;
    b.d_ = height * width;
    b.sigma_ = sigma;
    const EigSorted rows = eigendecompose_descending(
        gaussian_blur_matrix_1d(height, sigma), "blur row axis (sigma=" + std::to_string(sigma) + ")");
    b.row_basis_ = rows.vectors;
    b.row_eigenvalues_ = rows.values;
    const EigSorted cols = eigendecompose_descending(
        gaussian_blur_matrix_1d(width, sigma), "blur column axis (sigma=" + std::to_string(sigma) + ")");
    b.col_basis_ = cols.vectors;
    b.col_eigenvalues_ = cols.values;
    b.build_freq_order_blur();
    return b;
}

void OrthoBasis::build_freq_order_dct() {
    std::vector<int> idx(d_);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> radius(d_);
    for (int u = 0; u < height_; ++u)
        for (int v = 0; v < width_; ++v) {
            const double ru = static_cast<double>(u) / height_;
            const double rv = static_cast<double>(v) / width_;
            radius[u * width_ + v] = std::sqrt(ru * ru + rv * rv);
        }
    // Ascending radius, ties broken by (u, v) == raw index order.
    std::sort(idx.begin(), idx.end(), [&](int a, int c) {
        if (radius[a] != radius[c]) return radius[a] < radius[c];
        return a < c;
    });
    freq_order_ = idx;
    freq_rank_.assign(d_, 0);
    spectrum_.resize(d_);
    for (int p = 0; p < d_; ++p) {
        freq_rank_[freq_order_[p]] = p;
        spectrum_(p) = radius[freq_order_[p]];
    }
}

void OrthoBasis::build_freq_order_blur() {
    std::vector<int> idx(d_);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> key(d_);
    for (int u = 0; u < height_; ++u)
        for (int v = 0; v < width_; ++v)
            key[u * width_ + v] = row_eigenvalues_(u) * col_eigenvalues_(v);
    // Descending eigenvalue product: strong blur survival = low frequency.
    std::sort(idx.begin(), idx.end(), [&](int a, int c) {
        if (key[a] != key[c]) return key[a] > key[c];
        return a < c;
    });
    freq_order_ = idx;
    freq_rank_.assign(d_, 0);
    spectrum_.resize(d_);
    for (int p = 0; p < d_; ++p) {
        freq_rank_[freq_order_[p]] = p;
        spectrum_(p) = key[freq_order_[p]];
    }
}

Eigen::VectorXd OrthoBasis::forward_apply(const Eigen::VectorXd& x) const {
    if (x.size() != d_) throw std::invalid_argument("basis: vector length != d");
    if (is_identity()) return x;
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        image(x.data(), height_, width_);
    Eigen::MatrixXd coeffs = row_basis_.transpose() * image * col_basis_;
    Eigen::VectorXd out(d_);
    for (int u = 0; u < height_; ++u)
        for (int v = 0; v < width_; ++v) out(u * width_ + v) = coeffs(u, v);
    return out;
}

Eigen::VectorXd OrthoBasis::inverse_apply(const Eigen::VectorXd& y) const {
    if (y.size() != d_) throw std::invalid_argument("basis: vector length != d");
    if (is_identity()) return y;
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        coeffs(y.data(), height_, width_);
    Eigen::MatrixXd image = row_basis_ * coeffs * col_basis_.transpose();
    Eigen::VectorXd out(d_);
    for (int r = 0; r < height_; ++r)
        for (int c = 0; c < width_; ++c) out(r * width_ + c) = image(r, c);
    return out;
}

Eigen::VectorXd OrthoBasis::to_freq(const Eigen::VectorXd& x) const {
    if (is_identity()) {
        if (x.size() != d_) throw std::invalid_argument("basis: vector length != d");
        return x;
    }
    const Eigen::VectorXd raw = forward_apply(x);
    Eigen::VectorXd out(d_);
    for (int p = 0; p < d_; ++p) out(p) = raw(freq_order_[p]);
    return out;
}

Eigen::VectorXd OrthoBasis::from_freq(const Eigen::VectorXd& y) const {
    if (is_identity()) {
        if (y.size() != d_) throw std::invalid_argument("basis: vector length != d");
        return y;
    }
    if (y.size() != d_) throw std::invalid_argument("basis: vector length != d");
    Eigen::VectorXd raw(d_);
    for (int p = 0; p < d_; ++p) raw(freq_order_[p]) = y(p);
    return inverse_apply(raw);
}

Eigen::VectorXd OrthoBasis::basis_vector(int index) const {
    if (index < 0 || index >= d_) throw std::invalid_argument("basis: index out of range");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d_);
    e(index) = 1.0;
    return inverse_apply(e);
}

Eigen::MatrixXd OrthoBasis::dense_matrix() const {
    Eigen::MatrixXd u(d_, d_);
    for (int j = 0; j < d_; ++j) u.col(j) = basis_vector(j);
    return u;
}

namespace {

void write_f64(std::ofstream& out, const Eigen::MatrixXd& m) {
    // Eigen stores column-major; dump as-is (little-endian host assumed).
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
}

void read_f64(std::ifstream& in, Eigen::MatrixXd& m) {
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!in) throw std::runtime_error("basis cache: truncated payload");
}

}  // namespace

void save_basis_cache(const std::string& path, const OrthoBasis& basis) {
    if (basis.kind() != BasisKind::blur)
        throw std::invalid_argument("basis cache: only eigenbases are cached");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("basis cache: cannot open " + path + " for writing");
    const uint32_t magic = kCacheMagic;
    const uint32_t d = static_cast<uint32_t>(basis.d());
    const uint16_t kind = static_cast<uint16_t>(basis.kind());
    const uint16_t height = static_cast<uint16_t>(basis.height());
    const float sigma = static_cast<float>(basis.sigma());
    out.write(reinterpret_cast<const char*>(&magic), 4);
    out.write(reinterpret_cast<const char*>(&d), 4);
    out.write(reinterpret_cast<const char*>(&kind), 2);
    out.write(reinterpret_cast<const char*>(&height), 2);
    out.write(reinterpret_cast<const char*>(&sigma), 4);
    write_f64(out, basis.row_factor());
    write_f64(out, basis.col_factor());
    Eigen::MatrixXd rev = basis.row_eigenvalues();
    write_f64(out, rev);
    Eigen::MatrixXd cev = basis.col_eigenvalues();
    write_f64(out, cev);
    if (!out) throw std::runtime_error("basis cache: write failed for " + path);
}

OrthoBasis load_basis_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("basis cache: cannot open " + path);
    uint32_t magic = 0, d = 0;
    uint16_t kind = 0, height = 0;
    float sigma = 0.0f;
    in.read(reinterpret_cast<char*>(&magic), 4);
    in.read(reinterpret_cast<char*>(&d), 4);
    in.read(reinterpret_cast<char*>(&kind), 2);
    in.read(reinterpret_cast<char*>(&height), 2);
    in.read(reinterpret_cast<char*>(&sigma), 4);
    if (!in || magic != kCacheMagic) throw std::runtime_error("basis cache: bad header in " + path);
    if (kind != static_cast<uint16_t>(BasisKind::blur) || height == 0 || d % height != 0)
        throw std::runtime_error("basis cache: unsupported header in " + path);
    OrthoBasis b;
    b.kind_ = BasisKind::blur;
    b.d_ = static_cast<int>(d);
    b.height_ = height;
    b.width_ = static_cast<int>(d / height);
    b.sigma_ = sigma;
    b.row_basis_.resize(b.height_, b.height_);
    b.col_basis_.resize(b.width_, b.width_);
    read_f64(in, b.row_basis_);
    read_f64(in, b.col_basis_);
    Eigen::MatrixXd rev(b.height_, 1), cev(b.width_, 1);
    read_f64(in, rev);
    read_f64(in, cev);
    b.row_eigenvalues_ = rev.col(0);
    b.col_eigenvalues_ = cev.col(0);
    b.build_freq_order_blur();
    return b;
}

}  // namespace gdm
