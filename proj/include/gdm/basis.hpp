#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gdm {

enum class BasisKind { identity, dct2, blur };

std::string basis_kind_name(BasisKind kind);
BasisKind basis_kind_from_name(const std::string& name);

// Orthogonal change of coordinates for 2D (or flat) data, stored separably:
// the full transform is the tensor product of one orthonormal basis per
// axis. freq_order permutes raw coefficient indices (u*width + v) into a
// canonical low-to-high frequency order; spectrum holds the ordering keys
// along that order (eigenvalues for blur, frequency radii for dct2).
class OrthoBasis {
public:
    static OrthoBasis identity(int d);
    static OrthoBasis dct2(int height, int width);
    static OrthoBasis blur(int height, int width, double sigma);

    int d() const { return d_; }
    int height() const { return height_; }
    int width() const { return width_; }
    BasisKind kind() const { return kind_; }
    double sigma() const { return sigma_; }

    // Coefficients of x in the basis, in raw (u, v) index order.
    Eigen::VectorXd forward_apply(const Eigen::VectorXd& x) const;
    // Reassembles x from raw-order coefficients.
    Eigen::VectorXd inverse_apply(const Eigen::VectorXd& y) const;

    // Coefficients permuted so index 0 is the lowest frequency.
    Eigen::VectorXd to_freq(const Eigen::VectorXd& x) const;
    Eigen::VectorXd from_freq(const Eigen::VectorXd& y) const;

    bool is_identity() const { return kind_ == BasisKind::identity; }

    const std::vector<int>& freq_order() const { return freq_order_; }
    const Eigen::VectorXd& spectrum() const { return spectrum_; }

    // Column `index` of the full basis matrix, raw ordering.
    Eigen::VectorXd basis_vector(int index) const;

    // Dense basis matrix; intended for verification at small d.
    Eigen::MatrixXd dense_matrix() const;

    // Per-axis factors (empty for the identity basis).
    const Eigen::MatrixXd& row_factor() const { return row_basis_; }
    const Eigen::MatrixXd& col_factor() const { return col_basis_; }
    const Eigen::VectorXd& row_eigenvalues() const { return row_eigenvalues_; }
    const Eigen::VectorXd& col_eigenvalues() const { return col_eigenvalues_; }

private:
    OrthoBasis() = default;
    void build_freq_order_dct();
    void build_freq_order_blur();

    BasisKind kind_ = BasisKind::identity;
    int d_ = 0;
    int height_ = 1;
    int width_ = 0;
    double sigma_ = 0.0;
    Eigen::MatrixXd row_basis_;  // columns are 1D basis vectors (height x height)
    Eigen::MatrixXd col_basis_;  // (width x width)
    Eigen::VectorXd row_eigenvalues_;
    Eigen::VectorXd col_eigenvalues_;
    std::vector<int> freq_order_;
    std::vector<int> freq_rank_;  // inverse permutation of freq_order_
    Eigen::VectorXd spectrum_;

    friend OrthoBasis load_basis_cache(const std::string& path);
    friend void save_basis_cache(const std::string& path, const OrthoBasis& basis);
};

// Symmetric 1D Gaussian blur operator with reflective boundary handling,
// symmetrized before use so its eigenbasis is real and orthogonal.
Eigen::MatrixXd gaussian_blur_matrix_1d(int n, double sigma);

// Binary cache for eigenbases: 16-byte header {magic, d, kind, height,
// sigma(f32)} followed by the per-axis factors and eigenvalues as
// little-endian float64.
void save_basis_cache(const std::string& path, const OrthoBasis& basis);
OrthoBasis load_basis_cache(const std::string& path);

}  // namespace gdm
