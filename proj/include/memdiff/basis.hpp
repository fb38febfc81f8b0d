#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace memdiff {

// Box (0,L_1) x ... x (0,L_d) with homogeneous Dirichlet conditions.
struct BoxDomain {
    int dims = 1;
    std::array<double, 3> lengths{0.0, 0.0, 0.0};
    double volume() const;
};

BoxDomain make_box(int dims, const std::vector<double>& lengths);

// 1-based per-dimension wavenumbers of one eigenfunction.
struct ModeIndex {
    std::array<int, 3> k{1, 1, 1};
};

/// Orthonormal sine eigenbasis of A = -Laplace on a box. Modes are enumerated
/// in increasing-eigenvalue order with lexicographic tie-breaking, so a
/// rank-m projection cutoff is unambiguous in 2D/3D where eigenvalues repeat.
/// Coefficients use the Parseval convention: |u|_2^2 = sum_k u_k^2.
struct ModeBasis {
    BoxDomain domain;
    std::array<int, 3> modes_per_dim{1, 1, 1};
    std::array<int, 3> collocation_per_dim{3, 3, 3};
    std::vector<ModeIndex> modes;       // sorted enumeration
    std::vector<double> eigenvalues;    // lambda_k aligned with `modes`
    std::vector<std::size_t> tensor_offset;  // sorted index -> row-major tensor slot
    double lambda1 = 0.0;

    std::size_t size() const { return modes.size(); }
};

ModeBasis make_basis(const BoxDomain& domain, const std::vector<int>& modes_per_dim,
                     const std::vector<int>& collocation_per_dim = {});

/// lambda_k for a multi-index; throws IndexError outside [1, m_i].
double eigenvalue(const ModeBasis& basis, const ModeIndex& k);

/// Eigenvalue of the (rank+1)-th mode in sorted order, i.e. lambda_{m+1} when
/// rank = m. Throws IndexError for rank >= size.
double eigenvalue_after_cutoff(const ModeBasis& basis, std::size_t rank);

/// Discrete sine transform pair between collocation-grid values and
/// orthonormal mode coefficients, exact on the retained band.
class TransformPlan {
  public:
    TransformPlan(const ModeBasis& basis, const std::array<int, 3>& points_per_dim);

    // grid values (row-major over points_per_dim) -> sorted coefficients
    std::vector<double> to_modes(const std::vector<double>& grid) const;
    // sorted coefficients -> grid values
    std::vector<double> to_grid(const std::vector<double>& coeffs) const;

    std::size_t grid_size() const { return grid_size_; }
    // Quadrature cell volume; interior-point sums approximate integrals over
    // the box and are exact for band-limited trigonometric integrands.
    double cell_volume() const { return cell_volume_; }

  private:
    const ModeBasis* basis_;
    int dims_;
    std::array<int, 3> n_{1, 1, 1};
    std::array<std::vector<double>, 3> fwd_;  // [k*n + i], includes quadrature scale
    std::array<std::vector<double>, 3> inv_;  // [i*m + k]
    std::size_t grid_size_ = 0;
    double cell_volume_ = 0.0;
};

TransformPlan default_plan(const ModeBasis& basis);

/// ||u||_alpha = (sum lambda_k^alpha u_k^2)^{1/2}, alpha in {0,1,2}.
double sobolev_norm(const ModeBasis& basis, const std::vector<double>& coeffs, int alpha);

/// Rank-m spectral split u = P_m u + (I - P_m) u; both parts are full-length
/// coefficient vectors, low + high = u exactly.
struct SpectralSplit {
    std::vector<double> low;
    std::vector<double> high;
};
SpectralSplit project_split(const ModeBasis& basis, const std::vector<double>& coeffs,
                            std::size_t cutoff_rank);

}  // namespace memdiff
