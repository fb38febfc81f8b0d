#include "memdiff/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "memdiff/errors.hpp"

namespace memdiff {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double BoxDomain::volume() const {
    double v = 1.0;
    for (int d = 0; d < dims; ++d) v *= lengths[static_cast<std::size_t>(d)];
    return v;
}

BoxDomain make_box(int dims, const std::vector<double>& lengths) {
    if (dims < 1 || dims > 3) throw InvalidSpecError("domain: dims must be 1, 2 or 3");
    if (lengths.size() != static_cast<std::size_t>(dims))
        throw InvalidSpecError("domain: lengths must list one extent per dimension");
    BoxDomain box;
    box.dims = dims;
    for (int d = 0; d < dims; ++d) {
        if (!(lengths[static_cast<std::size_t>(d)] > 0.0))
            throw InvalidSpecError("domain: lengths must be strictly positive");
        box.lengths[static_cast<std::size_t>(d)] = lengths[static_cast<std::size_t>(d)];
    }
    return box;
}

ModeBasis make_basis(const BoxDomain& domain, const std::vector<int>& modes_per_dim,
                     const std::vector<int>& collocation_per_dim) {
    if (modes_per_dim.size() != static_cast<std::size_t>(domain.dims))
        throw InvalidSpecError("basis: modes must list one count per dimension");
    ModeBasis basis;
    basis.domain = domain;
    std::size_t total = 1;
    for (int d = 0; d < domain.dims; ++d) {
        const int m = modes_per_dim[static_cast<std::size_t>(d)];
        if (m < 1) throw InvalidSpecError("basis: modes per dimension must be >= 1");
        basis.modes_per_dim[static_cast<std::size_t>(d)] = m;
        total *= static_cast<std::size_t>(m);
    }
    for (int d = 0; d < domain.dims; ++d) {
        const int m = basis.modes_per_dim[static_cast<std::size_t>(d)];
        int n = 2 * m + 1;
        if (!collocation_per_dim.empty()) {
            if (collocation_per_dim.size() != static_cast<std::size_t>(domain.dims))
                throw InvalidSpecError("basis: collocation must list one count per dimension");
            n = collocation_per_dim[static_cast<std::size_t>(d)];
            if (n < 2 * m) throw InvalidSpecError("basis: collocation must be >= 2x modes");
        }
        basis.collocation_per_dim[static_cast<std::size_t>(d)] = n;
    }

    // Enumerate the tensor modes, then sort by (eigenvalue, lex index).
    basis.modes.resize(total);
    basis.eigenvalues.resize(total);
    std::vector<std::size_t> order(total);
    std::vector<double> raw_lambda(total);
    std::vector<ModeIndex> raw_modes(total);
    const auto& m = basis.modes_per_dim;
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        ModeIndex idx;
        for (int d = domain.dims - 1; d >= 0; --d) {
            const std::size_t md = static_cast<std::size_t>(m[static_cast<std::size_t>(d)]);
            idx.k[static_cast<std::size_t>(d)] = static_cast<int>(rem % md) + 1;
            rem /= md;
        }
        double lambda = 0.0;
        for (int d = 0; d < domain.dims; ++d) {
            const double w = idx.k[static_cast<std::size_t>(d)] * kPi /
                             domain.lengths[static_cast<std::size_t>(d)];
            lambda += w * w;
        }
        raw_modes[flat] = idx;
        raw_lambda[flat] = lambda;
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (raw_lambda[a] != raw_lambda[b]) return raw_lambda[a] < raw_lambda[b];
        return raw_modes[a].k < raw_modes[b].k;
    });
    basis.tensor_offset.resize(total);
    for (std::size_t r = 0; r < total; ++r) {
        basis.modes[r] = raw_modes[order[r]];
        basis.eigenvalues[r] = raw_lambda[order[r]];
        basis.tensor_offset[r] = order[r];
    }
    basis.lambda1 = basis.eigenvalues.front();
    return basis;
}

double eigenvalue(const ModeBasis& basis, const ModeIndex& k) {
    double lambda = 0.0;
    for (int d = 0; d < basis.domain.dims; ++d) {
        const int kd = k.k[static_cast<std::size_t>(d)];
        if (kd < 1 || kd > basis.modes_per_dim[static_cast<std::size_t>(d)])
            throw IndexError("eigenvalue: mode index out of range in dimension " + std::to_string(d));
        const double w = kd * kPi / basis.domain.lengths[static_cast<std::size_t>(d)];
        lambda += w * w;
    }
    return lambda;
}

double eigenvalue_after_cutoff(const ModeBasis& basis, std::size_t rank) {
    if (rank >= basis.size())
        throw IndexError("eigenvalue_after_cutoff: cutoff rank exceeds basis size");
    return basis.eigenvalues[rank];
}

TransformPlan::TransformPlan(const ModeBasis& basis, const std::array<int, 3>& points_per_dim)
    : basis_(&basis), dims_(basis.domain.dims) {
    grid_size_ = 1;
    cell_volume_ = 1.0;
    for (int d = 0; d < dims_; ++d) {
        const std::size_t sd = static_cast<std::size_t>(d);
        const int m = basis.modes_per_dim[sd];
        const int n = points_per_dim[sd];
        if (n < m) throw InvalidSpecError("transform: collocation smaller than mode count");
        n_[sd] = n;
        grid_size_ *= static_cast<std::size_t>(n);
        const double L = basis.domain.lengths[sd];
        cell_volume_ *= L / (n + 1);
        fwd_[sd].resize(static_cast<std::size_t>(m) * n);
        inv_[sd].resize(static_cast<std::size_t>(n) * m);
        const double fscale = std::sqrt(2.0 * L) / (n + 1);
        const double iscale = std::sqrt(2.0 / L);
        for (int k = 1; k <= m; ++k)
            for (int i = 1; i <= n; ++i) {
                const double s = std::sin(kPi * k * i / (n + 1));
                fwd_[sd][static_cast<std::size_t>(k - 1) * n + (i - 1)] = fscale * s;
                inv_[sd][static_cast<std::size_t>(i - 1) * m + (k - 1)] = iscale * s;
            }
    }
}

namespace {

// y(a, r, b) = sum_c M[r*cols + c] x(a, c, b) for x viewed as (A, cols, B).
std::vector<double> contract_axis(const std::vector<double>& x, std::size_t A, std::size_t cols,
                                  std::size_t B, const std::vector<double>& M, std::size_t rows) {
    std::vector<double> y(A * rows * B, 0.0);
    for (std::size_t a = 0; a < A; ++a) {
        const double* xa = x.data() + a * cols * B;
        double* ya = y.data() + a * rows * B;
        for (std::size_t r = 0; r < rows; ++r) {
            const double* Mr = M.data() + r * cols;
            double* yr = ya + r * B;
            for (std::size_t c = 0; c < cols; ++c) {
                const double mv = Mr[c];
                if (mv == 0.0) continue;
                const double* xc = xa + c * B;
                for (std::size_t b = 0; b < B; ++b) yr[b] += mv * xc[b];
            }
        }
    }
    return y;
}

}  // namespace

std::vector<double> TransformPlan::to_modes(const std::vector<double>& grid) const {
    if (grid.size() != grid_size_) throw ShapeError("to_modes: grid size mismatch");
    std::vector<double> work = grid;
    std::array<std::size_t, 3> shape{1, 1, 1};
    for (int d = 0; d < dims_; ++d) shape[static_cast<std::size_t>(d)] = static_cast<std::size_t>(n_[static_cast<std::size_t>(d)]);
    for (int d = 0; d < dims_; ++d) {
        const std::size_t sd = static_cast<std::size_t>(d);
        std::size_t A = 1, B = 1;
        for (int e = 0; e < d; ++e) A *= shape[static_cast<std::size_t>(e)];
        for (int e = d + 1; e < dims_; ++e) B *= shape[static_cast<std::size_t>(e)];
        const std::size_t mrows = static_cast<std::size_t>(basis_->modes_per_dim[sd]);
        work = contract_axis(work, A, shape[sd], B, fwd_[sd], mrows);
        shape[sd] = mrows;
    }
    // Gather tensor coefficients into the sorted enumeration.
    std::vector<double> coeffs(basis_->size());
    for (std::size_t r = 0; r < coeffs.size(); ++r) coeffs[r] = work[basis_->tensor_offset[r]];
    return coeffs;
}

std::vector<double> TransformPlan::to_grid(const std::vector<double>& coeffs) const {
    if (coeffs.size() != basis_->size()) throw ShapeError("to_grid: coefficient size mismatch");
    std::vector<double> work(basis_->size(), 0.0);
    for (std::size_t r = 0; r < coeffs.size(); ++r) work[basis_->tensor_offset[r]] = coeffs[r];
    std::array<std::size_t, 3> shape{1, 1, 1};
    for (int d = 0; d < dims_; ++d)
        shape[static_cast<std::size_t>(d)] =
            static_cast<std::size_t>(basis_->modes_per_dim[static_cast<std::size_t>(d)]);
    for (int d = 0; d < dims_; ++d) {
        const std::size_t sd = static_cast<std::size_t>(d);
        std::size_t A = 1, B = 1;
        for (int e = 0; e < d; ++e) A *= shape[static_cast<std::size_t>(e)];
        for (int e = d + 1; e < dims_; ++e) B *= shape[static_cast<std::size_t>(e)];
        const std::size_t nrows = static_cast<std::size_t>(n_[sd]);
        work = contract_axis(work, A, shape[sd], B, inv_[sd], nrows);
        shape[sd] = nrows;
    }
    return work;
}

TransformPlan default_plan(const ModeBasis& basis) {
    return TransformPlan(basis, basis.collocation_per_dim);
}

double sobolev_norm(const ModeBasis& basis, const std::vector<double>& coeffs, int alpha) {
    if (alpha < 0 || alpha > 2) throw DomainArgError("sobolev_norm: alpha must be 0, 1 or 2");
    if (coeffs.empty()) return 0.0;
    if (coeffs.size() != basis.size()) throw ShapeError("sobolev_norm: coefficient size mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        double w = 1.0;
        if (alpha == 1) w = basis.eigenvalues[k];
        else if (alpha == 2) w = basis.eigenvalues[k] * basis.eigenvalues[k];
        acc += w * coeffs[k] * coeffs[k];
    }
    return std::sqrt(acc);
}

SpectralSplit project_split(const ModeBasis& basis, const std::vector<double>& coeffs,
                            std::size_t cutoff_rank) {
    if (coeffs.size() != basis.size()) throw ShapeError("project_split: coefficient size mismatch");
    if (cutoff_rank > basis.size())
        throw IndexError("project_split: cutoff rank exceeds basis size");
    SpectralSplit split;
    split.low.assign(coeffs.size(), 0.0);
    split.high.assign(coeffs.size(), 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        (k < cutoff_rank ? split.low[k] : split.high[k]) = coeffs[k];
    return split;
}

}  // namespace memdiff
