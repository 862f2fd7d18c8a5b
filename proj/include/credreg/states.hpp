// Copyright 2026 The credreg Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

#include <Eigen/Cholesky>

#include "credreg/rng.hpp"
#include "credreg/types.hpp"

namespace credreg {

/**
 * Trace-orthonormal traceless Hermitian basis (generalized Gell-Mann).
 *
 * Ordering: symmetric pairs (j<k), antisymmetric pairs (j<k), diagonal.
 * Every operator has unit Hilbert-Schmidt norm.
 */
class OperatorBasis {
  public:
    explicit OperatorBasis(int dimension);

    [[nodiscard]] int dimension() const noexcept { return dim_; }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(omegas_.size()); }
    [[nodiscard]] const CMatrix &operator[](int j) const { return omegas_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] std::span<const CMatrix> operators() const noexcept { return omegas_; }

    /// Writes 1/D + sum_j r_j Omega_j into `out` without allocating.
    void assemble(const BlochVector &r, CMatrix &out) const;

    /// r_j = Re tr(X Omega_j) for any square matrix X of matching size.
    [[nodiscard]] Vector coordinates(const CMatrix &x) const;

  private:
    struct Entry {
        int row;
        int col;
        Complex value;
    };

    int dim_;
    std::vector<CMatrix> omegas_;
    std::vector<std::vector<Entry>> entries_;
};

OperatorBasis build_basis(int dimension);

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
  public:
    /// Validates and wraps `matrix`; throws contract_violation otherwise.
    explicit DensityMatrix(CMatrix matrix);

    [[nodiscard]] const CMatrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(matrix_.rows()); }

  private:
    CMatrix matrix_;
};

BlochVector rho_to_r(const CMatrix &rho, const OperatorBasis &basis);
BlochVector rho_to_r(const DensityMatrix &rho, const OperatorBasis &basis);

/// 1/D + sum_j r_j Omega_j. Hermitian with unit trace; positivity not implied.
CMatrix r_to_rho(const BlochVector &r, const OperatorBasis &basis);

inline constexpr double kPsdShift = 1e-12;

/// Cholesky test of candidate + kPsdShift. Throws on non-Hermitian input.
bool is_positive_state(const CMatrix &candidate);

/// Reusable Cholesky workspace for hot loops; skips the Hermiticity check.
class PositivityTest {
  public:
    explicit PositivityTest(int dimension);
    bool operator()(const CMatrix &candidate);

  private:
    CMatrix shifted_;
    Eigen::LLT<CMatrix> llt_;
};

/// G G^dagger / tr(G G^dagger) with G a D x rank complex Ginibre matrix.
DensityMatrix random_density(int dimension, int rank, Rng &rng);

/// Hermitian square root with negative eigenvalues clamped to zero.
CMatrix psd_sqrt(const CMatrix &hermitian);

/// Euclidean projection of `values` onto the probability simplex.
Vector project_onto_simplex(const Vector &values);

/// Projection of a Hermitian matrix onto the set of density matrices.
CMatrix project_onto_states(const CMatrix &hermitian);

} // namespace credreg
