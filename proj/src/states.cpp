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

#include "credreg/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "credreg/error.hpp"

namespace credreg {

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kTraceTolerance = 1e-12;
constexpr double kEigenTolerance = 1e-10;

double hermitian_defect(const CMatrix &x) { return (x - x.adjoint()).cwiseAbs().maxCoeff(); }

} // namespace

OperatorBasis::OperatorBasis(int dimension) : dim_(dimension) {
    require(dimension >= 2, ErrorCode::invalid_dimension,
            "basis dimension must be at least 2, got " + std::to_string(dimension));
    const int d = dimension * dimension - 1;
    omegas_.reserve(static_cast<std::size_t>(d));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex i_unit(0.0, 1.0);

    for (int j = 0; j < dimension; ++j) {
        for (int k = j + 1; k < dimension; ++k) {
            CMatrix w = CMatrix::Zero(dimension, dimension);
            w(j, k) = inv_sqrt2;
            w(k, j) = inv_sqrt2;
            omegas_.push_back(std::move(w));
        }
    }
    for (int j = 0; j < dimension; ++j) {
        for (int k = j + 1; k < dimension; ++k) {
            CMatrix w = CMatrix::Zero(dimension, dimension);
            w(j, k) = -i_unit * inv_sqrt2;
            w(k, j) = i_unit * inv_sqrt2;
            omegas_.push_back(std::move(w));
        }
    }
    for (int l = 1; l < dimension; ++l) {
        CMatrix w = CMatrix::Zero(dimension, dimension);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int m = 0; m < l; ++m) {
            w(m, m) = norm;
        }
        w(l, l) = -static_cast<double>(l) * norm;
        omegas_.push_back(std::move(w));
    }

    entries_.resize(omegas_.size());
    for (std::size_t n = 0; n < omegas_.size(); ++n) {
        for (int col = 0; col < dimension; ++col) {
            for (int row = 0; row < dimension; ++row) {
                const Complex v = omegas_[n](row, col);
                if (v != Complex(0.0, 0.0)) {
                    entries_[n].push_back({row, col, v});
                }
            }
        }
    }
}

void OperatorBasis::assemble(const BlochVector &r, CMatrix &out) const {
    require(r.size() == size(), ErrorCode::dimension_mismatch,
            "coordinate vector has length " + std::to_string(r.size()) + ", expected " +
                std::to_string(size()));
    out.setZero(dim_, dim_);
    out.diagonal().setConstant(Complex(1.0 / dim_, 0.0));
    for (std::size_t n = 0; n < entries_.size(); ++n) {
        const double rn = r[static_cast<Eigen::Index>(n)];
        for (const Entry &e : entries_[n]) {
            out(e.row, e.col) += rn * e.value;
        }
    }
}

Vector OperatorBasis::coordinates(const CMatrix &x) const {
    require(x.rows() == dim_ && x.cols() == dim_, ErrorCode::dimension_mismatch,
            "matrix size does not match basis dimension " + std::to_string(dim_));
    Vector r(size());
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    for (std::size_t n = 0; n < entries_.size(); ++n) {
        Complex acc(0.0, 0.0);
        for (const Entry &e : entries_[n]) {
            acc += x(e.col, e.row) * e.value;
        }
        require(std::abs(acc.imag()) <= 1e-12 * scale, ErrorCode::contract_violation,
                "trace against basis operator " + std::to_string(n) + " is not real");
        r[static_cast<Eigen::Index>(n)] = acc.real();
    }
    return r;
}

OperatorBasis build_basis(int dimension) { return OperatorBasis(dimension); }

DensityMatrix::DensityMatrix(CMatrix matrix) {
    require(matrix.rows() == matrix.cols() && matrix.rows() >= 1, ErrorCode::dimension_mismatch,
            "density matrix must be square");
    require(matrix.allFinite(), ErrorCode::contract_violation, "density matrix has non-finite entries");
    require(hermitian_defect(matrix) <= kHermitianTolerance, ErrorCode::contract_violation,
            "density matrix is not Hermitian");
    matrix_ = (matrix + matrix.adjoint()) / 2.0;
    const double trace = matrix_.trace().real();
    require(std::abs(trace - 1.0) <= kTraceTolerance, ErrorCode::contract_violation,
            "density matrix trace differs from 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(matrix_, Eigen::EigenvaluesOnly);
    require(eig.eigenvalues().minCoeff() >= -kEigenTolerance, ErrorCode::contract_violation,
            "density matrix has a negative eigenvalue");
}

BlochVector rho_to_r(const CMatrix &rho, const OperatorBasis &basis) { return basis.coordinates(rho); }

BlochVector rho_to_r(const DensityMatrix &rho, const OperatorBasis &basis) {
    return basis.coordinates(rho.matrix());
}

CMatrix r_to_rho(const BlochVector &r, const OperatorBasis &basis) {
    CMatrix out;
    basis.assemble(r, out);
    return out;
}

bool is_positive_state(const CMatrix &candidate) {
    require(candidate.rows() == candidate.cols(), ErrorCode::dimension_mismatch, "candidate must be square");
    require(hermitian_defect(candidate) <= kHermitianTolerance, ErrorCode::contract_violation,
            "positivity test requires a Hermitian candidate");
    PositivityTest test(static_cast<int>(candidate.rows()));
    return test(candidate);
}

PositivityTest::PositivityTest(int dimension) : shifted_(dimension, dimension), llt_(dimension) {}

bool PositivityTest::operator()(const CMatrix &candidate) {
    if (!candidate.allFinite()) {
        return false;
    }
    shifted_ = candidate;
    shifted_.diagonal().array() += kPsdShift;
    llt_.compute(shifted_);
    return llt_.info() == Eigen::Success;
}

DensityMatrix random_density(int dimension, int rank, Rng &rng) {
    require(dimension >= 1, ErrorCode::invalid_dimension, "dimension must be positive");
    require(rank >= 1 && rank <= dimension, ErrorCode::invalid_argument,
            "rank must lie in [1, " + std::to_string(dimension) + "], got " + std::to_string(rank));
    const CMatrix g = complex_gaussian_matrix(rng, dimension, rank);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint()) / 2.0;
    return DensityMatrix(std::move(rho));
}

CMatrix psd_sqrt(const CMatrix &hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian);
    const Vector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

Vector project_onto_simplex(const Vector &values) {
    const Eigen::Index n = values.size();
    std::vector<double> sorted(values.data(), values.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double shift = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cumulative += sorted[static_cast<std::size_t>(k)];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) {
            shift = candidate;
        }
    }
    return (values.array() - shift).cwiseMax(0.0).matrix();
}

CMatrix project_onto_states(const CMatrix &hermitian) {
    const CMatrix h = (hermitian + hermitian.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    const Vector p = project_onto_simplex(eig.eigenvalues());
    CMatrix out = eig.eigenvectors() * p.asDiagonal() * eig.eigenvectors().adjoint();
    return (out + out.adjoint()) / 2.0;
}

} // namespace credreg
