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

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "credreg/rng.hpp"
#include "credreg/states.hpp"
#include "credreg/types.hpp"

namespace credreg {

/// Probability-operator measurement with its affine coordinate map p = offset + J r.
class Pom {
  public:
    /// Validates positivity and completeness of `outcomes`.
    Pom(std::vector<CMatrix> outcomes, const OperatorBasis &basis);

    [[nodiscard]] int dimension() const noexcept { return dim_; }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(outcomes_.size()); }
    [[nodiscard]] const std::vector<CMatrix> &outcomes() const noexcept { return outcomes_; }
    /// Row j holds tr(Pi_j Omega_k).
    [[nodiscard]] const Matrix &jacobian() const noexcept { return jacobian_; }
    /// tr(Pi_j) / D.
    [[nodiscard]] const Vector &offset() const noexcept { return offset_; }
    [[nodiscard]] bool informationally_complete() const noexcept { return complete_; }

  private:
    int dim_;
    std::vector<CMatrix> outcomes_;
    Matrix jacobian_;
    Vector offset_;
    bool complete_;
};

/// Random square-root measurement built from M Haar-random pure states.
Pom random_srm_pom(int dimension, int outcomes, const OperatorBasis &basis, Rng &rng);

Vector born_probabilities(const CMatrix &rho, const Pom &pom);
Vector born_probabilities(const DensityMatrix &rho, const Pom &pom);

struct Dataset {
    std::vector<std::int64_t> counts;

    [[nodiscard]] std::int64_t total() const noexcept;
    [[nodiscard]] Vector as_vector() const;
};

Dataset simulate_counts(const Vector &probabilities, std::int64_t copies, Rng &rng);

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// sum_j n_j ln p_j over n_j > 0; kLogZero if some such p_j <= 0.
double log_likelihood(const Vector &counts, const BlochVector &r, const Pom &pom);
double log_likelihood(const Dataset &data, const BlochVector &r, const Pom &pom);

/// Log-likelihood restricted to observed outcomes, allocation-free per call.
class LogLikelihood {
  public:
    LogLikelihood(const Vector &counts, const Pom &pom);

    double operator()(const BlochVector &r) const;
    [[nodiscard]] double copies() const noexcept { return copies_; }

  private:
    Vector counts_;
    Vector offset_;
    Matrix jacobian_;
    double copies_;
};

struct MlConfig {
    int max_iters = 5000;
    double tolerance = 1e-8;
};

struct MlEstimate {
    DensityMatrix rho;
    bool converged;
    int iterations;
    std::vector<double> log_likelihood_trace;
};

/// Accelerated projected-gradient maximum likelihood over density matrices.
MlEstimate ml_estimate(const Vector &counts, const Pom &pom, const OperatorBasis &basis,
                       const MlConfig &config = {});
MlEstimate ml_estimate(const Dataset &data, const Pom &pom, const OperatorBasis &basis,
                       const MlConfig &config = {});

enum class CaseLabel { A, B };

/**
 * Local likelihood geometry at the ML estimator.
 *
 * In Case A the stored score is the raw numerical gradient; r_c, the score
 * quadratic and log L'_max use g = 0.
 */
struct MlSummary {
    int dimension = 0;
    BlochVector r_ml;
    CMatrix rho_ml;
    double log_l_max = 0.0;
    Matrix fisher;
    Matrix fisher_inverse;
    Vector score;
    /// g . F^-1 . g
    double score_quadratic = 0.0;
    double log_l_prime_max = 0.0;
    int rank = 0;
    CaseLabel case_label = CaseLabel::A;
    BlochVector r_c;
    CMatrix support_projector;
    Vector eigenvalues;
    CMatrix eigenvectors;
    double copies = 0.0;
    bool regularized = false;
    bool score_consistent = true;
};

inline constexpr double kRankTolerance = 1e-6;

MlSummary likelihood_summary(const Vector &counts, const Pom &pom, const OperatorBasis &basis,
                             const CMatrix &rho_ml);
MlSummary likelihood_summary(const Dataset &data, const Pom &pom, const OperatorBasis &basis,
                             const DensityMatrix &rho_ml);

struct RegionSpec {
    double lambda = 1.0;
    double lambda_prime = 1.0;
    /// ln lambda', kept separately so that tiny lambda' does not underflow.
    double log_lambda_prime = 0.0;
    /// Shape matrix F / (-2 ln lambda').
    Matrix shape;
    BlochVector center;
    double cap_l = 0.0;
    /// Unit vector along g (Case B); empty in Case A.
    Vector normal;
    CaseLabel case_label = CaseLabel::A;
    /// Set when lambda = 1: the region is the single point r_ml. `shape` is empty when lambda' = 1.
    bool degenerate = false;

    /// (x - center) . shape . (x - center)
    [[nodiscard]] double ellipsoid_value(const BlochVector &x) const;
};

RegionSpec region_spec(const MlSummary &summary, double lambda);

} // namespace credreg
