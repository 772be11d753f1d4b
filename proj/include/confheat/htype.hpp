#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace confheat {

/// A Heisenberg-type group in logarithmic coordinates: horizontal dimension m (even),
/// vertical dimension k, and the k skew-symmetric J-matrices of the Kaplan map.
struct HTypeStructure {
    int m = 0;
    int k = 0;
    std::vector<Eigen::MatrixXd> J;

    int homogeneous_dimension() const { return m + 2 * k; }
};

/// Group element (z, sigma) in R^m x R^k.
struct GroupPoint {
    Eigen::VectorXd z;
    Eigen::VectorXd sigma;
};

enum class StandardFamily { heisenberg, quaternionic };

/// H^n (m = 2n, k = 1) or quaternionic Heisenberg group (m = 4n, k = 3).
HTypeStructure build_standard(StandardFamily family, int n);

struct ValidationIssue {
    std::string condition; ///< "skew-symmetry", "anticommutation", or "m-parity"
    int l = -1, j = -1;    ///< offending J-matrix indices (1-based), -1 when not applicable
    double residual = 0.0;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;
    std::string summary() const;
};

/// Checks skew-symmetry of each J, the anticommutation relations
/// J_l J_j + J_j J_l = -2 delta_{lj} I (entrywise tolerance 1e-12), and evenness of m.
ValidationReport validate_structure(const HTypeStructure& s, double tol = 1e-12);

/// The Kaplan map J(sigma) z = sum_l sigma_l J_l z.
Eigen::VectorXd jmap(const HTypeStructure& s, const Eigen::VectorXd& sigma,
                     const Eigen::VectorXd& z);

GroupPoint group_identity(const HTypeStructure& s);

/// (z,sigma) o (zeta,tau) = (z + zeta, sigma + tau + 1/2 (<J_l z, zeta>)_l).
GroupPoint group_mul(const HTypeStructure& s, const GroupPoint& a, const GroupPoint& b);

/// (z,sigma)^{-1} = (-z,-sigma).
GroupPoint group_inv(const GroupPoint& g);

int homogeneous_dimension(const HTypeStructure& s);

} // namespace confheat
