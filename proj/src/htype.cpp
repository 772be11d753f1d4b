#include "confheat/htype.hpp"

#include <sstream>
#include <stdexcept>

namespace confheat {

namespace {

void require_conforming(const HTypeStructure& s, const GroupPoint& g, const char* who) {
    if (g.z.size() != s.m || g.sigma.size() != s.k)
        throw std::invalid_argument(std::string(who) + ": point dimensions do not match the structure");
}

} // namespace

HTypeStructure build_standard(StandardFamily family, int n) {
    if (n < 1)
        throw std::invalid_argument("build_standard: n must be >= 1");

    HTypeStructure s;
    if (family == StandardFamily::heisenberg) {
        s.m = 2 * n;
        s.k = 1;
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(s.m, s.m);
        // per 2-block: J (z1, z2) = (z2, -z1)
        for (int b = 0; b < n; ++b) {
            J(2 * b, 2 * b + 1) = 1.0;
            J(2 * b + 1, 2 * b) = -1.0;
        }
        s.J.push_back(std::move(J));
    } else {
        s.m = 4 * n;
        s.k = 3;
        // left multiplication by the quaternion units i, j, k on each H-block (a,b,c,d)
        Eigen::Matrix4d Li, Lj, Lk;
        Li << 0, -1, 0, 0,
              1,  0, 0, 0,
              0,  0, 0, -1,
              0,  0, 1, 0;
        Lj << 0, 0, -1, 0,
              0, 0,  0, 1,
              1, 0,  0, 0,
              0, -1, 0, 0;
        Lk << 0, 0, 0, -1,
              0, 0, -1, 0,
              0, 1,  0, 0,
              1, 0,  0, 0;
        for (const auto& L : {Li, Lj, Lk}) {
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(s.m, s.m);
            for (int b = 0; b < n; ++b)
                J.block<4, 4>(4 * b, 4 * b) = L;
            s.J.push_back(std::move(J));
        }
    }
    return s;
}

std::string ValidationReport::summary() const {
    if (ok) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        const auto& is = issues[i];
        if (i) os << "; ";
        os << is.condition;
        if (is.l >= 0) {
            os << " (l=" << is.l;
            if (is.j >= 0) os << ", j=" << is.j;
            os << ", residual=" << is.residual << ")";
        }
    }
    return os.str();
}

ValidationReport validate_structure(const HTypeStructure& s, double tol) {
    if (s.m < 1 || s.k < 1)
        throw std::invalid_argument("validate_structure: m and k must be positive");
    if (static_cast<int>(s.J.size()) != s.k)
        throw std::invalid_argument("validate_structure: expected k J-matrices");
    for (const auto& J : s.J)
        if (J.rows() != s.m || J.cols() != s.m)
            throw std::invalid_argument("validate_structure: J-matrices must be m x m");

    ValidationReport rep;
    if (s.m % 2 != 0) {
        rep.ok = false;
        rep.issues.push_back({"m-parity", -1, -1, static_cast<double>(s.m)});
    }
    for (int l = 0; l < s.k; ++l) {
        const double skew = (s.J[l].transpose() + s.J[l]).cwiseAbs().maxCoeff();
        if (skew > tol) {
            rep.ok = false;
            rep.issues.push_back({"skew-symmetry", l + 1, -1, skew});
        }
    }
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(s.m, s.m);
    for (int l = 0; l < s.k; ++l) {
        for (int j = l; j < s.k; ++j) {
            const double delta = (l == j) ? 2.0 : 0.0;
            const double res = (s.J[l] * s.J[j] + s.J[j] * s.J[l] + delta * I).cwiseAbs().maxCoeff();
            if (res > tol) {
                rep.ok = false;
                rep.issues.push_back({"anticommutation", l + 1, j + 1, res});
            }
        }
    }
    return rep;
}

Eigen::VectorXd jmap(const HTypeStructure& s, const Eigen::VectorXd& sigma,
                     const Eigen::VectorXd& z) {
    if (sigma.size() != s.k || z.size() != s.m)
        throw std::invalid_argument("jmap: vector lengths do not match the structure");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(s.m);
    for (int l = 0; l < s.k; ++l)
        out.noalias() += sigma[l] * (s.J[l] * z);
    return out;
}

GroupPoint group_identity(const HTypeStructure& s) {
    return GroupPoint{Eigen::VectorXd::Zero(s.m), Eigen::VectorXd::Zero(s.k)};
}

GroupPoint group_mul(const HTypeStructure& s, const GroupPoint& a, const GroupPoint& b) {
    require_conforming(s, a, "group_mul");
    require_conforming(s, b, "group_mul");
    GroupPoint out;
    out.z = a.z + b.z;
    out.sigma = a.sigma + b.sigma;
    for (int l = 0; l < s.k; ++l)
        out.sigma[l] += 0.5 * (s.J[l] * a.z).dot(b.z);
    return out;
}

GroupPoint group_inv(const GroupPoint& g) {
    return GroupPoint{-g.z, -g.sigma};
}

int homogeneous_dimension(const HTypeStructure& s) {
    return s.m + 2 * s.k;
}

} // namespace confheat
