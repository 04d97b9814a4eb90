#ifndef HERZLAB_INTERPOLATION_HPP
#define HERZLAB_INTERPOLATION_HPP

#include "herzlab/norms.hpp"
#include "herzlab/operators.hpp"

namespace herz {

// Endpoint data of an interpolation segment. Functions are measured in the
// psi-side spaces; families live in the dual of the family-side spaces.
struct InterpPath {
    HerzParams psi_side0, psi_side1;        // norm spaces for step functions
    HerzParams family_side0, family_side1;  // spaces whose duals norm the families
    double theta = 0.5;

    int dim() const { return psi_side0.dim(); }
    void validate() const;

    HerzParams psi_at_theta() const;
    HerzParams family_at_theta() const;
    HerzParams family_dual_at_theta() const;
};

// All complex-affine exponent functions at a point z, plus the normalized
// (tilde) variants used by the auxiliary families.
struct PathCoefficients {
    std::vector<Complex> alpha_z, beta_z;              // weights (family side, psi side)
    std::vector<Complex> xi_z, eta_z;                  // reciprocal exponents, family side
    std::vector<Complex> lambda_z, mu_z;               // reciprocal exponents, psi side
    std::vector<Complex> mu_tilde, lambda_tilde;       // psi-side normalized
    std::vector<Complex> eta_tilde, xi_tilde;          // family-side normalized
    std::vector<double> alpha_theta, beta_theta;
    std::vector<double> xi_theta, eta_theta, lambda_theta, mu_theta;
};

PathCoefficients path_exponents(const InterpPath& path, Complex z);

// The analytic family through psi: equals psi at z = theta, and its boundary
// norms reproduce powers of ||psi||.
StepFunction build_F(const StepFunction& psi, const InterpPath& path, Complex z);

// The dual-side analytic family through phi.
SequenceField build_G(const SequenceField& phi, const InterpPath& path, Complex z);

// Phi(z) = integral sum_j T[F_z(psi)](j,y) G_z(phi)(j,y) dy, exact.
Complex phi_pairing(const LinearOperatorSpec& T, const StepFunction& psi,
                    const SequenceField& phi, const InterpPath& path, Complex z);

struct BoundaryReport {
    // ||F_{ih}||, ||F_{1+ih}|| against the predicted powers of ||psi||
    double f_line0_lhs = 0, f_line0_rhs = 0;
    double f_line1_lhs = 0, f_line1_rhs = 0;
    // family l^1 dual norms of G on both lines against powers of ||phi||
    double g_line0_lhs = 0, g_line0_rhs = 0;
    double g_line1_lhs = 0, g_line1_rhs = 0;
    double max_rel_error() const;
};

BoundaryReport boundary_identities(const StepFunction& psi, const SequenceField& phi,
                                   const InterpPath& path, double h);

struct ThreeLinesReport {
    double m0 = 0, m1 = 0;
    std::vector<double> phi_abs;    // |Phi(theta)| per corpus pair (normalized inputs)
    std::vector<double> ratios;     // |Phi(theta)| / (m0^(1-theta) m1^theta)
    double max_ratio = 0;
};

// Checks |Phi(theta)| <= M0^(1-theta) M1^theta over normalized corpus pairs.
ThreeLinesReport three_lines_verify(const LinearOperatorSpec& T, const InterpPath& path,
                                    double M0, double M1,
                                    const std::vector<std::pair<StepFunction, SequenceField>>& corpus);

// Rigorous boundary bounds for T on the endpoint pairs: the modulus of F_z
// depends only on Re z, and |T F| <= T_abs |F| cellwise, so the boundary-line
// suprema are bounded by one computable norm per line.
std::pair<double, double> certified_line_bounds(
    const LinearOperatorSpec& T, const InterpPath& path,
    const std::vector<std::pair<StepFunction, SequenceField>>& corpus);

}  // namespace herz

#endif
