#pragma once

#include "nozzleflow/solver.hpp"

namespace nozzleflow {

// Primitive variables on the flow field's grid, reconstructed from psi and
// the closure tables. B and S are the transported values at the local
// stream value (definitional, hence exact).
struct PrimitiveField {
    Grid grid;
    Eigen::MatrixXd rho, u1, u2, p, q, theta, mach, omega, B, S;
    // interior nodes outside the discontinuity band with rho*u1 <= 0
    std::vector<std::pair<int, int>> degenerate_nodes;
};

PrimitiveField reconstruct(const FlowField& field);

// 0/1 node mask of the discontinuity band: nodes of cells whose psi-range
// straddles the jump stream value, dilated by one cell. All zero for smooth
// runs.
Eigen::MatrixXi gamma_band_mask(const FlowField& field);

// Max over interior nodes at least `margin` cells away from the boundary
// and outside the mask (mask may be empty).
double masked_max(const Eigen::MatrixXd& a, const Eigen::MatrixXi& mask,
                  int margin);

// Largest wall inclination angle max(|atan w1'|, |atan w2'|) over the
// truncated span.
double wall_inclination(const Geometry& geom, double L);

struct MaxPrincipleReport {
    double p_min = 0.0, p_max = 0.0;
    double theta_min = 0.0, theta_max = 0.0;
    // extrema attained within one cell of the boundary
    bool p_on_boundary = false, theta_on_boundary = false;
    double theta_abs_max = 0.0;
    double theta_bound = 0.0;  // wall inclination bound
    bool theta_within_bound = false;
    bool pass = false;
};

MaxPrincipleReport max_principle_report(const FlowField& field,
                                        const PrimitiveField& prim);

// Nodal residuals of the two first-order balance equations coupling the
// flow angle and the pressure (streamline curvature and normal momentum);
// both vanish on exact smooth solutions and decay at second order.
struct BalanceResidual {
    Eigen::MatrixXd r1, r2;
    double max1 = 0.0, max2 = 0.0;  // masked interior max norms
};

BalanceResidual residual_balance(const FlowField& field,
                                 const PrimitiveField& prim);

// Nodal residual of the discrete mass divergence div(rho u).
Eigen::MatrixXd divergence_residual(const FlowField& field,
                                    const PrimitiveField& prim);

// Discrete curl of the velocity (d(u2)/dx1 - d(u1)/dx2).
Eigen::MatrixXd discrete_curl(const FlowField& field,
                              const PrimitiveField& prim);

// Mass flux through vertical station i by high-order column quadrature.
double station_flux(const FlowField& field, int i);
Eigen::VectorXd station_flux_all(const FlowField& field);

// Stream-label coordinates: z1 = x1, z2 = psi. phi(i, k) is the physical
// height x2 of stream value z2(k) at station z1(i); Q is the momentum
// modulus from the Lagrangian gradient.
struct LagrangianField {
    Eigen::VectorXd z1, z2;
    Eigen::MatrixXd phi, Q, p, rho;
    double m = 0.0;
    double m_d = -1.0;  // jump stream value; negative when smooth
};

// Column-wise monotone inversion of psi onto a uniform z2 grid (same node
// count as the vertical grid). Throws transform_error naming the first
// non-monotone column.
LagrangianField to_lagrangian(const FlowField& field);

// Max over mid-cell samples of |x2 - phi(z1, psi(x2))|.
double lagrangian_roundtrip(const FlowField& field,
                            const LagrangianField& lag);

// Nodal residual of the Lagrangian momentum equation
//   d/dz1 [ (d(phi)/dz1) / (rho d(phi)/dz2) ] + d(p)/dz2 = 0.
Eigen::MatrixXd lagrangian_residual(const LagrangianField& lag);

}  // namespace nozzleflow
