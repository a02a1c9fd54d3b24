#include "nozzleflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nozzleflow {

namespace {

// Fourth-order first derivative of a uniformly sampled column.
Eigen::VectorXd deriv4(const Eigen::VectorXd& f, double h) {
    const int n = static_cast<int>(f.size());
    ensure_param(n >= 5, "deriv4: need at least five samples");
    Eigen::VectorXd d(n);
    d(0) = (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) -
            3.0 * f(4)) /
           (12.0 * h);
    d(1) = (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) /
           (12.0 * h);
    for (int j = 2; j + 2 < n; ++j) {
        d(j) = (f(j - 2) - 8.0 * f(j - 1) + 8.0 * f(j + 1) - f(j + 2)) /
               (12.0 * h);
    }
    d(n - 2) = (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) +
                6.0 * f(n - 4) - f(n - 5)) /
               (12.0 * h);
    d(n - 1) = (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) -
                16.0 * f(n - 4) + 3.0 * f(n - 5)) /
               (12.0 * h);
    return d;
}

// Composite Simpson over uniform samples; a 3/8 panel absorbs an even
// sample count.
double simpson(const Eigen::VectorXd& f, double h) {
    const int n = static_cast<int>(f.size());
    ensure_param(n >= 4, "simpson: need at least four samples");
    double total = 0.0;
    int start = 0;
    if (n % 2 == 0) {
        total += 3.0 * h / 8.0 * (f(0) + 3.0 * f(1) + 3.0 * f(2) + f(3));
        start = 3;
    }
    double acc = f(start) + f(n - 1);
    for (int j = start + 1; j + 1 < n; ++j) {
        acc += ((j - start) % 2 == 1 ? 4.0 : 2.0) * f(j);
    }
    total += h / 3.0 * acc;
    return total;
}

// Physical-coordinate first derivatives of a nodal field through the
// flattening chain rule; central in the interior, one-sided at edges.
void physical_derivatives(const FlowField& field, const Eigen::MatrixXd& F,
                          Eigen::MatrixXd& Fx1, Eigen::MatrixXd& Fx2) {
    const Grid& g = field.grid;
    Fx1.resize(g.n1, g.n2);
    Fx2.resize(g.n1, g.n2);
    auto dy1 = [&](int i, int j) {
        if (i == 0)
            return (-3.0 * F(0, j) + 4.0 * F(1, j) - F(2, j)) / (2.0 * g.h1);
        if (i == g.n1 - 1)
            return (3.0 * F(i, j) - 4.0 * F(i - 1, j) + F(i - 2, j)) /
                   (2.0 * g.h1);
        return (F(i + 1, j) - F(i - 1, j)) / (2.0 * g.h1);
    };
    auto dy2 = [&](int i, int j) {
        if (j == 0)
            return (-3.0 * F(i, 0) + 4.0 * F(i, 1) - F(i, 2)) / (2.0 * g.h2);
        if (j == g.n2 - 1)
            return (3.0 * F(i, j) - 4.0 * F(i, j - 1) + F(i, j - 2)) /
                   (2.0 * g.h2);
        return (F(i, j + 1) - F(i, j - 1)) / (2.0 * g.h2);
    };
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const FlattenDerivs fd =
                flatten_derivs(field.geom, g.y1(i), g.y2(j));
            const double f1 = dy1(i, j), f2 = dy2(i, j);
            Fx1(i, j) = f1 + fd.alpha * f2;
            Fx2(i, j) = fd.beta * f2;
        }
    }
}

}  // namespace

PrimitiveField reconstruct(const FlowField& field) {
    const Grid& g = field.grid;
    PrimitiveField pf;
    pf.grid = g;
    pf.rho.resize(g.n1, g.n2);
    pf.u1.resize(g.n1, g.n2);
    pf.u2.resize(g.n1, g.n2);
    pf.p.resize(g.n1, g.n2);
    pf.q.resize(g.n1, g.n2);
    pf.theta.resize(g.n1, g.n2);
    pf.mach.resize(g.n1, g.n2);
    pf.omega.resize(g.n1, g.n2);
    pf.B.resize(g.n1, g.n2);
    pf.S.resize(g.n1, g.n2);
    const Eigen::MatrixXi band = gamma_band_mask(field);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const Eigen::Vector2d gr = nodal_gradient(field, i, j);
            const double s = field.psi(i, j);
            const double gmod = gr.norm();
            if (field.incompressible()) {
                const IncClosure& clo = *field.inc;
                const IncState st = inc_state(clo, s, gmod);
                pf.rho(i, j) = st.rho;
                pf.u1(i, j) = gr(1) / st.rho;
                pf.u2(i, j) = -gr(0) / st.rho;
                pf.q(i, j) = gmod / st.rho;
                pf.p(i, j) = st.p;
                pf.mach(i, j) = 0.0;
                pf.B(i, j) = clo.B(s);
                pf.S(i, j) = clo.G(s);
                pf.omega(i, j) =
                    -(st.rho * clo.dB(s) +
                      (clo.B(s) - 0.5 * pf.q(i, j) * pf.q(i, j)) *
                          clo.dG(s));
            } else {
                const StreamClosure& clo = *field.closure;
                // the same clamp the solver uses; a bitwise no-op whenever
                // the node is comfortably subsonic
                const double gt =
                    cutoff_gradient(clo, s, gmod, field.eps_cut);
                const GasState st = gas_state(clo, s, gt);
                const double gam = clo.gamma();
                pf.rho(i, j) = st.rho;
                pf.u1(i, j) = gr(1) / st.rho;
                pf.u2(i, j) = -gr(0) / st.rho;
                pf.q(i, j) = gmod / st.rho;
                pf.p(i, j) = st.p;
                pf.mach(i, j) = pf.q(i, j) / std::sqrt(st.c2);
                pf.B(i, j) = clo.B(s);
                pf.S(i, j) = clo.S(s);
                pf.omega(i, j) =
                    -st.rho * clo.dB(s) +
                    std::pow(st.rho, gam) * clo.dS(s) / gam;
            }
            pf.theta(i, j) = std::atan2(pf.u2(i, j), pf.u1(i, j));
            if (g.interior(i, j) && band(i, j) == 0 &&
                gr(1) <= 0.0) {
                pf.degenerate_nodes.emplace_back(i, j);
            }
        }
    }
    return pf;
}

Eigen::MatrixXi gamma_band_mask(const FlowField& field) {
    const Grid& g = field.grid;
    Eigen::MatrixXi mask = Eigen::MatrixXi::Zero(g.n1, g.n2);
    const double m_d = field.incompressible() ? field.inc->jump_value()
                                              : field.closure->jump_value();
    if (m_d < 0.0) return mask;
    Eigen::MatrixXi hit = Eigen::MatrixXi::Zero(g.n1, g.n2);
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 0; j + 1 < g.n2; ++j) {
            const double lo =
                std::min(std::min(field.psi(i, j), field.psi(i + 1, j)),
                         std::min(field.psi(i, j + 1), field.psi(i + 1, j + 1)));
            const double hi =
                std::max(std::max(field.psi(i, j), field.psi(i + 1, j)),
                         std::max(field.psi(i, j + 1), field.psi(i + 1, j + 1)));
            if (lo <= m_d && m_d <= hi) {
                hit(i, j) = hit(i + 1, j) = hit(i, j + 1) =
                    hit(i + 1, j + 1) = 1;
            }
        }
    }
    // dilate by one cell
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            if (hit(i, j) == 0) continue;
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const int ii = i + di, jj = j + dj;
                    if (ii >= 0 && ii < g.n1 && jj >= 0 && jj < g.n2) {
                        mask(ii, jj) = 1;
                    }
                }
            }
        }
    }
    return mask;
}

double masked_max(const Eigen::MatrixXd& a, const Eigen::MatrixXi& mask,
                  int margin) {
    const int n1 = static_cast<int>(a.rows()), n2 = static_cast<int>(a.cols());
    double best = 0.0;
    for (int i = margin; i < n1 - margin; ++i) {
        for (int j = margin; j < n2 - margin; ++j) {
            if (mask.size() > 0 && mask(i, j) != 0) continue;
            best = std::max(best, std::abs(a(i, j)));
        }
    }
    return best;
}

double wall_inclination(const Geometry& geom, double L) {
    const int samples = 8193;
    double best = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double x1 = -2.0 * L + 4.0 * L * k / (samples - 1);
        best = std::max(best, std::abs(std::atan(geom.lower.dw(x1))));
        best = std::max(best, std::abs(std::atan(geom.upper.dw(x1))));
    }
    return best;
}

namespace {

// does the extremum value occur within one cell of the boundary?
bool extremum_near_boundary(const Eigen::MatrixXd& a, double value,
                            double tie_tol) {
    const int n1 = static_cast<int>(a.rows()), n2 = static_cast<int>(a.cols());
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const bool near =
                i <= 1 || i >= n1 - 2 || j <= 1 || j >= n2 - 2;
            if (near && std::abs(a(i, j) - value) <= tie_tol) return true;
        }
    }
    return false;
}

}  // namespace

MaxPrincipleReport max_principle_report(const FlowField& field,
                                        const PrimitiveField& prim) {
    MaxPrincipleReport rep;
    rep.p_min = prim.p.minCoeff();
    rep.p_max = prim.p.maxCoeff();
    rep.theta_min = prim.theta.minCoeff();
    rep.theta_max = prim.theta.maxCoeff();
    const double p_tie = 1e-12 * (std::abs(rep.p_min) + std::abs(rep.p_max));
    const double t_tie =
        1e-12 * (std::abs(rep.theta_min) + std::abs(rep.theta_max) + 1.0);
    rep.p_on_boundary = extremum_near_boundary(prim.p, rep.p_min, p_tie) &&
                        extremum_near_boundary(prim.p, rep.p_max, p_tie);
    rep.theta_on_boundary =
        extremum_near_boundary(prim.theta, rep.theta_min, t_tie) &&
        extremum_near_boundary(prim.theta, rep.theta_max, t_tie);
    rep.theta_abs_max =
        std::max(std::abs(rep.theta_min), std::abs(rep.theta_max));
    rep.theta_bound = wall_inclination(field.geom, field.grid.L);
    rep.theta_within_bound = rep.theta_abs_max <= rep.theta_bound + 1e-3;
    rep.pass =
        rep.p_on_boundary && rep.theta_on_boundary && rep.theta_within_bound;
    return rep;
}

BalanceResidual residual_balance(const FlowField& field,
                                 const PrimitiveField& prim) {
    const Grid& g = field.grid;
    Eigen::MatrixXd tx1, tx2, px1, px2;
    physical_derivatives(field, prim.theta, tx1, tx2);
    physical_derivatives(field, prim.p, px1, px2);
    BalanceResidual out;
    out.r1.setZero(g.n1, g.n2);
    out.r2.setZero(g.n1, g.n2);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double th = prim.theta(i, j);
            const double sn = std::sin(th), cs = std::cos(th);
            const double rq2 =
                prim.rho(i, j) * prim.q(i, j) * prim.q(i, j);
            const double M2 = prim.mach(i, j) * prim.mach(i, j);
            out.r1(i, j) = sn * tx1(i, j) - cs * tx2(i, j) +
                           (1.0 - M2) / rq2 *
                               (cs * px1(i, j) + sn * px2(i, j));
            out.r2(i, j) = cs * tx1(i, j) + sn * tx2(i, j) -
                           (sn * px1(i, j) - cs * px2(i, j)) / rq2;
        }
    }
    const Eigen::MatrixXi band = gamma_band_mask(field);
    out.max1 = masked_max(out.r1, band, 1);
    out.max2 = masked_max(out.r2, band, 1);
    return out;
}

Eigen::MatrixXd divergence_residual(const FlowField& field,
                                    const PrimitiveField& prim) {
    Eigen::MatrixXd f1 = prim.rho.cwiseProduct(prim.u1);
    Eigen::MatrixXd f2 = prim.rho.cwiseProduct(prim.u2);
    Eigen::MatrixXd a1, a2, b1, b2;
    physical_derivatives(field, f1, a1, a2);
    physical_derivatives(field, f2, b1, b2);
    return a1 + b2;
}

Eigen::MatrixXd discrete_curl(const FlowField& field,
                              const PrimitiveField& prim) {
    Eigen::MatrixXd u1x1, u1x2, u2x1, u2x2;
    physical_derivatives(field, prim.u1, u1x1, u1x2);
    physical_derivatives(field, prim.u2, u2x1, u2x2);
    return u2x1 - u1x2;
}

double station_flux(const FlowField& field, int i) {
    const Grid& g = field.grid;
    ensure_param(i >= 0 && i < g.n1, "station_flux: column out of range");
    const Eigen::VectorXd d = deriv4(field.psi.row(i).transpose(), g.h2);
    return simpson(d, g.h2);
}

Eigen::VectorXd station_flux_all(const FlowField& field) {
    Eigen::VectorXd out(field.grid.n1);
    for (int i = 0; i < field.grid.n1; ++i) out(i) = station_flux(field, i);
    return out;
}

namespace {

// Column interpolant of psi as a function of the physical height, with
// fourth-order slopes; strictly increasing values required.
Pchip column_psi(const FlowField& field, int i, Eigen::VectorXd& x2) {
    const Grid& g = field.grid;
    const double w1 = field.geom.lower.w(g.y1(i));
    const double D = field.geom.width(g.y1(i));
    x2.resize(g.n2);
    for (int j = 0; j < g.n2; ++j) x2(j) = w1 + g.y2(j) * D;
    const Eigen::VectorXd psi_col = field.psi.row(i).transpose();
    // d(psi)/dx2 = d(psi)/dy2 / D
    Eigen::VectorXd slopes = deriv4(psi_col, g.h2) / D;
    for (int j = 0; j < g.n2; ++j) {
        if (!(slopes(j) > 0.0) || (j > 0 && psi_col(j) <= psi_col(j - 1))) {
            throw transform_error(
                "to_lagrangian: column " + std::to_string(i) +
                " is not strictly increasing in the vertical");
        }
    }
    return Pchip(x2, psi_col, slopes);
}

}  // namespace

LagrangianField to_lagrangian(const FlowField& field) {
    const Grid& g = field.grid;
    const int nz = g.n2;
    LagrangianField lag;
    lag.m = field.m;
    lag.m_d = field.incompressible() ? field.inc->jump_value()
                                     : field.closure->jump_value();
    lag.z1 = g.y1;
    lag.z2.resize(nz);
    for (int k = 0; k < nz; ++k) lag.z2(k) = field.m * k / (nz - 1);
    lag.phi.resize(g.n1, nz);
    lag.Q.resize(g.n1, nz);
    lag.p.resize(g.n1, nz);
    lag.rho.resize(g.n1, nz);

    for (int i = 0; i < g.n1; ++i) {
        Eigen::VectorXd x2;
        const Pchip psi_col = column_psi(field, i, x2);
        for (int k = 0; k < nz; ++k) {
            // walls carry exact stream values; invert strictly inside
            double h;
            if (k == 0) {
                h = x2(0);
            } else if (k == nz - 1) {
                h = x2(g.n2 - 1);
            } else {
                h = psi_col.invert(lag.z2(k));
            }
            lag.phi(i, k) = h;
        }
    }
    // momentum modulus from the Lagrangian gradient
    const double hz1 = g.h1, hz2 = field.m / (nz - 1);
    auto d1 = [&](int i, int k) {
        if (i == 0)
            return (-3.0 * lag.phi(0, k) + 4.0 * lag.phi(1, k) -
                    lag.phi(2, k)) /
                   (2.0 * hz1);
        if (i == g.n1 - 1)
            return (3.0 * lag.phi(i, k) - 4.0 * lag.phi(i - 1, k) +
                    lag.phi(i - 2, k)) /
                   (2.0 * hz1);
        return (lag.phi(i + 1, k) - lag.phi(i - 1, k)) / (2.0 * hz1);
    };
    auto d2 = [&](int i, int k) {
        if (k == 0)
            return (-3.0 * lag.phi(i, 0) + 4.0 * lag.phi(i, 1) -
                    lag.phi(i, 2)) /
                   (2.0 * hz2);
        if (k == nz - 1)
            return (3.0 * lag.phi(i, k) - 4.0 * lag.phi(i, k - 1) +
                    lag.phi(i, k - 2)) /
                   (2.0 * hz2);
        return (lag.phi(i, k + 1) - lag.phi(i, k - 1)) / (2.0 * hz2);
    };
    for (int i = 0; i < g.n1; ++i) {
        for (int k = 0; k < nz; ++k) {
            const double p1 = d1(i, k), p2 = d2(i, k);
            lag.Q(i, k) = std::sqrt(p1 * p1 + 1.0) / p2;
            // density and pressure as functions of the stream-label
            // gradient, the form the momentum equation itself uses
            const double s = lag.z2(k);
            if (field.incompressible()) {
                const IncState st =
                    inc_state(*field.inc, s, lag.Q(i, k));
                lag.rho(i, k) = st.rho;
                lag.p(i, k) = st.p;
            } else {
                const double gt = cutoff_gradient(*field.closure, s,
                                                  lag.Q(i, k), field.eps_cut);
                const GasState st = gas_state(*field.closure, s, gt);
                lag.rho(i, k) = st.rho;
                lag.p(i, k) = st.p;
            }
        }
    }
    return lag;
}

double lagrangian_roundtrip(const FlowField& field,
                            const LagrangianField& lag) {
    const Grid& g = field.grid;
    const int nz = static_cast<int>(lag.z2.size());
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        Eigen::VectorXd x2;
        const Pchip psi_col = column_psi(field, i, x2);
        // phi column as an interpolant with slopes 1 / (d(psi)/dx2)
        Eigen::VectorXd slopes(nz);
        for (int k = 0; k < nz; ++k) {
            slopes(k) = 1.0 / psi_col.deriv(lag.phi(i, k));
        }
        const Pchip phi_col(lag.z2, lag.phi.row(i).transpose(), slopes);
        for (int j = 0; j + 1 < g.n2; ++j) {
            const double xm = 0.5 * (x2(j) + x2(j + 1));
            const double err = std::abs(phi_col(psi_col(xm)) - xm);
            worst = std::max(worst, err);
        }
    }
    return worst;
}

Eigen::MatrixXd lagrangian_residual(const LagrangianField& lag) {
    const int n1 = static_cast<int>(lag.z1.size());
    const int nz = static_cast<int>(lag.z2.size());
    const double hz1 = lag.z1(1) - lag.z1(0);
    const double hz2 = lag.z2(1) - lag.z2(0);
    Eigen::MatrixXd T(n1, nz);
    for (int i = 0; i < n1; ++i) {
        for (int k = 0; k < nz; ++k) {
            double p1;
            if (i == 0)
                p1 = (-3.0 * lag.phi(0, k) + 4.0 * lag.phi(1, k) -
                      lag.phi(2, k)) /
                     (2.0 * hz1);
            else if (i == n1 - 1)
                p1 = (3.0 * lag.phi(i, k) - 4.0 * lag.phi(i - 1, k) +
                      lag.phi(i - 2, k)) /
                     (2.0 * hz1);
            else
                p1 = (lag.phi(i + 1, k) - lag.phi(i - 1, k)) / (2.0 * hz1);
            double p2;
            if (k == 0)
                p2 = (-3.0 * lag.phi(i, 0) + 4.0 * lag.phi(i, 1) -
                      lag.phi(i, 2)) /
                     (2.0 * hz2);
            else if (k == nz - 1)
                p2 = (3.0 * lag.phi(i, k) - 4.0 * lag.phi(i, k - 1) +
                      lag.phi(i, k - 2)) /
                     (2.0 * hz2);
            else
                p2 = (lag.phi(i, k + 1) - lag.phi(i, k - 1)) / (2.0 * hz2);
            T(i, k) = p1 / (lag.rho(i, k) * p2);
        }
    }
    Eigen::MatrixXd res = Eigen::MatrixXd::Zero(n1, nz);
    for (int i = 1; i + 1 < n1; ++i) {
        for (int k = 1; k + 1 < nz; ++k) {
            const double dT = (T(i + 1, k) - T(i - 1, k)) / (2.0 * hz1);
            const double dp =
                (lag.p(i, k + 1) - lag.p(i, k - 1)) / (2.0 * hz2);
            res(i, k) = dT + dp;
        }
    }
    return res;
}

}  // namespace nozzleflow
