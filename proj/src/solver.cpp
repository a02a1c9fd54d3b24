#include "nozzleflow/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace nozzleflow {

namespace {

// Physical coefficients of a11 psi_11 + a12 psi_12 + a22 psi_22 = f at one
// node, plus bookkeeping for the margin and cut-off counters.
struct PhysCoeffs {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, f = 0.0;
    bool cut = false;
};

using CoeffFn = std::function<PhysCoeffs(double s, double g1, double g2)>;
using MarginFn = std::function<double(double s, double g1, double g2)>;

struct Metric {
    Eigen::MatrixXd alpha, alpha_y1, alpha_y2;
    Eigen::VectorXd beta, beta_y1;
};

Metric cache_metric(const Geometry& geom, const Grid& grid) {
    Metric mc;
    mc.alpha.resize(grid.n1, grid.n2);
    mc.alpha_y1.resize(grid.n1, grid.n2);
    mc.alpha_y2.resize(grid.n1, grid.n2);
    mc.beta.resize(grid.n1);
    mc.beta_y1.resize(grid.n1);
    for (int i = 0; i < grid.n1; ++i) {
        for (int j = 0; j < grid.n2; ++j) {
            const FlattenDerivs fd =
                flatten_derivs(geom, grid.y1(i), grid.y2(j));
            mc.alpha(i, j) = fd.alpha;
            mc.alpha_y1(i, j) = fd.alpha_y1;
            mc.alpha_y2(i, j) = fd.alpha_y2;
            if (j == 0) {
                mc.beta(i) = fd.beta;
                mc.beta_y1(i) = fd.beta * fd.alpha_y2;
            }
        }
    }
    return mc;
}

// Transformed second-order coefficients at an interior node.
struct NodeCoeffs {
    double A11 = 0.0, A12 = 0.0, A22 = 0.0, b2 = 0.0, f = 0.0;
};

struct IterationState {
    Eigen::MatrixXd A11, A12, A22, b2, f;
    int cut_count = 0;
    double margin = 1.0;
};

// One coefficient-and-residual pass over the interior: evaluates the frozen
// coefficients at the current iterate and the scaled residual max-norm.
double coefficient_pass(const Grid& grid, const Metric& mc,
                        const Eigen::MatrixXd& psi, double m,
                        const CoeffFn& coeff, const MarginFn& margin_fn,
                        IterationState& st) {
    const double h1 = grid.h1, h2 = grid.h2;
    double res = 0.0;
    st.cut_count = 0;
    st.margin = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < grid.n1; ++i) {
        for (int j = 1; j + 1 < grid.n2; ++j) {
            const double py1 = (psi(i + 1, j) - psi(i - 1, j)) / (2.0 * h1);
            const double py2 = (psi(i, j + 1) - psi(i, j - 1)) / (2.0 * h2);
            const double al = mc.alpha(i, j), be = mc.beta(i);
            const double g1 = py1 + al * py2;
            const double g2 = be * py2;
            const double s = psi(i, j);
            const PhysCoeffs pc = coeff(s, g1, g2);
            if (pc.cut) ++st.cut_count;
            st.margin = std::min(st.margin, margin_fn(s, g1, g2));
            const double A11 = pc.a11;
            const double A12 = 2.0 * pc.a11 * al + pc.a12 * be;
            const double A22 =
                pc.a11 * al * al + pc.a12 * al * be + pc.a22 * be * be;
            const double b2v =
                pc.a11 * (mc.alpha_y1(i, j) + al * mc.alpha_y2(i, j)) +
                pc.a12 * mc.beta_y1(i);
            st.A11(i, j) = A11;
            st.A12(i, j) = A12;
            st.A22(i, j) = A22;
            st.b2(i, j) = b2v;
            st.f(i, j) = pc.f;
            const double lap1 =
                (psi(i + 1, j) - 2.0 * psi(i, j) + psi(i - 1, j)) / (h1 * h1);
            const double lap2 =
                (psi(i, j + 1) - 2.0 * psi(i, j) + psi(i, j - 1)) / (h2 * h2);
            const double mixed =
                (psi(i + 1, j + 1) - psi(i + 1, j - 1) - psi(i - 1, j + 1) +
                 psi(i - 1, j - 1)) /
                (4.0 * h1 * h2);
            const double r =
                A11 * lap1 + A12 * mixed + A22 * lap2 + b2v * py2 - pc.f;
            const double scale =
                (2.0 * std::abs(A11) / (h1 * h1) +
                 2.0 * std::abs(A22) / (h2 * h2) +
                 std::abs(A12) / (h1 * h2) + std::abs(b2v) / h2) *
                    m +
                std::abs(pc.f);
            res = std::max(res, std::abs(r) / scale);
        }
    }
    return res;
}

Eigen::MatrixXd initial_iterate(const Grid& grid, double m,
                                const Eigen::MatrixXd* init) {
    Eigen::MatrixXd psi(grid.n1, grid.n2);
    if (init != nullptr) {
        ensure_param(init->rows() == grid.n1 && init->cols() == grid.n2,
                     "solve: warm-start shape does not match the grid");
        psi = *init;
    } else {
        for (int i = 0; i < grid.n1; ++i)
            for (int j = 0; j < grid.n2; ++j) psi(i, j) = m * grid.y2(j);
    }
    // boundary rows carry the Dirichlet data exactly
    for (int j = 0; j < grid.n2; ++j) {
        psi(0, j) = m * grid.y2(j);
        psi(grid.n1 - 1, j) = m * grid.y2(j);
    }
    for (int i = 0; i < grid.n1; ++i) {
        psi(i, 0) = 0.0;
        psi(i, grid.n2 - 1) = m;
    }
    return psi;
}

// Damped Picard iteration with frozen coefficients; shared by the
// compressible and incompressible paths.
std::pair<Eigen::MatrixXd, SolveReport> picard_loop(
    const Grid& grid, const Metric& mc, double m, const CoeffFn& coeff,
    const MarginFn& margin_fn, const SolverOptions& opts,
    const Eigen::MatrixXd* init) {
    const int n1 = grid.n1, n2 = grid.n2;
    const int ni = n1 - 2, nj = n2 - 2;
    const double h1 = grid.h1, h2 = grid.h2;
    Eigen::MatrixXd psi = initial_iterate(grid, m, init);

    IterationState st;
    st.A11.setZero(n1, n2);
    st.A12.setZero(n1, n2);
    st.A22.setZero(n1, n2);
    st.b2.setZero(n1, n2);
    st.f.setZero(n1, n2);

    auto idx = [nj](int i, int j) { return (i - 1) * nj + (j - 1); };

    Eigen::SparseMatrix<double> A(ni * nj, ni * nj);
    Eigen::VectorXd rhs(ni * nj);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;

    SolveReport rep;
    double damping = opts.damping;
    double best_res = std::numeric_limits<double>::infinity();
    int best_iter = 0;
    double res0 = 0.0;

    for (int iter = 0;; ++iter) {
        const double res =
            coefficient_pass(grid, mc, psi, m, coeff, margin_fn, st);
        rep.residual_history.push_back(res);
        if (!std::isfinite(res)) {
            convergence_info info{iter, res, best_res, st.margin,
                                  st.cut_count};
            throw convergence_error("solve: residual is not finite", info);
        }
        if (res < best_res) {
            best_res = res;
            best_iter = iter;
        }
        if (iter == 0) res0 = std::max(res, 1.0);
        if (res < opts.tol) {
            rep.iterations = iter;
            rep.residual = res;
            rep.margin = st.margin;
            rep.cut_activations = st.cut_count;
            rep.converged = true;
            return {std::move(psi), rep};
        }
        convergence_info info{iter, res, best_res, st.margin, st.cut_count};
        if (res > opts.divergence_factor * res0) {
            throw convergence_error("solve: Picard iteration diverged", info);
        }
        if (iter - best_iter >= opts.stagnation_window) {
            throw convergence_error(
                "solve: residual plateau over the stagnation window", info);
        }
        if (iter >= opts.max_iterations) {
            throw convergence_error("solve: iteration budget exhausted",
                                    info);
        }

        // assemble the frozen-coefficient linear problem
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(ni) * nj * 9);
        rhs.setZero();
        for (int i = 1; i + 1 < n1; ++i) {
            for (int j = 1; j + 1 < n2; ++j) {
                const double cE = st.A11(i, j) / (h1 * h1);
                const double cN =
                    st.A22(i, j) / (h2 * h2) + st.b2(i, j) / (2.0 * h2);
                const double cS =
                    st.A22(i, j) / (h2 * h2) - st.b2(i, j) / (2.0 * h2);
                const double cC = -2.0 * st.A11(i, j) / (h1 * h1) -
                                  2.0 * st.A22(i, j) / (h2 * h2);
                const double cX = st.A12(i, j) / (4.0 * h1 * h2);
                const int row = idx(i, j);
                double b = st.f(i, j);
                auto add = [&](int ii, int jj, double v) {
                    if (v == 0.0) return;
                    if (grid.interior(ii, jj)) {
                        trips.emplace_back(row, idx(ii, jj), v);
                    } else {
                        const double bc =
                            (jj == 0) ? 0.0
                            : (jj == n2 - 1)
                                ? m
                                : m * grid.y2(jj);  // end data m*y2
                        b -= v * bc;
                    }
                };
                trips.emplace_back(row, row, cC);
                add(i + 1, j, cE);
                add(i - 1, j, cE);
                add(i, j + 1, cN);
                add(i, j - 1, cS);
                add(i + 1, j + 1, cX);
                add(i - 1, j - 1, cX);
                add(i + 1, j - 1, -cX);
                add(i - 1, j + 1, -cX);
                rhs(row) = b;
            }
        }
        A.setFromTriplets(trips.begin(), trips.end());
        if (!analyzed) {
            lu.analyzePattern(A);
            analyzed = true;
        }
        lu.factorize(A);
        if (lu.info() != Eigen::Success) {
            throw convergence_error(
                "solve: linear factorization failed (ellipticity lost)",
                info);
        }
        const Eigen::VectorXd sol = lu.solve(rhs);

        // damped update
        for (int i = 1; i + 1 < n1; ++i) {
            for (int j = 1; j + 1 < n2; ++j) {
                const double target = sol(idx(i, j));
                psi(i, j) += damping * (target - psi(i, j));
            }
        }
        rep.damping_history.push_back(damping);

        // residual-ratio adaptation
        const auto& hist = rep.residual_history;
        if (hist.size() >= 2) {
            const double ratio = hist.back() / hist[hist.size() - 2];
            if (ratio > 0.99) {
                damping = std::max(opts.min_damping, 0.5 * damping);
            } else if (ratio < 0.5) {
                damping = std::min(1.0, 1.4 * damping);
            }
        }
    }
}

CoeffFn compressible_coeffs(const StreamClosure& clo, double eps_cut) {
    return [&clo, eps_cut](double s, double g1, double g2) {
        const EllipticCoeffs ec =
            elliptic_coefficients(clo, s, g1, g2, eps_cut);
        PhysCoeffs pc;
        pc.a11 = ec.a11;
        pc.a12 = ec.a12;
        pc.a22 = ec.a22;
        pc.f = ec.f;
        pc.cut = ec.cut;
        return pc;
    };
}

MarginFn compressible_margin(const StreamClosure& clo) {
    return [&clo](double s, double g1, double g2) {
        return 1.0 - std::sqrt(g1 * g1 + g2 * g2) / clo.q_hat(s);
    };
}

CoeffFn incompressible_coeffs(const IncClosure& clo) {
    return [&clo](double s, double g1, double g2) {
        PhysCoeffs pc;
        pc.a11 = 1.0;
        pc.a12 = 0.0;
        pc.a22 = 1.0;
        pc.f = inc_rhs(clo, s, g1, g2);
        return pc;
    };
}

MarginFn incompressible_margin(const IncClosure& clo) {
    return [&clo](double s, double g1, double g2) {
        const double G = clo.G(s);
        const double q2 = (g1 * g1 + g2 * g2) / (G * G);
        return 1.0 - q2 / (2.0 * clo.B(s));
    };
}

}  // namespace

std::pair<FlowField, SolveReport> solve_bounded(
    const Geometry& geom, std::shared_ptr<const StreamClosure> closure,
    double m, double L, const SolverOptions& opts,
    const Eigen::MatrixXd* init) {
    ensure_param(closure != nullptr, "solve: closure required");
    ensure_param(m > 0.0 && std::abs(m - closure->m()) <= 1e-12 * m,
                 "solve: mass flux must match the closure tables");
    const Grid grid = truncate(geom, L, opts.n1, opts.n2);
    const Metric mc = cache_metric(geom, grid);
    auto [psi, rep] = picard_loop(grid, mc, m, compressible_coeffs(*closure, opts.eps_cut),
                                  compressible_margin(*closure), opts, init);
    FlowField field;
    field.geom = geom;
    field.grid = grid;
    field.psi = std::move(psi);
    field.m = m;
    field.eps_cut = opts.eps_cut;
    field.residual_norm = rep.residual;
    field.closure = std::move(closure);
    // the margin over all nodes (the loop tracks interior ones only)
    rep.margin = sonic_margin(field);
    return {std::move(field), rep};
}

std::pair<FlowField, SolveReport> solve_bounded_inc(
    const Geometry& geom, std::shared_ptr<const IncClosure> closure, double m,
    double L, const SolverOptions& opts, const Eigen::MatrixXd* init) {
    ensure_param(closure != nullptr, "solve: closure required");
    ensure_param(m > 0.0 && std::abs(m - closure->m()) <= 1e-12 * m,
                 "solve: mass flux must match the closure tables");
    const Grid grid = truncate(geom, L, opts.n1, opts.n2);
    const Metric mc = cache_metric(geom, grid);
    auto [psi, rep] =
        picard_loop(grid, mc, m, incompressible_coeffs(*closure),
                    incompressible_margin(*closure), opts, init);
    FlowField field;
    field.geom = geom;
    field.grid = grid;
    field.psi = std::move(psi);
    field.m = m;
    field.eps_cut = 0.0;
    field.residual_norm = rep.residual;
    field.inc = std::move(closure);
    rep.margin = sonic_margin(field);
    return {std::move(field), rep};
}

namespace {

// Shared doubling loop; `solve_at` runs one bounded solve at length L with
// n1 nodes and returns the psi matrix.
DomainStudy doubling_study(
    const Geometry& geom, double L0, const DomainOptions& opts,
    const std::function<FlowField(double L, int n1)>& solve_at) {
    ensure_param(opts.solver.n1 % 2 == 1,
                 "extend_domain: n1 must be odd so doubled windows nest");
    const int n1_0 = opts.solver.n1;
    DomainStudy study;

    FlowField prev = solve_at(L0, n1_0);
    study.lengths.push_back(L0);
    for (int k = 1; k <= opts.max_doublings; ++k) {
        const double L = L0 * std::pow(2.0, k);
        const int n1 = (n1_0 - 1) * (1 << k) + 1;
        FlowField cur = solve_at(L, n1);
        study.lengths.push_back(L);
        const int off = ((n1_0 - 1) * ((1 << k) - 1)) / 2;
        double diff = 0.0;
        // compare on the innermost window against the previous level
        const int off_prev =
            ((n1_0 - 1) * ((1 << (k - 1)) - 1)) / 2;
        for (int i = 0; i < n1_0; ++i) {
            for (int j = 0; j < prev.grid.n2; ++j) {
                diff = std::max(diff, std::abs(cur.psi(off + i, j) -
                                               prev.psi(off_prev + i, j)));
            }
        }
        study.window_diffs.push_back(diff);
        if (study.window_diffs.size() >= 2) {
            study.decay_rate =
                diff / study.window_diffs[study.window_diffs.size() - 2];
        }
        if (diff < opts.domain_tol) {
            FlowField win = cur;
            win.grid = truncate(geom, L0, n1_0, cur.grid.n2);
            win.psi = cur.psi.block(off, 0, n1_0, cur.grid.n2);
            study.field = std::move(win);
            return study;
        }
        prev = std::move(cur);
    }
    std::string msg =
        "extend_domain: window differences did not settle below tolerance (";
    for (std::size_t q = 0; q < study.window_diffs.size(); ++q) {
        if (q) msg += ", ";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3e", study.window_diffs[q]);
        msg += buf;
    }
    msg += ")";
    const auto& d = study.window_diffs;
    if (d.size() >= 3 && !(d[1] < d[0] && d[2] < d[1])) {
        msg += "; no decay across the doublings, truncation error dominates";
    }
    throw truncation_error(msg);
}

}  // namespace

DomainStudy extend_domain(const Geometry& geom,
                          std::shared_ptr<const StreamClosure> closure,
                          double m, double L0, const DomainOptions& opts) {
    return doubling_study(
        geom, L0, opts, [&](double L, int n1) {
            SolverOptions so = opts.solver;
            so.n1 = n1;
            return solve_bounded(geom, closure, m, L, so).first;
        });
}

DomainStudy extend_domain_inc(const Geometry& geom,
                              std::shared_ptr<const IncClosure> closure,
                              double m, double L0, const DomainOptions& opts) {
    return doubling_study(
        geom, L0, opts, [&](double L, int n1) {
            SolverOptions so = opts.solver;
            so.n1 = n1;
            return solve_bounded_inc(geom, closure, m, L, so).first;
        });
}

MonotonicityReport monotonicity_check(const FlowField& field) {
    const Grid& g = field.grid;
    MonotonicityReport rep;
    rep.min_dpsi = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < g.n1; ++i) {
        for (int j = 1; j + 1 < g.n2; ++j) {
            const FlattenDerivs fd =
                flatten_derivs(field.geom, g.y1(i), g.y2(j));
            const double d = fd.beta *
                             (field.psi(i, j + 1) - field.psi(i, j - 1)) /
                             (2.0 * g.h2);
            if (d < rep.min_dpsi) {
                rep.min_dpsi = d;
                rep.i = i;
                rep.j = j;
            }
            if (d <= 0.0) ++rep.violations;
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

Eigen::Vector2d nodal_gradient(const FlowField& field, int i, int j) {
    const Grid& g = field.grid;
    const Eigen::MatrixXd& psi = field.psi;
    auto d1 = [&](int ii, int jj) {
        if (ii == 0)
            return (-3.0 * psi(0, jj) + 4.0 * psi(1, jj) - psi(2, jj)) /
                   (2.0 * g.h1);
        if (ii == g.n1 - 1)
            return (3.0 * psi(ii, jj) - 4.0 * psi(ii - 1, jj) +
                    psi(ii - 2, jj)) /
                   (2.0 * g.h1);
        return (psi(ii + 1, jj) - psi(ii - 1, jj)) / (2.0 * g.h1);
    };
    auto d2 = [&](int ii, int jj) {
        if (jj == 0)
            return (-3.0 * psi(ii, 0) + 4.0 * psi(ii, 1) - psi(ii, 2)) /
                   (2.0 * g.h2);
        if (jj == g.n2 - 1)
            return (3.0 * psi(ii, jj) - 4.0 * psi(ii, jj - 1) +
                    psi(ii, jj - 2)) /
                   (2.0 * g.h2);
        return (psi(ii, jj + 1) - psi(ii, jj - 1)) / (2.0 * g.h2);
    };
    const FlattenDerivs fd = flatten_derivs(field.geom, g.y1(i), g.y2(j));
    const double py1 = d1(i, j), py2 = d2(i, j);
    return {py1 + fd.alpha * py2, fd.beta * py2};
}

double sonic_margin(const FlowField& field) {
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < field.grid.n1; ++i) {
        for (int j = 0; j < field.grid.n2; ++j) {
            const Eigen::Vector2d gr = nodal_gradient(field, i, j);
            const double s = field.psi(i, j);
            double node;
            if (field.incompressible()) {
                const double G = field.inc->G(s);
                node = 1.0 - gr.squaredNorm() / (G * G) /
                                 (2.0 * field.inc->B(s));
            } else {
                node = 1.0 - gr.norm() / field.closure->q_hat(s);
            }
            margin = std::min(margin, node);
        }
    }
    return margin;
}

}  // namespace nozzleflow
