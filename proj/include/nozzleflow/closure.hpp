#pragma once

#include "nozzleflow/inlet.hpp"

namespace nozzleflow {

// Transported Bernoulli and entropy functions of the stream value s on
// [0, m], tabulated from the inlet data and extended outside [0, m] by
// linear-ramp derivatives so every iterate of the solver can be evaluated.
// With a data jump the two sides are tabulated separately; evaluation never
// interpolates across the jump value.
class StreamClosure {
public:
    double gamma() const { return gamma_; }
    double m() const { return m_; }
    // stream value of the transported discontinuity; negative when smooth
    double jump_value() const { return m_d_; }
    bool has_jump() const { return m_d_ >= 0.0; }

    double S(double s) const;
    double B(double s) const;
    double dS(double s) const;
    double dB(double s) const;
    // side: -1 lower-stream limit, +1 upper-stream limit (matters at the
    // jump value only)
    double S_side(double s, int side) const;
    double B_side(double s, int side) const;

    // Sonic momentum bound: |grad psi| below it is exactly the subsonic
    // condition. q_hat2 is its square.
    double q_hat(double s) const;
    double q_hat2(double s) const;

    struct PieceSpec {
        Eigen::VectorXd s, B, S;
    };
    static StreamClosure from_tables(double gamma, double m,
                                     std::vector<PieceSpec> pieces,
                                     double jump_value = -1.0);

private:
    struct Piece {
        Pchip S, B;
        double lo = 0.0, hi = 0.0;
    };
    const Piece& piece_at(double s, int side) const;
    void finalize();

    std::vector<Piece> pieces_;
    double gamma_ = 1.4, m_ = 0.0, m_d_ = -1.0;
    // extension anchors: values and one-sided slopes of S and of
    // A = B * S^(-1/gamma) at s = 0 and s = m
    double S0_ = 0.0, Sm_ = 0.0, dS0_ = 0.0, dSm_ = 0.0;
    double A0_ = 0.0, Am_ = 0.0, dA0_ = 0.0, dAm_ = 0.0;
};

// Tabulate the closure of the given inlet data at mass flux m (2048 samples
// per smooth piece, shape-preserving cubic interpolation).
StreamClosure build_closure(const InletProfile& profile, double m);

// ------------------------------------------------------------ gas states

struct GasState {
    double rho = 0.0, q = 0.0, p = 0.0, c2 = 0.0, M2 = 0.0;
};

// Subsonic-branch density inversion at stream value s and momentum g.
// Throws branch_error at or beyond the sonic momentum.
GasState gas_state(const StreamClosure& clo, double s, double g);

// Exact subsonic test g^2 < q_hat^2(s).
bool subsonic_criterion(const StreamClosure& clo, double s, double g);

// Gradient cut-off: identity below (1 - 2 eps) * q_hat (bitwise), capped at
// (1 - 1.5 eps) * q_hat, smooth and nondecreasing in between.
double cutoff_gradient(const StreamClosure& clo, double s, double g,
                       double eps);
// The underlying smooth clamp profile (exposed for its shape tests).
double zeta0(double t, double eps);

// Quasilinear coefficients of the stream-function equation
//   a11 psi_11 + a12 psi_12 + a22 psi_22 = f
// evaluated at the cut-off state. When the cut-off is inactive the
// coefficients equal the raw subsonic ones bitwise.
struct EllipticCoeffs {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, f = 0.0;
    double rho = 0.0, c2 = 0.0, q_tilde = 0.0;
    bool cut = false;
};
EllipticCoeffs elliptic_coefficients(const StreamClosure& clo, double s,
                                     double g1, double g2, double eps);

// --------------------------------------------------- incompressible model

// Density and Bernoulli as functions of the stream value for the
// incompressible model, extended outside [0, m] by linear derivative ramps.
class IncClosure {
public:
    double m() const { return m_; }
    double jump_value() const { return m_d_; }
    bool has_jump() const { return m_d_ >= 0.0; }

    double G(double s) const;
    double B(double s) const;
    double dG(double s) const;
    double dB(double s) const;
    double G_side(double s, int side) const;
    double B_side(double s, int side) const;

    struct PieceSpec {
        Eigen::VectorXd s, G, B;
    };
    static IncClosure from_tables(double m, std::vector<PieceSpec> pieces,
                                  double jump_value = -1.0);

private:
    struct Piece {
        Pchip G, B;
        double lo = 0.0, hi = 0.0;
    };
    const Piece& piece_at(double s, int side) const;
    void finalize();

    std::vector<Piece> pieces_;
    double m_ = 0.0, m_d_ = -1.0;
    double G0_ = 0.0, Gm_ = 0.0, dG0_ = 0.0, dGm_ = 0.0;
    double B0_ = 0.0, Bm_ = 0.0, dB0_ = 0.0, dBm_ = 0.0;
};

// Requires m to equal the profile's own mass flux (the incompressible model
// has no pressure degree of freedom to absorb a mismatch).
IncClosure build_inc_closure(const InletProfile& profile, double m);

struct IncState {
    double rho = 0.0, q = 0.0, p = 0.0;
};

// Throws branch_error when the state exceeds its stagnation energy.
IncState inc_state(const IncClosure& clo, double s, double g);

// Right-hand side of the incompressible stream-function equation
// (Laplacian form): lap psi = inc_rhs(s, grad psi).
double inc_rhs(const IncClosure& clo, double s, double g1, double g2);

}  // namespace nozzleflow
