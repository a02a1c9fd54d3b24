#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nozzleflow/numerics.hpp"

namespace nozzleflow {

// Far-upstream data on the inlet strip x2 in [0, 1]: horizontal velocity and
// entropy-like variable, smooth except for at most one jump at x_d. For the
// incompressible family the density profile G replaces S.
struct InletProfile {
    double gamma = 1.4;

    // left callables govern [0, x_d), right callables [x_d, 1]; for smooth
    // profiles both sides are the same function
    Scalar1D u1_left, u1_right;
    Scalar1D S_left, S_right;
    std::optional<double> x_d;

    // distance scale on which the data is regular next to the walls; a jump
    // must keep at least 2*eps0 away from both walls
    double eps0 = 0.25;

    // exterior-force potential as a function of the stream value; empty
    // means force-free
    Scalar1D phi;

    // incompressible density profile (G-closure family); empty otherwise
    Scalar1D G_left, G_right;

    bool has_jump() const { return x_d.has_value(); }
    bool incompressible() const { return static_cast<bool>(G_left); }

    double u1(double x) const;
    double S(double x) const;
    double G(double x) const;
    // side: -1 left limit, +1 right limit, 0 natural (right-closed at x_d)
    double u1_side(double x, int side) const;
    double S_side(double x, int side) const;
    double G_side(double x, int side) const;

    // Mach-content function u1^2 * S^(-1/gamma); its extrema steer the flux
    // threshold, the outlet pressure bounds, and the critical pressure.
    double k(double x) const;
    double k_side(double x, int side) const;

    // [(0, x_d), (x_d, 1)] or [(0, 1)]
    std::vector<std::pair<double, double>> smooth_pieces() const;
};

InletProfile constant_profile(double u0, double S0, double gamma);
// coefficients in ascending powers of x2
InletProfile polynomial_profile(std::vector<double> cu, std::vector<double> cS,
                                double gamma);
InletProfile two_state_profile(double uL, double SL, double uR, double SR,
                               double x_d, double gamma);
InletProfile table_profile(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& S, double gamma);

// Incompressible variants carry (u1, G) instead of (u1, S).
InletProfile constant_profile_inc(double u0, double G0);
InletProfile polynomial_profile_inc(std::vector<double> cu,
                                    std::vector<double> cG);
InletProfile two_state_profile_inc(double uL, double GL, double uR, double GR,
                                   double x_d);

// Compressible member of the fixed-(G, B) family: S = (g/(g-1)) * G^-g.
InletProfile compressible_member(const InletProfile& inc_profile, double gamma);

// One validation result; `id` is the stable condition identifier used in run
// reports and error messages.
struct ProfileCheck {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ProfileCheck> checks;
    bool pass = true;
};

ValidationReport validate_inlet(const InletProfile& profile);
// Throws validation_error naming the first failing condition id.
void require_valid_inlet(const InletProfile& profile);

// Integral of u1 * S^(-1/gamma) over the inlet (split at the jump).
double inlet_integral(const InletProfile& profile);

// Far-upstream pressure induced by mass flux m.
double inlet_pressure(const InletProfile& profile, double m);

// Bernoulli function along the inlet, minus the exterior potential when one
// is configured. Throws validation_error if m is not above the flux
// threshold.
Scalar1D bernoulli_profile(const InletProfile& profile, double m);
double bernoulli_at(const InletProfile& profile, double m, double x,
                    int side = 0);

// Flux threshold: inlet data is strictly subsonic exactly for m above it.
double m_hat(const InletProfile& profile);

// Largest inlet Mach number at mass flux m.
double inlet_mach_max(const InletProfile& profile, double m);

// Inlet density at mass flux m (from the pressure and the entropy profile).
double inlet_density(const InletProfile& profile, double m, double x,
                     int side = 0);

// Stream function of the inlet state: strictly increasing from 0 to m.
class PsiMinus {
public:
    double operator()(double x2) const;
    double invert(double s) const;
    double m() const { return m_; }
    // stream value of the data jump; negative when the profile is smooth
    double jump_value() const { return m_d_; }

private:
    friend PsiMinus psi_minus(const InletProfile&, double);
    std::vector<Pchip> pieces_;
    std::vector<std::pair<double, double>> ranges_;
    double m_ = 0.0, m_d_ = -1.0;
};

PsiMinus psi_minus(const InletProfile& profile, double m);

// Wall-respecting mollification: returns a smooth profile that agrees with
// the input exactly within 2*eps of the walls' regularity zone and smooths
// the jump. Requires eps < eps0.
InletProfile mollify(const InletProfile& profile, double eps);

}  // namespace nozzleflow
