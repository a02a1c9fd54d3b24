#pragma once

#include "nozzleflow/geometry.hpp"
#include "nozzleflow/inlet.hpp"

namespace nozzleflow {

// Far-downstream constant-pressure state together with the streamline
// end-to-end map. Profiles are functions of the inlet label y in [0, 1];
// x2_of_y sends the label to the terminal height in [a, b].
struct AsymptoticState {
    double gamma = 1.4;
    double m = 0.0;
    double p_minus = 0.0;
    double p_plus = 0.0;
    double p_lower = 0.0, p_upper = 0.0;
    // J(p_plus) - (b - a) at the accepted root
    double width_residual = 0.0;

    Scalar1D u1_plus;
    Scalar1D rho_plus;
    Scalar1D x2_of_y;
    // inverse map [a, b] -> [0, 1], for station-profile comparisons
    Scalar1D y_of_x2;
};

// Admissible outlet-pressure interval (open): above the lower bound every
// streamline exits subsonically, below the upper bound every streamline
// exits with positive speed. Exterior potentials shift the Bernoulli
// function and propagate into both bounds.
std::pair<double, double> outlet_pressure_bounds(const InletProfile& profile,
                                                 double m);

// Predicted outlet width for the back-pressure candidate: the integral over
// the inlet label of the mass-flux density divided by the outlet momentum
// density. Strictly increasing in the candidate; diverges at the upper
// pressure bound. Quadrature is graded toward the slowest streamline and
// refined until the error estimate is below 1e-10 relative.
// Throws parameter_error when the candidate leaves the admissible interval.
double J_eval(double p_plus_candidate, const InletProfile& profile, double m);

// Solve the width equation J(p) = b - a for the outlet state and assemble
// the outlet profiles and the terminal-position map. Throws parameter_error
// when the bracket fails, naming the failing inequality.
AsymptoticState outlet_state(const InletProfile& profile, double m,
                             const Geometry& geom);

// Conservative pressure threshold: any flow whose pressure stays above it is
// subsonic throughout the nozzle. Closed form in max(u1^2 S^(-1/gamma)) and
// the inlet pressure.
double critical_pressure(const InletProfile& profile, double m);

// Sharp per-streamline sonic pressure at inlet height y: the flow on that
// streamline is subsonic exactly while its pressure exceeds this value.
double sonic_pressure(const InletProfile& profile, double m, double y,
                      int side = 0);

}  // namespace nozzleflow
