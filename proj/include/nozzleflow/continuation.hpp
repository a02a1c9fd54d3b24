#pragma once

#include <vector>

#include "nozzleflow/solver.hpp"

namespace nozzleflow {

// Sonic margin of a converged field: min over nodes of 1 - |grad psi|/Q_hat.
// Positive exactly when the flow is strictly subsonic.
double margin(const FlowField& field);

// How a downward sweep in the mass flux ends: the margin itself collapses
// toward zero (choking), or the iteration stops converging while the margin
// stays away from zero.
enum class TerminalKind { sonic_approach, solver_breakdown };

struct MarginPoint {
    double m = 0.0;
    // sonic margin of the attempt's last iterate (converged or not)
    double margin = 0.0;
    // gradient cut-off width the attempt ran with
    double eps_cut = 0.0;
    bool solved = false;
    // margin exceeded twice the active cut width (cut provably inactive)
    bool certified = false;
};

struct SweepOptions {
    // starting mass flux; nonpositive picks m_start_scale times the flux
    // threshold and escalates by doubling until a certified solve appears.
    // An explicit start that cannot be certified is a parameter error.
    double m_start = 0.0;
    double m_start_scale = 16.0;
    // geometric decrease factor of the downward march
    double decrease = 0.75;
    // relative width target of the final bracket
    double bracket_tol = 1e-3;
    // acceptance thresholds eps_j = eps_cut * 2^-j, j = 0..schedule_len-1
    int schedule_len = 7;
    int max_attempts = 120;
    double L = 1.5;
    SolverOptions solver;
};

struct ContinuationResult {
    // bracket of the critical flux: the solve fails (or stops being
    // strictly subsonic) at m_lo and succeeds at m_hi
    double m_lo = 0.0, m_hi = 0.0;
    double margin_hi = 0.0;
    // smallest flux whose field met the active acceptance threshold
    // (margin above twice the cut width, so the cut-off never engaged)
    double m_certified = 0.0;
    double margin_certified = 0.0;
    TerminalKind terminal_kind = TerminalKind::sonic_approach;
    std::vector<MarginPoint> margin_curve;
    // converged field at m_hi (warm-start seed and trend diagnostics)
    FlowField field_hi;
};

// Downward continuation in the mass flux: march geometrically from a
// certified subsonic start, tightening the cut-off acceptance schedule as
// margins shrink, then bisect the final (failing, succeeding) pair to
// bracket the critical flux. Warm starts scale the previous stream
// function; a failure only counts after a cold-start retry.
ContinuationResult bers_sweep(const Geometry& geom,
                              const InletProfile& profile,
                              const SweepOptions& opts = {});

}  // namespace nozzleflow
