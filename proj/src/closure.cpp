#include "nozzleflow/closure.hpp"

#include <cmath>

namespace nozzleflow {

namespace {
constexpr int kTableSamples = 2048;
}

const StreamClosure::Piece& StreamClosure::piece_at(double s, int side) const {
    if (pieces_.size() == 1) return pieces_.front();
    if (s < m_d_ || (s == m_d_ && side < 0)) return pieces_.front();
    return pieces_.back();
}

double StreamClosure::S_side(double s, int side) const {
    if (s < 0.0 || s > m_) {
        // extension by the linear derivative ramp
        if (s < 0.0) {
            if (s <= -m_) return S0_ - 0.5 * dS0_ * m_;
            return S0_ + dS0_ * (0.5 * s * s + m_ * s) / m_;
        }
        if (s >= 2.0 * m_) return Sm_ + 0.5 * dSm_ * m_;
        return Sm_ + dSm_ * (2.0 * m_ * s - 0.5 * s * s - 1.5 * m_ * m_) / m_;
    }
    return piece_at(s, side).S(s);
}

double StreamClosure::dS(double s) const {
    if (s < 0.0) return (s <= -m_) ? 0.0 : dS0_ * (s + m_) / m_;
    if (s > m_) return (s >= 2.0 * m_) ? 0.0 : dSm_ * (2.0 * m_ - s) / m_;
    return piece_at(s, 0).S.deriv(s);
}

namespace {
// antiderivative shape shared by both ramps
double ramp_value(double v0, double slope, double s, double m, bool upper) {
    if (upper) {
        if (s >= 2.0 * m) return v0 + 0.5 * slope * m;
        return v0 + slope * (2.0 * m * s - 0.5 * s * s - 1.5 * m * m) / m;
    }
    if (s <= -m) return v0 - 0.5 * slope * m;
    return v0 + slope * (0.5 * s * s + m * s) / m;
}

double ramp_slope(double slope, double s, double m, bool upper) {
    if (upper) return (s >= 2.0 * m) ? 0.0 : slope * (2.0 * m - s) / m;
    return (s <= -m) ? 0.0 : slope * (s + m) / m;
}
}  // namespace

double StreamClosure::B_side(double s, int side) const {
    if (s >= 0.0 && s <= m_) return piece_at(s, side).B(s);
    const bool upper = s > m_;
    const double St = S_side(s, 0);
    const double At = upper ? ramp_value(Am_, dAm_, s, m_, true)
                            : ramp_value(A0_, dA0_, s, m_, false);
    return std::pow(St, 1.0 / gamma_) * At;
}

double StreamClosure::dB(double s) const {
    if (s >= 0.0 && s <= m_) return piece_at(s, 0).B.deriv(s);
    const bool upper = s > m_;
    const double St = S_side(s, 0);
    const double At = upper ? ramp_value(Am_, dAm_, s, m_, true)
                            : ramp_value(A0_, dA0_, s, m_, false);
    const double dSt = dS(s);
    const double dAt = upper ? ramp_slope(dAm_, s, m_, true)
                             : ramp_slope(dA0_, s, m_, false);
    const double ig = 1.0 / gamma_;
    return ig * std::pow(St, ig - 1.0) * dSt * At + std::pow(St, ig) * dAt;
}

double StreamClosure::S(double s) const { return S_side(s, 0); }
double StreamClosure::B(double s) const { return B_side(s, 0); }

double StreamClosure::q_hat2(double s) const {
    const double g = gamma_;
    const double Bt = B_side(s, 0);
    const double St = S_side(s, 0);
    return (g - 1.0) * std::pow(2.0 * Bt / (g + 1.0), (g + 1.0) / (g - 1.0)) *
           std::pow(St, -2.0 / (g - 1.0));
}

double StreamClosure::q_hat(double s) const { return std::sqrt(q_hat2(s)); }

void StreamClosure::finalize() {
    ensure_param(!pieces_.empty(), "closure: no tables");
    const double ig = 1.0 / gamma_;
    const Piece& lo = pieces_.front();
    const Piece& hi = pieces_.back();
    S0_ = lo.S(0.0);
    Sm_ = hi.S(m_);
    dS0_ = lo.S.deriv_begin();
    dSm_ = hi.S.deriv_end();
    const double B0 = lo.B(0.0), Bm = hi.B(m_);
    const double dB0 = lo.B.deriv_begin(), dBm = hi.B.deriv_end();
    A0_ = B0 * std::pow(S0_, -ig);
    Am_ = Bm * std::pow(Sm_, -ig);
    dA0_ = dB0 * std::pow(S0_, -ig) - ig * B0 * std::pow(S0_, -ig - 1.0) * dS0_;
    dAm_ = dBm * std::pow(Sm_, -ig) - ig * Bm * std::pow(Sm_, -ig - 1.0) * dSm_;
    for (const Piece& p : pieces_) {
        ensure(p.S.values().minCoeff() > 0.0 && p.B.values().minCoeff() > 0.0,
               "closure: transported data must stay positive");
    }
    ensure(S0_ - 0.5 * dS0_ * m_ > 0.0 && Sm_ + 0.5 * dSm_ * m_ > 0.0 &&
               A0_ - 0.5 * dA0_ * m_ > 0.0 && Am_ + 0.5 * dAm_ * m_ > 0.0,
           "closure: derivative ramp extension loses positivity; the wall "
           "slopes of the data are too steep");
}

StreamClosure StreamClosure::from_tables(double gamma, double m,
                                         std::vector<PieceSpec> pieces,
                                         double jump_value) {
    ensure_param(gamma > 1.0, "closure: gamma must exceed 1");
    ensure_param(m > 0.0, "closure: mass flux must be positive");
    StreamClosure clo;
    clo.gamma_ = gamma;
    clo.m_ = m;
    clo.m_d_ = jump_value;
    for (auto& ps : pieces) {
        Piece p;
        p.lo = ps.s(0);
        p.hi = ps.s(ps.s.size() - 1);
        p.S = Pchip(ps.s, ps.S);
        p.B = Pchip(std::move(ps.s), std::move(ps.B));
        clo.pieces_.push_back(std::move(p));
    }
    ensure_param(!clo.pieces_.empty() && clo.pieces_.front().lo == 0.0 &&
                     clo.pieces_.back().hi == m,
                 "closure: tables must cover [0, m]");
    if (clo.pieces_.size() == 2) {
        ensure_param(jump_value > 0.0 && jump_value < m,
                     "closure: two-piece tables need an interior jump value");
    }
    clo.finalize();
    return clo;
}

StreamClosure build_closure(const InletProfile& profile, double m) {
    ensure_param(!profile.incompressible(),
                 "build_closure: compressible profiles only");
    const PsiMinus psim = psi_minus(profile, m);
    const Scalar1D Bx = bernoulli_profile(profile, m);
    const double m_d = psim.jump_value();

    std::vector<StreamClosure::PieceSpec> specs;
    std::vector<std::pair<double, double>> s_ranges;
    if (m_d > 0.0) {
        s_ranges = {{0.0, m_d}, {m_d, m}};
    } else {
        s_ranges = {{0.0, m}};
    }
    const auto x_pieces = profile.smooth_pieces();
    for (std::size_t pi = 0; pi < s_ranges.size(); ++pi) {
        auto [slo, shi] = s_ranges[pi];
        StreamClosure::PieceSpec spec;
        spec.s.resize(kTableSamples);
        spec.B.resize(kTableSamples);
        spec.S.resize(kTableSamples);
        for (int k = 0; k < kTableSamples; ++k) {
            const double s = slo + (shi - slo) * k / (kTableSamples - 1);
            double x = psim.invert(s);
            // pin the endpoints of the x-range to the exact piece ends
            if (k == 0) x = x_pieces[pi].first;
            if (k == kTableSamples - 1) x = x_pieces[pi].second;
            const int side =
                (k == 0) ? +1 : (k == kTableSamples - 1 ? -1 : 0);
            spec.s(k) = s;
            spec.S(k) = profile.S_side(x, side);
            // the Bernoulli callable evaluates naturally; feed it a point
            // nudged to the correct side of the jump
            double xb = x;
            if (profile.x_d) {
                if (side > 0 && x == *profile.x_d) {
                    spec.B(k) = bernoulli_at(profile, m, x, +1);
                    continue;
                }
                if (side < 0 && x == *profile.x_d) {
                    spec.B(k) = bernoulli_at(profile, m, x, -1);
                    continue;
                }
            }
            spec.B(k) = Bx(xb);
        }
        specs.push_back(std::move(spec));
    }
    return StreamClosure::from_tables(profile.gamma, m, std::move(specs), m_d);
}

GasState gas_state(const StreamClosure& clo, double s, double g) {
    const double gam = clo.gamma();
    const double B = clo.B(s), S = clo.S(s);
    if (!(B > 0.0) || !(S > 0.0)) {
        throw branch_error("gas_state: transported data not positive at s = " +
                           std::to_string(s));
    }
    GasState st;
    const double rho_max = std::pow(B / S, 1.0 / (gam - 1.0));
    if (g == 0.0) {
        st.rho = rho_max;
        st.q = 0.0;
        st.c2 = (gam - 1.0) * B;  // rho_max^(gam-1) * S = B
        st.p = (gam - 1.0) / gam * S * std::pow(rho_max, gam);
        st.M2 = 0.0;
        return st;
    }
    const double qh2 = clo.q_hat2(s);
    if (!(g * g < qh2)) {
        throw branch_error(
            "gas_state: momentum at or beyond the sonic value (subsonic "
            "branch only)");
    }
    auto F = [&](double r) {
        return r * r * B - std::pow(r, gam + 1.0) * S - 0.5 * g * g;
    };
    auto dF = [&](double r) {
        return 2.0 * r * B - (gam + 1.0) * std::pow(r, gam) * S;
    };
    double rho;
    if (g * g < 1e-12 * qh2) {
        // near stagnation the bracket degenerates; plain Newton from the
        // stagnation density converges quadratically and stays inside
        rho = rho_max;
        for (int it = 0; it < 4; ++it) {
            const double d = dF(rho);
            if (d == 0.0) break;
            rho -= F(rho) / d;
        }
    } else {
        const double rho_cr =
            std::pow(2.0 * B / ((gam + 1.0) * S), 1.0 / (gam - 1.0));
        rho = newton_bracketed(F, dF, rho_cr, rho_max,
                               0.5 * (rho_cr + rho_max), 4e-15 * rho_max);
    }
    st.rho = rho;
    st.q = g / rho;
    st.c2 = (gam - 1.0) * std::pow(rho, gam - 1.0) * S;
    st.p = (gam - 1.0) / gam * S * std::pow(rho, gam);
    st.M2 = st.q * st.q / st.c2;
    return st;
}

bool subsonic_criterion(const StreamClosure& clo, double s, double g) {
    return g * g < clo.q_hat2(s);
}

double zeta0(double t, double eps) {
    ensure_param(eps > 0.0, "zeta0: eps must be positive");
    if (t <= -2.0 * eps) return t;
    if (t >= -eps) return -1.5 * eps;
    // quintic blend: value/slope continuous at both ends, curvature zero
    const double tau = (t + 2.0 * eps) / eps;
    const double h = tau - tau * tau * tau + 0.5 * tau * tau * tau * tau;
    return -2.0 * eps + eps * h;
}

double cutoff_gradient(const StreamClosure& clo, double s, double g,
                       double eps) {
    ensure_param(eps > 0.0 && eps < 0.5, "cutoff_gradient: eps out of range");
    const double qh = clo.q_hat(s);
    const double t = g / qh - 1.0;
    if (t < -2.0 * eps) return g;  // identity region, bitwise
    return (zeta0(t, eps) + 1.0) * qh;
}

EllipticCoeffs elliptic_coefficients(const StreamClosure& clo, double s,
                                     double g1, double g2, double eps) {
    const double gam = clo.gamma();
    const double g = std::sqrt(g1 * g1 + g2 * g2);
    const double Qt = cutoff_gradient(clo, s, g, eps);
    EllipticCoeffs out;
    out.cut = (Qt != g);
    const GasState st = gas_state(clo, s, Qt);
    out.rho = st.rho;
    out.c2 = st.c2;
    out.q_tilde = st.q;
    const double rc2 = st.rho * st.rho * st.c2;
    const double sigma = (g > 0.0) ? Qt / g : 0.0;
    const double e1 = sigma * g1, e2 = sigma * g2;
    out.a11 = rc2 - e2 * e2;
    out.a12 = 2.0 * e1 * e2;
    out.a22 = rc2 - e1 * e1;
    const double rho3 = st.rho * st.rho * st.rho;
    const double rg = std::pow(st.rho, gam);
    const double dSs = clo.dS(s), dBs = clo.dB(s);
    out.f = -rho3 * st.q * st.q * (gam - 1.0) * rg * dSs / gam +
            rho3 * st.c2 * (st.rho * dBs - rg * dSs / gam);
    return out;
}

// --------------------------------------------------------- incompressible

const IncClosure::Piece& IncClosure::piece_at(double s, int side) const {
    if (pieces_.size() == 1) return pieces_.front();
    if (s < m_d_ || (s == m_d_ && side < 0)) return pieces_.front();
    return pieces_.back();
}

double IncClosure::G_side(double s, int side) const {
    if (s < 0.0) return ramp_value(G0_, dG0_, s, m_, false);
    if (s > m_) return ramp_value(Gm_, dGm_, s, m_, true);
    return piece_at(s, side).G(s);
}

double IncClosure::B_side(double s, int side) const {
    if (s < 0.0) return ramp_value(B0_, dB0_, s, m_, false);
    if (s > m_) return ramp_value(Bm_, dBm_, s, m_, true);
    return piece_at(s, side).B(s);
}

double IncClosure::dG(double s) const {
    if (s < 0.0) return ramp_slope(dG0_, s, m_, false);
    if (s > m_) return ramp_slope(dGm_, s, m_, true);
    return piece_at(s, 0).G.deriv(s);
}

double IncClosure::dB(double s) const {
    if (s < 0.0) return ramp_slope(dB0_, s, m_, false);
    if (s > m_) return ramp_slope(dBm_, s, m_, true);
    return piece_at(s, 0).B.deriv(s);
}

double IncClosure::G(double s) const { return G_side(s, 0); }
double IncClosure::B(double s) const { return B_side(s, 0); }

void IncClosure::finalize() {
    ensure_param(!pieces_.empty(), "closure: no tables");
    G0_ = pieces_.front().G(0.0);
    Gm_ = pieces_.back().G(m_);
    dG0_ = pieces_.front().G.deriv_begin();
    dGm_ = pieces_.back().G.deriv_end();
    B0_ = pieces_.front().B(0.0);
    Bm_ = pieces_.back().B(m_);
    dB0_ = pieces_.front().B.deriv_begin();
    dBm_ = pieces_.back().B.deriv_end();
    for (const Piece& p : pieces_) {
        ensure(p.G.values().minCoeff() > 0.0,
               "closure: density must stay positive");
    }
    ensure(ramp_value(G0_, dG0_, -m_, m_, false) > 0.0 &&
               ramp_value(Gm_, dGm_, 2.0 * m_, m_, true) > 0.0,
           "closure: density ramp extension loses positivity");
}

IncClosure IncClosure::from_tables(double m, std::vector<PieceSpec> pieces,
                                   double jump_value) {
    ensure_param(m > 0.0, "closure: mass flux must be positive");
    IncClosure clo;
    clo.m_ = m;
    clo.m_d_ = jump_value;
    for (auto& ps : pieces) {
        Piece p;
        p.lo = ps.s(0);
        p.hi = ps.s(ps.s.size() - 1);
        p.G = Pchip(ps.s, ps.G);
        p.B = Pchip(std::move(ps.s), std::move(ps.B));
        clo.pieces_.push_back(std::move(p));
    }
    ensure_param(!clo.pieces_.empty() && clo.pieces_.front().lo == 0.0 &&
                     clo.pieces_.back().hi == m,
                 "closure: tables must cover [0, m]");
    clo.finalize();
    return clo;
}

IncClosure build_inc_closure(const InletProfile& profile, double m) {
    ensure_param(profile.incompressible(),
                 "build_inc_closure: incompressible profiles only");
    double flux = 0.0;
    for (auto [lo, hi] : profile.smooth_pieces()) {
        flux += integrate_gl(
            [&](double x) { return profile.G(x) * profile.u1(x); }, lo, hi,
            16);
    }
    ensure(std::abs(flux - m) <= 1e-8 * std::max(1.0, std::abs(m)),
           "incompressible data rejected: condition inlet.flux-consistency "
           "failed (m must equal the integrated inlet momentum)");

    const PsiMinus psim = psi_minus(profile, m);
    const Scalar1D Bx = bernoulli_profile(profile, m);
    const double m_d = psim.jump_value();
    std::vector<std::pair<double, double>> s_ranges;
    if (m_d > 0.0) {
        s_ranges = {{0.0, m_d}, {m_d, m}};
    } else {
        s_ranges = {{0.0, m}};
    }
    const auto x_pieces = profile.smooth_pieces();
    std::vector<IncClosure::PieceSpec> specs;
    for (std::size_t pi = 0; pi < s_ranges.size(); ++pi) {
        auto [slo, shi] = s_ranges[pi];
        IncClosure::PieceSpec spec;
        spec.s.resize(kTableSamples);
        spec.G.resize(kTableSamples);
        spec.B.resize(kTableSamples);
        for (int k = 0; k < kTableSamples; ++k) {
            const double s = slo + (shi - slo) * k / (kTableSamples - 1);
            double x = psim.invert(s);
            if (k == 0) x = x_pieces[pi].first;
            if (k == kTableSamples - 1) x = x_pieces[pi].second;
            const int side =
                (k == 0) ? +1 : (k == kTableSamples - 1 ? -1 : 0);
            spec.s(k) = s;
            spec.G(k) = profile.G_side(x, side);
            spec.B(k) = bernoulli_at(profile, m, x, side);
        }
        specs.push_back(std::move(spec));
    }
    return IncClosure::from_tables(m, std::move(specs), m_d);
}

IncState inc_state(const IncClosure& clo, double s, double g) {
    IncState st;
    st.rho = clo.G(s);
    ensure(st.rho > 0.0, "inc_state: nonpositive density");
    st.q = g / st.rho;
    const double head = clo.B(s) - 0.5 * st.q * st.q;
    if (head <= 0.0) {
        throw branch_error(
            "inc_state: kinetic energy exceeds the stagnation energy");
    }
    st.p = st.rho * head;
    return st;
}

double inc_rhs(const IncClosure& clo, double s, double g1, double g2) {
    const double g2sum = g1 * g1 + g2 * g2;
    const double G = clo.G(s);
    const double dG = clo.dG(s);
    const double B = clo.B(s);
    const double dB = clo.dB(s);
    const double q2 = g2sum / (G * G);
    return (dG / G) * g2sum + G * (G * dB + (B - 0.5 * q2) * dG);
}

}  // namespace nozzleflow
