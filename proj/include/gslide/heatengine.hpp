// heatengine.hpp — trap current/voltage observables, load optimisation and
// input-power accounting for the photocell figure of merit.
//
// Rates are energies (eV) internally; division by hbar converts to Hz only
// where SI currents and powers are formed.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gslide/constants.hpp"

namespace gslide {

// I = e (gamma_t / hbar) <rho_alpha>, amperes.
inline double current(double gamma_t, double pop_alpha) {
    return constants::e_c * constants::rate_ev_to_hz(gamma_t) * pop_alpha;
}

// eV = omega_t + kB T_vib ln(rho_alpha / rho_beta); returned in volts.
inline double voltage(double omega_t, double t_vib, double pop_alpha, double pop_beta) {
    if (pop_alpha <= 0.0 || pop_beta <= 0.0)
        throw std::runtime_error("voltage undefined: vanishing trap population");
    return omega_t + constants::kb_ev_k * t_vib * std::log(pop_alpha / pop_beta);
}

inline double output_power(double current_a, double voltage_v) { return current_a * voltage_v; }

// Reinitialisation power, ladder scheme: every pump from rung n to the BTTS
// deposits (E_BTTS - E_n) at rate gamma_r <pop_n>. Watts.
inline double input_power_ladder(double gamma_r, const std::vector<double>& rung_pops,
                                 const std::vector<double>& rung_energies, double e_btts) {
    if (rung_pops.size() != rung_energies.size())
        throw std::invalid_argument("input_power_ladder: size mismatch");
    double p = 0.0;
    for (std::size_t n = 0; n < rung_pops.size(); ++n)
        p += constants::e_c * constants::rate_ev_to_hz(gamma_r) * rung_pops[n] *
             (e_btts - rung_energies[n]);
    return p;
}

// Reinitialisation power, site scheme: per-site pump current against the
// site's chemical-potential difference. Watts.
inline double input_power_site(double gamma_r, double t_vib, const std::vector<double>& pop_g,
                               const std::vector<double>& pop_e,
                               const std::vector<double>& omega_a) {
    if (pop_g.size() != pop_e.size() || pop_g.size() != omega_a.size())
        throw std::invalid_argument("input_power_site: size mismatch");
    double p = 0.0;
    for (std::size_t i = 0; i < pop_g.size(); ++i) {
        if (pop_g[i] == 0.0) continue;  // nothing to pump, zero current
        const double i_a = constants::e_c * constants::rate_ev_to_hz(gamma_r) * pop_g[i];
        const double v = voltage(omega_a[i], t_vib, pop_g[i], pop_e[i]);
        p += i_a * v;
    }
    return p;
}

struct LoadScan {
    double gamma_min = 1e-12;  // eV
    double gamma_max = 1e-1;   // eV
    int points = 60;
    double refine_rel = 0.01;  // stop when the log-bracket width falls below this
};

struct LoadPoint {
    double gamma_t = 0.0;
    double p_out = 0.0;  // W
};

struct LoadOptimum {
    double gamma_t_star = 0.0;
    double p_out_star = 0.0;
    bool unimodal = true;
    std::vector<LoadPoint> trace;  // coarse grid, for diagnostics and plots
};

// Maximises p_out(gamma_t) on a log grid followed by golden-section
// refinement in log space. Multiple strict grid maxima set unimodal = false;
// refinement then proceeds around the global grid maximum.
inline LoadOptimum optimize_load(const std::function<double(double)>& p_out,
                                 const LoadScan& scan = {}) {
    if (scan.points < 3) throw std::invalid_argument("optimize_load: need at least 3 points");
    if (scan.gamma_min <= 0.0 || scan.gamma_max <= scan.gamma_min)
        throw std::invalid_argument("optimize_load: bad scan range");

    const double la = std::log(scan.gamma_min);
    const double lb = std::log(scan.gamma_max);
    LoadOptimum opt;
    std::vector<double> vals(scan.points);
    int best = 0;
    for (int i = 0; i < scan.points; ++i) {
        const double g = std::exp(la + (lb - la) * i / (scan.points - 1));
        vals[i] = p_out(g);
        opt.trace.push_back({g, vals[i]});
        if (vals[i] > vals[best]) best = i;
    }
    int n_maxima = 0;
    for (int i = 0; i < scan.points; ++i) {
        const bool left_ok = i == 0 || vals[i] > vals[i - 1];
        const bool right_ok = i == scan.points - 1 || vals[i] > vals[i + 1];
        if (left_ok && right_ok) ++n_maxima;
    }
    opt.unimodal = n_maxima <= 1;

    const double step = (lb - la) / (scan.points - 1);
    double lo = best > 0 ? la + step * (best - 1) : la;
    double hi = best < scan.points - 1 ? la + step * (best + 1) : lb;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = p_out(std::exp(x1));
    double f2 = p_out(std::exp(x2));
    while (hi - lo > scan.refine_rel) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = p_out(std::exp(x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = p_out(std::exp(x1));
        }
    }
    const double lx = 0.5 * (lo + hi);
    opt.gamma_t_star = std::exp(lx);
    opt.p_out_star = p_out(opt.gamma_t_star);
    if (vals[best] > opt.p_out_star) {
        opt.gamma_t_star = opt.trace[best].gamma_t;
        opt.p_out_star = vals[best];
    }
    return opt;
}

struct PowerReport {
    double gamma_t_star = 0.0;  // eV
    double current_a = 0.0;     // A
    double voltage_v = 0.0;     // V
    double p_out = 0.0;         // W
    double p_in = 0.0;          // W
    double p_net = 0.0;         // W
    double pop_alpha = 0.0;
    double pop_beta = 0.0;
    bool unimodal = true;
    std::vector<LoadPoint> trace;
    std::vector<double> channel_currents;  // per-rung or per-site pump currents, A
};

}  // namespace gslide
