// model.hpp — full photocell pipeline: geometry -> Hamiltonian -> baths ->
// Liouvillian assembly -> steady state -> heat-engine observables.
//
// The ring eigenbasis is the globally sorted sector-diagonalized basis. With
// an incoherent trap the working basis is the explicit ring (x) trap product
// (block transform, energies E_r -+ omega_t/2, unsorted globally); it is never
// re-diagonalized, which keeps the deliberate |BTTS,e> / |TTTS,g> degeneracy
// (omega_t = omega_good) cleanly separated. A coherent trap re-diagonalizes
// the full Hamiltonian sector by sector instead.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gslide/dissipators.hpp"
#include "gslide/heatengine.hpp"
#include "gslide/liouvillian.hpp"

namespace gslide {

enum class RingMode { guide_slide, parallel };
enum class ReinitScheme { ladder, site, none };

struct EnvironmentSpec {
    double t_opt = 5800.0;      // K, optical bath
    double t_vib = 300.0;       // K, phonon bath
    double suppression = 0.99;  // band-gap S
    bool bandgap = true;
    PhononModel phonon_model = PhononModel::ohmic;
    double phonon_multiplier = 1e3;  // ohmic presets: fast 1e3, match 1, slow 1e-3, off 0
    double lambda = 5e-3;            // eV, superohmic reorganisation energy
    double omega_crit = 90e-3;       // eV, superohmic cutoff
};

struct Scenario {
    RingSpec ring;
    RingMode mode = RingMode::guide_slide;
    EnvironmentSpec env;
    ReinitScheme reinit = ReinitScheme::ladder;
    double gamma_r = 1e-2;  // eV
};

inline LadderConvention ladder_convention(RingMode m) {
    return m == RingMode::guide_slide ? LadderConvention::guide_slide : LadderConvention::parallel;
}

// GS rings suppress frequencies below the cutoff (the downward leak), parallel
// rings suppress above.
inline BandgapSide suppressed_side(RingMode m) {
    return m == RingMode::guide_slide ? BandgapSide::below : BandgapSide::above;
}

struct Observables {
    double pop_alpha = 0.0;  // trap excited
    double pop_beta = 0.0;   // trap ground
    double pop_btts = 0.0;
    double pop_ttts = 0.0;
    std::vector<double> rung_pops;    // ladder rungs 0..btts_rung, trap traced out
    std::vector<double> site_ground;  // per ring site
    std::vector<double> site_excited;
};

namespace detail {

inline Eigen::VectorXd lift_ring_vector(const Eigen::VectorXd& v, int trap_bit, int full_dim) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(full_dim);
    out.segment(trap_bit * static_cast<int>(v.size()), v.size()) = v;
    return out;
}

// sigma^x of the bit selected by mask, in the eigenbasis of `b`.
inline Eigen::MatrixXd sigma_x_eigenbasis(const Eigenbasis& b, int mask) {
    Eigen::MatrixXd xu(b.dim, b.dim);
    for (int s = 0; s < b.dim; ++s) xu.row(s) = b.transform.row(s ^ mask);
    return b.transform.transpose() * xu;
}

// Explicit ring (x) trap product basis; globally unsorted by design.
inline Eigenbasis product_with_trap(const Eigenbasis& ring, double omega_t) {
    const int rd = ring.dim;
    const int d = 2 * rd;
    Eigenbasis b;
    b.dim = d;
    b.max_manifold = ring.max_manifold + 1;
    b.energies.resize(d);
    b.transform = Eigen::MatrixXd::Zero(d, d);
    b.manifold.resize(d);
    b.ladder_flag.assign(d, false);
    for (int t = 0; t < 2; ++t) {
        for (int a = 0; a < rd; ++a) {
            const int idx = t * rd + a;
            b.energies(idx) = ring.energies(a) + (t ? 0.5 : -0.5) * omega_t;
            b.transform.block(t * rd, idx, rd, 1) = ring.transform.col(a);
            b.manifold[idx] = ring.manifold[a] + t;
        }
    }
    return b;
}

}  // namespace detail

class Model {
  public:
    explicit Model(Scenario sc) : sc_(std::move(sc)) { build(); }

    const Scenario& scenario() const { return sc_; }
    const CouplingMatrix& coupling_matrix() const { return j_; }
    const Eigenbasis& ring_basis() const { return ring_; }
    const Eigenbasis& basis() const { return full_; }
    const TargetTransition& target() const { return target_; }
    const OpticalBath& optical_bath() const { return optical_; }
    const PhononBath& phonon_bath() const { return phonon_; }
    bool phonons_active() const { return phonons_; }
    bool has_trap() const { return has_trap_; }
    double omega_t() const { return target_.omega_good; }
    SteadyStateOptions& solver_options() { return solver_opts_; }

    // Steady state at load gamma_t (eV). gamma_t is ignored without a trap.
    SteadyState solve(double gamma_t) const {
        Liouvillian l = l_static_;
        if (has_trap_ && gamma_t != 0.0) l.superop += Complex(gamma_t, 0.0) * trap_unit_;
        return steady_state(l, rho0_, solver_opts_);
    }

    Observables observables(const Eigen::MatrixXcd& rho) const {
        const int d = full_.dim;
        const Eigen::MatrixXcd site_rho =
            full_.transform * rho * full_.transform.transpose();
        const Eigen::VectorXd site_diag = site_rho.diagonal().real();

        Observables o;
        const int n = sc_.ring.n_sites;
        o.site_ground.assign(n, 0.0);
        o.site_excited.assign(n, 0.0);
        for (int s = 0; s < d; ++s) {
            if (has_trap_) {
                if (s & trap_mask_)
                    o.pop_alpha += site_diag(s);
                else
                    o.pop_beta += site_diag(s);
            }
            for (int i = 0; i < n; ++i) {
                if (s >> i & 1)
                    o.site_excited[i] += site_diag(s);
                else
                    o.site_ground[i] += site_diag(s);
            }
        }
        o.rung_pops.resize(rung_proj_.size());
        for (std::size_t k = 0; k < rung_proj_.size(); ++k)
            o.rung_pops[k] = (rung_proj_[k].cast<Complex>() * rho).trace().real();
        o.pop_btts = o.rung_pops[target_.btts_rung];
        o.pop_ttts = (ttts_proj_.cast<Complex>() * rho).trace().real();
        return o;
    }

    // Output power (W) at a given load; optional access to the solved state.
    double output_power_at(double gamma_t, Observables* obs_out = nullptr,
                           SteadyState* ss_out = nullptr) const {
        if (!has_trap_) throw std::logic_error("output_power_at: no trap configured");
        const SteadyState ss = solve(gamma_t);
        const Observables o = observables(ss.rho);
        if (obs_out) *obs_out = o;
        if (ss_out) *ss_out = ss;
        if (o.pop_alpha <= 0.0 || o.pop_beta <= 0.0) return 0.0;
        const double i = current(gamma_t, o.pop_alpha);
        const double v = voltage(omega_t(), sc_.env.t_vib, o.pop_alpha, o.pop_beta);
        return output_power(i, v);
    }

    // Reinitialisation input power (W) of the configured scheme.
    double input_power(const Observables& o) const {
        if (sc_.gamma_r <= 0.0) return 0.0;
        switch (sc_.reinit) {
            case ReinitScheme::none:
                return 0.0;
            case ReinitScheme::ladder: {
                std::vector<double> pops, energies;
                for (int nn = 0; nn < target_.btts_rung; ++nn) {
                    pops.push_back(o.rung_pops[nn]);
                    energies.push_back(ring_.energies(ring_.ladder[nn]));
                }
                return input_power_ladder(sc_.gamma_r, pops, energies,
                                          ring_.energies(target_.btts));
            }
            case ReinitScheme::site:
                return input_power_site(sc_.gamma_r, sc_.env.t_vib, o.site_ground,
                                        o.site_excited, sc_.ring.omega_a);
        }
        return 0.0;
    }

    // Load optimisation plus full power accounting at the optimum.
    PowerReport optimize(const LoadScan& scan = {}) const {
        const LoadOptimum opt =
            optimize_load([this](double g) { return output_power_at(g); }, scan);
        Observables o;
        const double p_out = output_power_at(opt.gamma_t_star, &o);

        PowerReport r;
        r.gamma_t_star = opt.gamma_t_star;
        r.unimodal = opt.unimodal;
        r.trace = opt.trace;
        r.pop_alpha = o.pop_alpha;
        r.pop_beta = o.pop_beta;
        r.current_a = current(opt.gamma_t_star, o.pop_alpha);
        r.voltage_v = o.pop_alpha > 0.0 && o.pop_beta > 0.0
                          ? voltage(omega_t(), sc_.env.t_vib, o.pop_alpha, o.pop_beta)
                          : 0.0;
        r.p_out = p_out;
        r.p_in = input_power(o);
        r.p_net = r.p_out - r.p_in;
        if (sc_.reinit == ReinitScheme::ladder) {
            for (int nn = 0; nn < target_.btts_rung; ++nn)
                r.channel_currents.push_back(constants::e_c *
                                             constants::rate_ev_to_hz(sc_.gamma_r) *
                                             o.rung_pops[nn]);
        } else if (sc_.reinit == ReinitScheme::site) {
            for (double g : o.site_ground)
                r.channel_currents.push_back(constants::e_c *
                                             constants::rate_ev_to_hz(sc_.gamma_r) * g);
        }
        return r;
    }

  private:
    void build() {
        const RingSpec& ring = sc_.ring;
        if (ring.n_sites < 1) throw std::invalid_argument("Model: empty ring");
        j_ = ring.n_sites > 1 ? coupling(ring) : CouplingMatrix::Zero(1, 1);
        ring_ = diagonalize(build_hamiltonian(ring, j_));
        identify_ladder(ring_, ladder_convention(sc_.mode));
        target_ = target_transition(ring_);
        has_trap_ = ring.trap.has_value();

        optical_.temperature = sc_.env.t_opt;
        optical_.kappa_opt = calibrate_kappa_opt(ring.tau_l_ref, ring.omega_a_ref);
        if (sc_.env.bandgap && sc_.env.suppression > 0.0 && target_.omega_bad) {
            Bandgap gap;
            gap.side = suppressed_side(sc_.mode);
            gap.suppression = sc_.env.suppression;
            gap.cutoff = bandgap_cutoff(target_.omega_good, *target_.omega_bad, gap.side);
            optical_.bandgap = gap;
        }

        phonon_.model = sc_.env.phonon_model;
        phonon_.temperature = sc_.env.t_vib;
        phonons_ = false;
        if (sc_.env.phonon_model == PhononModel::ohmic) {
            if (sc_.env.phonon_multiplier > 0.0) {
                try {
                    phonon_.kappa_vib =
                        calibrate_kappa_vib(mean_intra_manifold_frequency(ring_),
                                            ring.tau_l_ref, sc_.env.phonon_multiplier);
                    phonons_ = true;
                } catch (const std::exception&) {
                    // fully degenerate manifolds (e.g. uncoupled ring): nothing to relax
                    phonons_ = false;
                }
            }
        } else {
            phonon_.lambda = sc_.env.lambda;
            phonon_.omega_crit = sc_.env.omega_crit;
            phonons_ = sc_.env.lambda > 0.0 && sc_.env.phonon_multiplier > 0.0;
        }

        const double omega_t_val = target_.omega_good;
        if (has_trap_) {
            trap_mask_ = ring_.dim;  // highest bit
            if (ring.trap->mode == TrapMode::coherent)
                full_ = diagonalize(
                    build_full_hamiltonian(ring, j_, omega_t_val, ring.trap->c_x));
            else
                full_ = detail::product_with_trap(ring_, omega_t_val);
        } else {
            full_ = ring_;
        }

        std::vector<DissipatorBlock> blocks;
        blocks.push_back(optical_tensor(full_, ring, optical_));
        if (phonons_)
            for (auto& blk : vibrational_tensor(full_, ring, phonon_))
                blocks.push_back(std::move(blk));

        if (sc_.reinit == ReinitScheme::ladder && sc_.gamma_r > 0.0) {
            for (int nn = 0; nn < target_.btts_rung; ++nn)
                blocks.push_back(reinit_ladder_block(nn));
        } else if (sc_.reinit == ReinitScheme::site && sc_.gamma_r > 0.0) {
            for (int i = 0; i < ring.n_sites; ++i)
                blocks.push_back(directional_dissipator(
                    detail::sigma_x_eigenbasis(full_, 1 << i), sc_.gamma_r, -1, full_,
                    "reinit(site " + std::to_string(i) + ")"));
        }

        if (has_trap_ && ring.trap->mode == TrapMode::incoherent && ring.trap->gamma_x > 0.0)
            blocks.push_back(extraction_block(ring.trap->gamma_x));

        Eigen::SparseMatrix<double> hs(full_.dim, full_.dim);
        {
            std::vector<Eigen::Triplet<double>> ht;
            for (int a = 0; a < full_.dim; ++a) ht.emplace_back(a, a, full_.energies(a));
            hs.setFromTriplets(ht.begin(), ht.end());
        }
        l_static_ = assemble(hs, blocks);

        if (has_trap_)
            trap_unit_ = directional_dissipator(detail::sigma_x_eigenbasis(full_, trap_mask_),
                                                1.0, +1, full_, "trap")
                             .superop;

        int ground = 0;
        full_.energies.minCoeff(&ground);
        rho0_ = Eigen::MatrixXcd::Zero(full_.dim, full_.dim);
        rho0_(ground, ground) = 1.0;

        rung_proj_.clear();
        for (int nn = 0; nn <= target_.btts_rung; ++nn)
            rung_proj_.push_back(ring_eigenstate_projector(ring_.ladder[nn]));
        ttts_proj_ = ring_eigenstate_projector(target_.ttts);
    }

    // Projector onto a ring eigenstate (trap traced out), in the full eigenbasis.
    Eigen::MatrixXd ring_eigenstate_projector(int ring_index) const {
        const Eigen::VectorXd v = ring_.transform.col(ring_index);
        Eigen::MatrixXd p_site = Eigen::MatrixXd::Zero(full_.dim, full_.dim);
        if (has_trap_) {
            for (int t = 0; t < 2; ++t) {
                const Eigen::VectorXd u = detail::lift_ring_vector(v, t, full_.dim);
                p_site += u * u.transpose();
            }
        } else {
            p_site = v * v.transpose();
        }
        return full_.transform.transpose() * p_site * full_.transform;
    }

    // |BTTS> <rung n| (x) identity on the trap, as a Lindblad pump at gamma_r.
    DissipatorBlock reinit_ladder_block(int rung) const {
        const Eigen::VectorXd vb = ring_.transform.col(target_.btts);
        const Eigen::VectorXd vn = ring_.transform.col(ring_.ladder[rung]);
        Eigen::MatrixXd a_site = Eigen::MatrixXd::Zero(full_.dim, full_.dim);
        if (has_trap_) {
            for (int t = 0; t < 2; ++t)
                a_site += detail::lift_ring_vector(vb, t, full_.dim) *
                          detail::lift_ring_vector(vn, t, full_.dim).transpose();
        } else {
            a_site = vb * vn.transpose();
        }
        const Eigen::MatrixXd a_eig =
            full_.transform.transpose() * a_site * full_.transform;
        const Eigen::SparseMatrix<double> jump = a_eig.sparseView(1.0, 1e-12);
        return lindblad_block(jump, sc_.gamma_r, full_.dim,
                              "reinit(ladder " + std::to_string(rung) + ")");
    }

    // |BTTS, e> <TTTS, g| at rate gamma_x; energy conserving by omega_t = omega_good.
    DissipatorBlock extraction_block(double gamma_x) const {
        const Eigen::VectorXd u =
            detail::lift_ring_vector(ring_.transform.col(target_.btts), 1, full_.dim);
        const Eigen::VectorXd w =
            detail::lift_ring_vector(ring_.transform.col(target_.ttts), 0, full_.dim);
        const Eigen::MatrixXd a_eig =
            full_.transform.transpose() * (u * w.transpose()) * full_.transform;
        const Eigen::SparseMatrix<double> jump = a_eig.sparseView(1.0, 1e-12);
        return lindblad_block(jump, gamma_x, full_.dim, "extraction");
    }

    Scenario sc_;
    CouplingMatrix j_;
    Eigenbasis ring_;
    Eigenbasis full_;
    TargetTransition target_;
    OpticalBath optical_;
    PhononBath phonon_;
    bool phonons_ = false;
    bool has_trap_ = false;
    int trap_mask_ = 0;
    Liouvillian l_static_;
    Superop trap_unit_;
    Eigen::MatrixXcd rho0_;
    std::vector<Eigen::MatrixXd> rung_proj_;
    Eigen::MatrixXd ttts_proj_;
    SteadyStateOptions solver_opts_;
};

}  // namespace gslide
