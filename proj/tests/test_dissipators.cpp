#include <catch2/catch_amalgamated.hpp>

#include "gslide/dissipators.hpp"
#include "gslide/liouvillian.hpp"
#include "gslide/model.hpp"

using namespace gslide;

namespace {

RingSpec table_ring(int n, double theta_zen) {
    return make_ring(n, 1.8, 2.5e-9, 1e-9, M_PI / 2.0, theta_zen);
}

Eigen::MatrixXcd act(const Superop& s, const Eigen::MatrixXcd& rho) {
    return unvectorize(s * vectorize(rho), static_cast<int>(rho.rows()));
}

Eigen::MatrixXcd random_density(int d, unsigned seed) {
    std::srand(seed);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(d, d);
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace();
}

double trace_leak(const Superop& s) {
    // max |column sum over the diagonal rows| = action of the identity left-vector
    const int n = static_cast<int>(s.rows());
    const int d = static_cast<int>(std::lround(std::sqrt(double(n))));
    Eigen::VectorXcd lhs = Eigen::VectorXcd::Zero(n);
    for (int k = 0; k < s.outerSize(); ++k)
        for (Superop::InnerIterator it(s, k); it; ++it) {
            const int row = static_cast<int>(it.row());
            if (row % d == row / d) lhs(it.col()) += it.value();
        }
    return lhs.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("single emitter optical tensor acts as the textbook Lindblad pair") {
    const RingSpec s = table_ring(1, M_PI / 2.0);
    const Eigenbasis b = diagonalize(build_hamiltonian(s, CouplingMatrix::Zero(1, 1)));
    OpticalBath bath;
    bath.temperature = 5800.0;
    bath.kappa_opt = calibrate_kappa_opt(2.5e-9, 1.8);
    const DissipatorBlock blk = optical_tensor(b, s, bath);

    const double g_down = optical_rate(1.8, bath);
    const double g_up = optical_rate(-1.8, bath);
    Eigen::SparseMatrix<double> lower(2, 2), raise(2, 2);
    lower.insert(0, 1) = 1.0;
    raise.insert(1, 0) = 1.0;
    Superop ref = lindblad_block(lower, g_down, 2, "down").superop +
                  lindblad_block(raise, g_up, 2, "up").superop;

    // the tensor carries extra raising/lowering cross pairs coupling the two
    // coherences; populations and decoherence match the Lindblad pair exactly
    std::srand(13);
    for (int k = 0; k < 4; ++k) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(2, 2);
        Eigen::MatrixXcd rho = a * a.adjoint();
        rho /= rho.trace();
        const Eigen::MatrixXcd diff = act(blk.superop, rho) - act(ref, rho);
        CHECK(diff.diagonal().cwiseAbs().maxCoeff() < 1e-18);
    }
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(2, 2);
    diag(0, 0) = 0.4;
    diag(1, 1) = 0.6;
    CHECK((act(blk.superop, diag) - act(ref, diag)).cwiseAbs().maxCoeff() < 1e-18);
}

TEST_CASE("all dissipator blocks annihilate the trace and preserve Hermiticity") {
    const RingSpec s = table_ring(4, M_PI / 4.0);
    const Eigenbasis b = [&] {
        Eigenbasis bb = diagonalize(build_hamiltonian(s, coupling(s)));
        identify_ladder(bb, LadderConvention::guide_slide);
        return bb;
    }();
    OpticalBath obath;
    obath.kappa_opt = calibrate_kappa_opt(2.5e-9, 1.8);
    PhononBath pbath;
    pbath.kappa_vib = calibrate_kappa_vib(mean_intra_manifold_frequency(b), 2.5e-9);

    std::vector<DissipatorBlock> blocks;
    blocks.push_back(optical_tensor(b, s, obath));
    for (auto& blk : vibrational_tensor(b, s, pbath)) blocks.push_back(std::move(blk));
    blocks.push_back(directional_dissipator(detail::sigma_x_eigenbasis(b, 1 << 0), 1e-2,
                                            -1, b, "pump"));

    const Eigen::MatrixXcd rho = random_density(b.dim, 7);
    for (const auto& blk : blocks) {
        INFO(blk.label);
        CHECK(trace_leak(blk.superop) < 1e-10);
        const Eigen::MatrixXcd drho = act(blk.superop, rho);
        CHECK((drho - drho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(drho.trace()) < 1e-12);
    }
}

TEST_CASE("vibrational tensor conserves total excitation") {
    const RingSpec s = table_ring(4, M_PI / 4.0);
    const Eigenbasis b = diagonalize(build_hamiltonian(s, coupling(s)));
    PhononBath bath;
    bath.kappa_vib = calibrate_kappa_vib(mean_intra_manifold_frequency(b), 2.5e-9);

    const Eigen::MatrixXcd rho = random_density(b.dim, 11);
    for (const auto& blk : vibrational_tensor(b, s, bath)) {
        const Eigen::MatrixXcd drho = act(blk.superop, rho);
        for (int m = 0; m <= b.max_manifold; ++m) {
            double flow = 0.0;
            for (int a = 0; a < b.dim; ++a)
                if (b.manifold[a] == m) flow += drho(a, a).real();
            CHECK(std::abs(flow) < 1e-12);
        }
    }
}

TEST_CASE("vibrational block balances a manifold Gibbs state") {
    // parallel dimer: one-excitation manifold is a two-level phonon system
    const RingSpec s = table_ring(2, M_PI / 2.0);
    const Eigenbasis b = diagonalize(build_hamiltonian(s, coupling(s)));
    PhononBath bath;
    bath.temperature = 300.0;
    bath.kappa_vib = 1e-4;

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    const double w = b.energies(2) - b.energies(1);
    const double z = 1.0 + std::exp(-w / (constants::kb_ev_k * 300.0));
    rho(1, 1) = 1.0 / z;
    rho(2, 2) = std::exp(-w / (constants::kb_ev_k * 300.0)) / z;

    Superop total(16, 16);
    for (const auto& blk : vibrational_tensor(b, s, bath)) total += blk.superop;
    const Eigen::MatrixXcd drho = act(total, rho);
    CHECK(drho.diagonal().cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("uncoupled ring has a dephasing-only vibrational block") {
    const RingSpec s = table_ring(3, M_PI / 2.0);
    const Eigenbasis b = diagonalize(build_hamiltonian(s, CouplingMatrix::Zero(3, 3)));
    PhononBath bath;
    bath.kappa_vib = 1e-3;
    const Eigen::MatrixXcd rho = random_density(b.dim, 3);
    for (const auto& blk : vibrational_tensor(b, s, bath)) {
        const Eigen::MatrixXcd drho = act(blk.superop, rho);
        CHECK(drho.diagonal().cwiseAbs().maxCoeff() < 1e-15);  // populations untouched
        CHECK(drho.cwiseAbs().maxCoeff() > 0.0);               // coherences decay
    }
}

TEST_CASE("directional dissipator: Heaviside selection and Lindblad reduction") {
    const RingSpec s = table_ring(1, M_PI / 2.0);
    const Eigenbasis b = diagonalize(build_hamiltonian(s, CouplingMatrix::Zero(1, 1)));
    const Eigen::MatrixXd sx = detail::sigma_x_eigenbasis(b, 1);

    const DissipatorBlock decay = directional_dissipator(sx, 1e-2, +1, b, "decay");
    Eigen::SparseMatrix<double> lower(2, 2);
    lower.insert(0, 1) = 1.0;
    const Superop ref = lindblad_block(lower, 1e-2, 2, "ref").superop;
    CHECK((Eigen::MatrixXcd(decay.superop) - Eigen::MatrixXcd(ref)).cwiseAbs().maxCoeff() <
          1e-18);

    // sigma = -1: pure pumping, excited state is stationary
    const DissipatorBlock pump = directional_dissipator(sx, 1e-2, -1, b, "pump");
    Eigen::MatrixXcd excited = Eigen::MatrixXcd::Zero(2, 2);
    excited(1, 1) = 1.0;
    CHECK(act(pump.superop, excited).cwiseAbs().maxCoeff() < 1e-18);
    Eigen::MatrixXcd ground = Eigen::MatrixXcd::Zero(2, 2);
    ground(0, 0) = 1.0;
    CHECK(act(pump.superop, ground)(1, 1).real() > 0.0);

    CHECK(directional_dissipator(sx, 0.0, +1, b, "zero").superop.norm() == 0.0);
    CHECK_THROWS_AS(
        directional_dissipator(Eigen::MatrixXd::Zero(2, 2), 1e-2, +1, b, "empty"),
        std::invalid_argument);
}

TEST_CASE("lindblad_block matches a dense brute-force construction") {
    const int d = 4;
    Eigen::SparseMatrix<double> jump(d, d);
    jump.insert(0, 2) = 0.8;
    jump.insert(1, 3) = -0.5;
    jump.insert(0, 3) = 0.1;
    const double gamma = 3e-3;
    const Superop blk = lindblad_block(jump, gamma, d, "j").superop;

    const Eigen::MatrixXcd rho = random_density(d, 21);
    const Eigen::MatrixXcd l = Eigen::MatrixXd(jump).cast<Complex>();
    const Eigen::MatrixXcd expect =
        gamma * (l * rho * l.adjoint() -
                 0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l));
    CHECK((act(blk, rho) - expect).cwiseAbs().maxCoeff() < 1e-15);
}
