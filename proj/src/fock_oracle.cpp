#include "kappaest/fock_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace kappaest {

namespace {

constexpr double kTailTol = 1e-12;

struct NumberBlock {
    int base = 0;  // smallest n1 in the block
    int size = 0;
};

NumberBlock block_for(int total_n, int dim) {
    const int lo = std::max(0, total_n - dim + 1);
    const int hi = std::min(total_n, dim - 1);
    return {lo, hi - lo + 1};
}

// Unitary of one total-photon-number block, exp(theta (a1 a2+ - a1+ a2))
// restricted to n1 + n2 = total_n. sign = -1 gives the inverse.
Eigen::MatrixXcd block_unitary(int total_n, int dim, double sign) {
    const auto blk = block_for(total_n, dim);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(blk.size, blk.size);
    const double theta = sign * std::numbers::pi / 4.0;
    for (int c = 0; c < blk.size; ++c) {
        const int n1 = blk.base + c;
        const int n2 = total_n - n1;
        if (c > 0) {
            // a1 a2+ : (n1, n2) -> (n1-1, n2+1)
            g(c - 1, c) += theta * std::sqrt(double(n1) * double(n2 + 1));
        }
        if (c + 1 < blk.size) {
            // -a1+ a2 : (n1, n2) -> (n1+1, n2-1)
            g(c + 1, c) -= theta * std::sqrt(double(n1 + 1) * double(n2));
        }
    }
    // g is anti-Hermitian; diagonalize i*g and exponentiate the spectrum.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Complex(0, 1) * g);
    const Eigen::VectorXd lambda = es.eigenvalues();
    Eigen::VectorXcd phases(blk.size);
    for (int i = 0; i < blk.size; ++i) {
        phases(i) = std::exp(Complex(0.0, -lambda(i)));
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

}  // namespace

int required_dim(double max_amplitude) {
    const double m = std::abs(max_amplitude);
    return std::max(2, int(std::ceil(m * m + 6.0 * m + 12.0)));
}

Eigen::VectorXcd coherent_fock(Complex alpha, FockCutoff cutoff) {
    if (cutoff.dim < 2) {
        throw std::invalid_argument("coherent_fock: dim must be >= 2");
    }
    Eigen::VectorXcd c(cutoff.dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < cutoff.dim; ++n) {
        c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    }
    const double kept = c.squaredNorm();
    if (1.0 - kept > kTailTol) {
        throw std::runtime_error(
            "coherent_fock: cutoff too small for amplitude (tail mass > 1e-12)");
    }
    return c / std::sqrt(kept);
}

Eigen::VectorXcd superposition_product_fock(
    std::span<const SuperpositionTerm> mode1_terms,
    std::span<const SuperpositionTerm> mode2_terms, FockCutoff cutoff) {
    const int d = cutoff.dim;
    Eigen::VectorXcd phi1 = Eigen::VectorXcd::Zero(d);
    Eigen::VectorXcd phi2 = Eigen::VectorXcd::Zero(d);
    for (const auto& [amp, coeff] : mode1_terms) {
        phi1 += coeff * coherent_fock(amp, cutoff);
    }
    for (const auto& [amp, coeff] : mode2_terms) {
        phi2 += coeff * coherent_fock(amp, cutoff);
    }
    Eigen::VectorXcd psi(d * d);
    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            psi(n1 * d + n2) = phi1(n1) * phi2(n2);
        }
    }
    return psi;
}

Eigen::MatrixXcd beam_splitter_unitary(FockCutoff cutoff) {
    const int d = cutoff.dim;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (int n = 0; n <= 2 * (d - 1); ++n) {
        const auto blk = block_for(n, d);
        const Eigen::MatrixXcd ub = block_unitary(n, d, +1.0);
        for (int r = 0; r < blk.size; ++r) {
            const int rn1 = blk.base + r;
            for (int c = 0; c < blk.size; ++c) {
                const int cn1 = blk.base + c;
                u(rn1 * d + (n - rn1), cn1 * d + (n - cn1)) = ub(r, c);
            }
        }
    }
    return u;
}

Eigen::VectorXcd apply_beam_splitter_fock(const Eigen::VectorXcd& psi,
                                          FockCutoff cutoff, bool inverse) {
    const int d = cutoff.dim;
    if (psi.size() != d * d) {
        throw std::invalid_argument("apply_beam_splitter_fock: size mismatch");
    }
    Eigen::VectorXcd out(d * d);
    for (int n = 0; n <= 2 * (d - 1); ++n) {
        const auto blk = block_for(n, d);
        const Eigen::MatrixXcd ub = block_unitary(n, d, inverse ? -1.0 : +1.0);
        Eigen::VectorXcd slice(blk.size);
        for (int c = 0; c < blk.size; ++c) {
            const int n1 = blk.base + c;
            slice(c) = psi(n1 * d + (n - n1));
        }
        slice = ub * slice;
        for (int c = 0; c < blk.size; ++c) {
            const int n1 = blk.base + c;
            out(n1 * d + (n - n1)) = slice(c);
        }
    }
    return out;
}

FockDensity density_from_vector(const Eigen::VectorXcd& psi,
                                FockCutoff cutoff) {
    FockDensity rho;
    rho.dim = cutoff.dim;
    rho.rho = psi * psi.adjoint();
    return rho;
}

FockDensity dyad_to_fock(const DyadMix& state, FockCutoff cutoff) {
    const int d = cutoff.dim;
    FockDensity out;
    out.dim = d;
    out.rho = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (const auto& t : state.terms) {
        const Eigen::VectorXcd ket = superposition_product_fock(
            std::vector<SuperpositionTerm>{{t.ket1, 1.0}},
            std::vector<SuperpositionTerm>{{t.ket2, 1.0}}, cutoff);
        const Eigen::VectorXcd bra = superposition_product_fock(
            std::vector<SuperpositionTerm>{{t.bra1, 1.0}},
            std::vector<SuperpositionTerm>{{t.bra2, 1.0}}, cutoff);
        out.rho.noalias() += t.weight * ket * bra.adjoint();
    }
    return out;
}

FockDensity integrate_master_equation(const FockDensity& rho0,
                                      double kappa_final, int steps,
                                      Exec exec) {
    if (steps < 1) {
        throw std::invalid_argument("integrate_master_equation: steps >= 1");
    }
    if (kappa_final < 0.0) {
        throw std::invalid_argument("integrate_master_equation: kappa >= 0");
    }
    const int d = rho0.dim;
    FockDensity out;
    out.dim = d;
    out.rho = rho0.rho;
    if (kappa_final == 0.0) return out;

    const double h = kappa_final / double(steps);
    const double trace_before = rho0.rho.trace().real();

    std::vector<double> root(static_cast<std::size_t>(d));
    for (int n = 0; n < d; ++n) root[std::size_t(n)] = std::sqrt(double(n + 1));

    // Slices below this relative size never grow (the slice evolution is a
    // contraction) and their trace is conserved either way, so skipping them
    // is exact far beyond the integration tolerance.
    const double skip_below = 1e-16 * rho0.rho.cwiseAbs().maxCoeff();

    // d rho / d kappa couples (n1, m1) only within a fixed (n2, m2) pair, so
    // each of the d^2 slices integrates independently and cache resident.
    const long slices = long(d) * long(d);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long s = 0; s < slices; ++s) {
        const int n2 = int(s / d);
        const int m2 = int(s % d);

        std::vector<Complex> cur(std::size_t(d) * d), k1(cur.size()),
            k2(cur.size()), k3(cur.size()), k4(cur.size()), tmp(cur.size());
        double slice_max = 0.0;
        for (int n1 = 0; n1 < d; ++n1) {
            for (int m1 = 0; m1 < d; ++m1) {
                const Complex v = out.rho(n1 * d + n2, m1 * d + m2);
                cur[std::size_t(n1) * d + m1] = v;
                slice_max = std::max(slice_max, std::abs(v));
            }
        }
        if (slice_max <= skip_below) continue;

        auto rhs = [&](const std::vector<Complex>& src,
                       std::vector<Complex>& dst) {
            for (int n1 = 0; n1 < d; ++n1) {
                const double decay = -0.5 * double(n1);
                const double gain = root[std::size_t(n1)];
                const std::size_t row = std::size_t(n1) * d;
                for (int m1 = 0; m1 < d; ++m1) {
                    Complex v = (decay - 0.5 * double(m1)) * src[row + m1];
                    if (n1 + 1 < d && m1 + 1 < d) {
                        v += gain * root[std::size_t(m1)] *
                             src[row + d + (m1 + 1)];
                    }
                    dst[row + m1] = v;
                }
            }
        };

        for (int step = 0; step < steps; ++step) {
            rhs(cur, k1);
            for (std::size_t i = 0; i < cur.size(); ++i)
                tmp[i] = cur[i] + 0.5 * h * k1[i];
            rhs(tmp, k2);
            for (std::size_t i = 0; i < cur.size(); ++i)
                tmp[i] = cur[i] + 0.5 * h * k2[i];
            rhs(tmp, k3);
            for (std::size_t i = 0; i < cur.size(); ++i)
                tmp[i] = cur[i] + h * k3[i];
            rhs(tmp, k4);
            for (std::size_t i = 0; i < cur.size(); ++i) {
                cur[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }

        for (int n1 = 0; n1 < d; ++n1) {
            for (int m1 = 0; m1 < d; ++m1) {
                out.rho(n1 * d + n2, m1 * d + m2) = cur[std::size_t(n1) * d + m1];
            }
        }
    }

    const double trace_after = out.rho.trace().real();
    if (std::abs(trace_after - trace_before) > 1e-6) {
        throw std::runtime_error(
            "integrate_master_equation: trace drift beyond 1e-6, reduce step");
    }
    return out;
}

namespace {

// Tr(rho (a1+)^p1 a1^q1 (a2+)^p2 a2^q2) by direct basis loops.
Complex ladder_expectation(const FockDensity& rho, int p1, int q1, int p2,
                           int q2) {
    const int d = rho.dim;
    Complex acc = 0.0;
    for (int n1 = q1; n1 < d; ++n1) {
        const int t1 = n1 - q1 + p1;
        if (t1 >= d) continue;
        double c1 = 1.0;
        for (int j = 0; j < q1; ++j) c1 *= double(n1 - j);
        for (int j = 0; j < p1; ++j) c1 *= double(n1 - q1 + 1 + j);
        c1 = std::sqrt(c1);
        for (int n2 = q2; n2 < d; ++n2) {
            const int t2 = n2 - q2 + p2;
            if (t2 >= d) continue;
            double c2 = 1.0;
            for (int j = 0; j < q2; ++j) c2 *= double(n2 - j);
            for (int j = 0; j < p2; ++j) c2 *= double(n2 - q2 + 1 + j);
            c2 = std::sqrt(c2);
            acc += c1 * c2 * rho.rho(n1 * d + n2, t1 * d + t2);
        }
    }
    return acc;
}

}  // namespace

FockMoments fock_moments(const FockDensity& rho) {
    const Complex a1 = ladder_expectation(rho, 0, 1, 0, 0);
    const Complex a2 = ladder_expectation(rho, 0, 0, 0, 1);
    const Complex a1sq = ladder_expectation(rho, 0, 2, 0, 0);
    const Complex a2sq = ladder_expectation(rho, 0, 0, 0, 2);
    const double n1 = ladder_expectation(rho, 1, 1, 0, 0).real();
    const double n2 = ladder_expectation(rho, 0, 0, 1, 1).real();
    const Complex a1a2 = ladder_expectation(rho, 0, 1, 0, 1);
    const Complex a1a2dag = ladder_expectation(rho, 0, 1, 1, 0);

    const double x1sq = 0.5 + n1 + a1sq.real();
    const double x2sq = 0.5 + n2 + a2sq.real();
    const double x1x2 = a1a2.real() + a1a2dag.real();
    const double p1sq = 0.5 + n1 - a1sq.real();
    const double p2sq = 0.5 + n2 - a2sq.real();
    const double p1p2 = a1a2dag.real() - a1a2.real();

    FockMoments m;
    m.mean_X = (a1 - a2).real();
    m.mean_P = (a1 + a2).imag();
    m.var_X = 0.5 * (x1sq - 2.0 * x1x2 + x2sq) - m.mean_X * m.mean_X;
    m.var_P = 0.5 * (p1sq + 2.0 * p1p2 + p2sq) - m.mean_P * m.mean_P;
    m.mean_n = n1 + n2;
    return m;
}

double fidelity_overlap(const FockDensity& a, const FockDensity& b) {
    const double cross =
        a.rho.cwiseProduct(b.rho.transpose()).sum().real();
    const double na = a.rho.cwiseProduct(a.rho.transpose()).sum().real();
    const double nb = b.rho.cwiseProduct(b.rho.transpose()).sum().real();
    return cross / std::sqrt(na * nb);
}

}  // namespace kappaest
