// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "lics/errors.hpp"
#include "lics/scenarios.hpp"

namespace lics {

namespace {

using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

constexpr double kMaxEigenvectorCondition = 1e6;

Mat3 coefficient_matrix(const InstantCouplings& c, const SystemParams& p) {
    constexpr cplx I{0.0, 1.0};
    const cplx cross = c.g_nf * cplx{1.0, p.q_nf};
    Mat3 m;
    m << -cplx{p.eta_m, p.delta_mn - p.delta_nf}, -I * c.g_mn, 0.0,
        -I * c.g_mn, -cplx{p.eta_n + c.g_nn, p.delta_nf + p.q_nn * c.g_nn}, -cross,
        0.0, -cross, -cplx{p.eta_f + c.g_ff, p.q_ff * c.g_ff};
    return m;
}

void check_inputs(const InstantCouplings& c, const SystemParams& p, const AmplitudeVector& init,
                  double T) {
    validate(p);
    for (double g : {c.g_mn, c.g_nn, c.g_ff, c.g_nf}) {
        if (!std::isfinite(g) || g < 0.0)
            throw InvalidArgument("closed form: couplings must be finite and non-negative");
    }
    for (const cplx& a : init) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw InvalidArgument("closed form: initial amplitude is not finite");
    }
    if (!std::isfinite(T)) throw InvalidArgument("closed form: time is not finite");
}

Vec3 to_vec(const AmplitudeVector& a) { return Vec3(a[0], a[1], a[2]); }
AmplitudeVector to_array(const Vec3& v) { return {v(0), v(1), v(2)}; }

// (e^z - 1) / z without cancellation near z = 0.
cplx phi1(cplx z) {
    if (std::abs(z) < 0.1) {
        cplx term = 1.0, sum = 1.0;
        for (int k = 2; k < 20; ++k) {
            term *= z / static_cast<double>(k);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

// Divided difference of x -> exp(x t) at a, b.
cplx divided_difference(cplx a, cplx b, double t) {
    return t * std::exp(a * t) * phi1((b - a) * t);
}

// Second divided difference of x -> exp(x t) at three clustered points, by the
// series  exp(mu t) * sum_k t^k/k! h_{k-2}(d1, d2, d3)  with d_i = x_i - mu and
// h the complete homogeneous symmetric polynomials.
cplx clustered_divided_difference(const std::array<cplx, 3>& x, double t) {
    const cplx mu = (x[0] + x[1] + x[2]) / 3.0;
    const cplx d1 = x[0] - mu, d2 = x[1] - mu, d3 = x[2] - mu;
    cplx h1 = 1.0;    // h_j(d1)
    cplx h12 = 1.0;   // h_j(d1, d2)
    cplx h123 = 1.0;  // h_j(d1, d2, d3)
    cplx sum = 0.0;
    double coeff = t * t / 2.0;  // t^k / k! at k = 2
    for (int j = 0; j < 40; ++j) {
        if (j > 0) {
            h1 = h1 * d1;
            h12 = h1 + d2 * h12;
            h123 = h12 + d3 * h123;
        }
        sum += coeff * h123;
        coeff *= t / static_cast<double>(j + 3);
    }
    return std::exp(mu * t) * sum;
}

Mat3 putzer_exponential(const Mat3& m, std::array<cplx, 3> lambda, double t) {
    // Put the widest-separated pair at the ends so the outer difference quotient is stable.
    double best = -1.0;
    std::array<int, 3> order{0, 1, 2};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const double gap = std::abs(lambda[i] - lambda[j]);
            if (gap > best) {
                best = gap;
                order = {i, 3 - i - j, j};
            }
        }
    }
    lambda = {lambda[order[0]], lambda[order[1]], lambda[order[2]]};

    const cplx r1 = std::exp(lambda[0] * t);
    const cplx r2 = divided_difference(lambda[0], lambda[1], t);
    cplx r3;
    if (best * std::abs(t) < 0.5) {
        r3 = clustered_divided_difference(lambda, t);
    } else {
        r3 = (divided_difference(lambda[1], lambda[2], t) -
              divided_difference(lambda[0], lambda[1], t)) /
             (lambda[2] - lambda[0]);
    }

    const Mat3 id = Mat3::Identity();
    const Mat3 p1 = m - lambda[0] * id;
    const Mat3 p2 = p1 * (m - lambda[1] * id);
    return r1 * id + r2 * p1 + r3 * p2;
}

Eigen::ComplexEigenSolver<Mat3> decompose(const Mat3& m) {
    Eigen::ComplexEigenSolver<Mat3> solver(m, true);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("closed form: eigendecomposition failed", 0.0);
    return solver;
}

}  // namespace

AmplitudeVector constant_coefficient_solution(const InstantCouplings& c,
                                              const SystemParams& params,
                                              const AmplitudeVector& init, double T) {
    check_inputs(c, params, init, T);
    if (T == 0.0) return init;

    const Mat3 m = coefficient_matrix(c, params);
    const auto solver = decompose(m);
    const Mat3& v = solver.eigenvectors();

    const Eigen::JacobiSVD<Mat3> svd(v);
    const auto& sv = svd.singularValues();
    const double condition = sv(0) / sv(2);
    if (!(condition < kMaxEigenvectorCondition)) {
        const auto& ev = solver.eigenvalues();
        return to_array(putzer_exponential(m, {ev(0), ev(1), ev(2)}, T) * to_vec(init));
    }

    Vec3 coeffs = v.partialPivLu().solve(to_vec(init));
    for (int i = 0; i < 3; ++i) coeffs(i) *= std::exp(solver.eigenvalues()(i) * T);
    const Vec3 out = v * coeffs;
    if (!out.allFinite()) throw NumericalFailure("closed form: non-finite solution", T);
    return to_array(out);
}

AmplitudeVector constant_coefficient_solution_putzer(const InstantCouplings& c,
                                                     const SystemParams& params,
                                                     const AmplitudeVector& init, double T) {
    check_inputs(c, params, init, T);
    if (T == 0.0) return init;
    const Mat3 m = coefficient_matrix(c, params);
    const auto ev = decompose(m).eigenvalues();
    return to_array(putzer_exponential(m, {ev(0), ev(1), ev(2)}, T) * to_vec(init));
}

}  // namespace lics
