#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "catq/gates.hpp"

using namespace catq;
using Catch::Matchers::WithinAbs;

namespace {
const double kZeta3 = std::sqrt(3.0);
const DeformationSpec kIdent = DeformationSpec::identity();
}

TEST_CASE("rotation params carry theta = 2 zeta beta t") {
    const RotationParams p(0.25, 2.0, kZeta3);
    CHECK_THAT(p.theta(), WithinAbs(2.0 * kZeta3 * 0.25 * 2.0, 1e-15));
    const RotationParams q = RotationParams::from_theta(M_PI / 4.0, kZeta3);
    CHECK_THAT(q.theta(), WithinAbs(M_PI / 4.0, 1e-15));
    CHECK_THROWS_AS(RotationParams::from_theta(1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(RotationParams(1.0, -1.0, kZeta3), ParameterError);
}

TEST_CASE("zero drive gives the identity for both propagators") {
    const FockSpace space(32);
    const RotationParams p(0.0, 1.0, kZeta3);
    const Matrix eye = Matrix::Identity(space.dimension(), space.dimension());
    CHECK((rotation_split(p, kIdent, space) - eye).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((rotation_exact(p, kIdent, space) - eye).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact propagator is unitary") {
    const FockSpace space(64);
    for (const double theta : {0.1, M_PI / 4.0, 1.5}) {
        const Matrix u = rotation_exact(RotationParams::from_theta(theta, kZeta3), kIdent, space);
        const Matrix defect = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
        CHECK(defect.cwiseAbs().maxCoeff() < 1e-10);
    }
    const Matrix u = rotation_exact(RotationParams::from_theta(M_PI / 4.0, kZeta3),
                                    DeformationSpec::laguerre(0.1), space);
    CHECK((u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("exact undeformed drive displaces coherent states") {
    // exp(-i beta t (a + a^dag)) is a displacement by -i beta t: the position
    // quadrature expectation stays 2 zeta, the momentum one moves to -2 beta t.
    const FockSpace space(64);
    const double bt = 0.3;
    const Matrix u = rotation_exact(RotationParams(bt, 1.0, kZeta3), kIdent, space);
    const FockVector cat = coherent_coefficients(kZeta3, kIdent, space);
    const Vector moved = u * cat.amplitudes();

    const LadderOperators ops = ladder_matrices(space);
    const Matrix x_op = ops.annihilation + ops.creation;
    const Matrix p_op = Complex(0.0, 1.0) * (ops.creation - ops.annihilation);
    const Complex x_exp = moved.dot(x_op * moved);
    const Complex p_exp = moved.dot(p_op * moved);
    CHECK_THAT(x_exp.real(), WithinAbs(2.0 * kZeta3, 1e-8));
    CHECK_THAT(p_exp.real(), WithinAbs(-2.0 * bt, 1e-8));
}

TEST_CASE("split propagator norm defect is small on the logical states") {
    const FockSpace space(64);
    const LogicalBasis basis = build_logical_basis(kZeta3, kIdent, space);
    const Matrix u = rotation_split(RotationParams::from_theta(M_PI / 4.0, kZeta3), kIdent, space);
    const double norm0 = (u * basis.ket0().amplitudes()).norm();
    const double norm1 = (u * basis.ket1().amplitudes()).norm();
    // not exactly unitary: the defect is real but modest at theta = pi/4
    const double c = std::max(std::abs(norm0 - 1.0), std::abs(norm1 - 1.0));
    CHECK(c > 1e-6);
    CHECK(c < 0.05);
}

TEST_CASE("split error shrinks four-fold when beta t is halved") {
    const FockSpace space(64);
    const LogicalBasis basis = build_logical_basis(kZeta3, kIdent, space);
    const auto residual = [&](double bt) {
        const RotationParams p(bt, 1.0, kZeta3);
        const Matrix us = rotation_split(p, kIdent, space);
        const Matrix ue = rotation_exact(p, kIdent, space);
        return ((us - ue) * basis.ket0().amplitudes()).norm();
    };
    const double r1 = residual(0.02);
    const double r2 = residual(0.01);
    CHECK(r1 > 0.0);
    const double ratio = r1 / r2;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("logical action of the identity is the identity") {
    const FockSpace space(64);
    const LogicalBasis basis = build_logical_basis(kZeta3, kIdent, space);
    const Matrix eye = Matrix::Identity(space.dimension(), space.dimension());
    const LogicalAction action = logical_action(eye, basis);
    CHECK_THAT(std::abs(action.matrix(0, 0)), WithinAbs(1.0, 1e-12));
    CHECK_THAT(std::abs(action.matrix(1, 1)), WithinAbs(1.0, 1e-12));
    CHECK(std::abs(action.matrix(0, 1)) < 1e-12);
    CHECK(std::abs(action.matrix(1, 0)) < 1e-12);
    CHECK_THAT(action.leakage, WithinAbs(0.0, 1e-12));
}

TEST_CASE("quarter rotation approximates cos I - i sin sigma_x") {
    const FockSpace space(64);
    const LogicalBasis basis = build_logical_basis(kZeta3, kIdent, space);
    const double theta = M_PI / 4.0;
    const Matrix u = rotation_exact(RotationParams::from_theta(theta, kZeta3), kIdent, space);
    const LogicalAction action = logical_action(u, basis);

    Eigen::Matrix2cd target;
    target << std::cos(theta), Complex(0.0, -std::sin(theta)),
        Complex(0.0, -std::sin(theta)), std::cos(theta);
    CHECK((action.matrix - target).cwiseAbs().maxCoeff() < 0.05);
    CHECK(action.leakage < 0.1);
    CHECK(action.leakage > 0.0);
    // frozen reference point: leakage measured at these parameters
    CHECK_THAT(action.leakage, WithinAbs(0.0501043432, 1e-4));
    // a unitary cannot put more weight in the logical block than the state had
    for (int col = 0; col < 2; ++col)
        CHECK(action.matrix.col(col).norm() <= 1.0 + 1e-10);
}

TEST_CASE("logical action at -theta is the adjoint") {
    const FockSpace space(64);
    const LogicalBasis basis = build_logical_basis(kZeta3, kIdent, space);
    const double theta = M_PI / 4.0;
    const LogicalAction fwd =
        logical_action(rotation_exact(RotationParams::from_theta(theta, kZeta3), kIdent, space), basis);
    const LogicalAction bwd =
        logical_action(rotation_exact(RotationParams::from_theta(-theta, kZeta3), kIdent, space), basis);
    CHECK((bwd.matrix - fwd.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("logical action leaves the identity linearly in theta") {
    const FockSpace space(64);
    const LogicalBasis basis = build_logical_basis(kZeta3, kIdent, space);
    const auto departure = [&](double theta) {
        const Matrix u = rotation_exact(RotationParams::from_theta(theta, kZeta3), kIdent, space);
        const Eigen::Matrix2cd m = logical_action(u, basis).matrix;
        return (m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    };
    const double ratio = departure(0.02) / departure(0.01);
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
}

TEST_CASE("cps with chi_t = 0 is the identity") {
    const FockSpace space(16);
    const LogicalBasis basis = build_logical_basis(1.0, kIdent, space);
    const FockVector in = tensor(basis.ket0(), basis.ket1());
    const FockVector out = cps_apply(in, CpsParams{0.0});
    CHECK((out.amplitudes() - in.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cps phase structure at chi_t = pi") {
    const FockSpace space(64);
    for (const DeformationSpec& spec : {kIdent, DeformationSpec::laguerre(0.14)}) {
        const LogicalBasis basis = build_logical_basis(kZeta3, spec, space);
        const CpsTruthTable table = cps_truth_table(basis, CpsParams{M_PI});
        CHECK_THAT(std::abs(table.phases[0] - Complex(1.0)), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(table.phases[1] - Complex(1.0)), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(table.phases[2] - Complex(1.0)), WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(table.phases[3] - Complex(-1.0)), WithinAbs(0.0, 1e-12));
        CHECK(table.max_residual < 1e-12);
    }
}

TEST_CASE("cps flips the sign only of the odd-odd component") {
    const FockSpace space(32);
    const LogicalBasis basis = build_logical_basis(kZeta3, kIdent, space);
    const FockVector in = tensor(basis.ket1(), basis.ket1());
    const FockVector out = cps_apply(in, CpsParams{M_PI});
    CHECK((out.amplitudes() + in.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cps rejects single-mode input") {
    const FockSpace space(16);
    const LogicalBasis basis = build_logical_basis(1.0, kIdent, space);
    CHECK_THROWS_AS(cps_apply(basis.ket0(), CpsParams{M_PI}), ParameterError);
}
