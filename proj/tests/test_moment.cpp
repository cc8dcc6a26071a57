#include <gtest/gtest.h>

#include "strata/hierarchy.hpp"
#include "strata/mech/elasticity.hpp"
#include "strata/mech/sym2.hpp"
#include "strata/moment.hpp"
#include "support.hpp"

using namespace strata;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MomentVector random_moments(std::size_t n, int d, test::Rng& rng) {
    MomentVector y(n, d);
    for (std::size_t a = 0; a < y.size(); ++a) y.values()[static_cast<Eigen::Index>(a)] = test::normal(rng);
    y.values()[0] = 1.0;
    return y;
}

}  // namespace

TEST(MomentVector, AtomicMatchesExplicitMonomials) {
    const std::vector<VectorXd> pts{(VectorXd(2) << 0.5, -1.5).finished(), (VectorXd(2) << 2.0, 0.25).finished()};
    const std::vector<double> w{0.3, 0.7};
    const auto y = MomentVector::atomic(2, 3, pts, w);
    const auto z = test::explicit_atomic_moments(2, 3, pts, w);
    EXPECT_LE((y.values() - z.values()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_DOUBLE_EQ(y[0], 1.0);
    EXPECT_EQ(y.truncate(1).size(), lambda_set(2, 2).size());
    EXPECT_EQ(y.truncate(1).values(), y.values().head(6));
}

TEST(ShiftVector, Examples) {
    test::Rng rng(3);
    const auto y = random_moments(3, 2, rng);
    const auto one = Polynomial::constant(3, 1.0);
    EXPECT_EQ(shift_vector(one, y), y.values());

    VectorXd x(3);
    x << 2.0, 0.0, 0.0;
    const auto dirac = MomentVector::dirac(3, 2, x);
    const auto x1 = Polynomial::variable(3, 0);
    const VectorXd s = shift_vector(x1, dirac);
    ASSERT_EQ(static_cast<std::size_t>(s.size()), lambda_set(3, 2).size());
    for (Eigen::Index a = 0; a < s.size(); ++a) EXPECT_DOUBLE_EQ(s[a], 2.0 * dirac[static_cast<std::size_t>(a)]);

    const ExponentVector beta{0, 1, 1};
    const VectorXd t = shift_vector(Polynomial::monomial(beta, -3.0), y);
    for (std::size_t a = 0; a < static_cast<std::size_t>(t.size()); ++a)
        EXPECT_DOUBLE_EQ(t[static_cast<Eigen::Index>(a)], -3.0 * y.at(y.basis()[a] + beta));

    EXPECT_THROW(shift_vector(pow(x1, 5), y), std::out_of_range);
}

TEST(MomentMatrix, Examples) {
    VectorXd x(2);
    x << 1.5, -0.5;
    const auto dirac = MomentVector::dirac(2, 2, x);
    const MatrixXd M = moment_matrix(dirac, 2);
    VectorXd m(static_cast<Eigen::Index>(lambda_set(2, 2).size()));
    for (std::size_t a = 0; a < lambda_set(2, 2).size(); ++a)
        m[static_cast<Eigen::Index>(a)] = detail::monomial_value(lambda_set(2, 2)[a], x);
    EXPECT_LE((M - m * m.transpose()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_EQ(numerical_rank(M, 1e-9), 1);

    VectorXd x2(2);
    x2 << -1.0, 2.0;
    const auto two = test::explicit_atomic_moments(2, 2, {x, x2}, {0.5, 0.5});
    EXPECT_EQ(numerical_rank(moment_matrix(two, 2), 1e-9), 2);

    MomentVector e(2, 1);
    e.values()[0] = 1.0;
    const MatrixXd E = moment_matrix(e, 1);
    EXPECT_EQ(E(0, 0), 1.0);
    EXPECT_EQ(E.cwiseAbs().sum(), 1.0);

    EXPECT_THROW(moment_matrix(e, 2), std::invalid_argument);
    test::Rng rng(5);
    const MatrixXd R = moment_matrix(random_moments(3, 2, rng), 2);
    EXPECT_EQ(R, R.transpose());
}

TEST(LocalizingMatrix, Examples) {
    test::Rng rng(9);
    const auto y = random_moments(2, 3, rng);
    EXPECT_EQ(localizing_matrix(Polynomial::constant(2, 1.0), y, 2), moment_matrix(y, 2));

    const auto v = Polynomial::variables(2);
    VectorXd x(2);
    x << 0.6, 0.8;
    const Polynomial circle = v[0] * v[0] + v[1] * v[1] - 1.0;
    const auto dirac = MomentVector::dirac(2, 3, x);
    for (int k = 0; k <= 2; ++k) EXPECT_LE(localizing_matrix(circle, dirac, k).cwiseAbs().maxCoeff(), 1e-14);

    VectorXd x0(2);
    x0 << 0.5, 0.5;
    const Polynomial ball = 4.0 - (pow(v[0] - x0[0], 2) + pow(v[1] - x0[1], 2));
    const MatrixXd L = localizing_matrix(ball, dirac, 2);
    const MatrixXd M = moment_matrix(dirac, 2);
    EXPECT_LE((L - test::eval(ball, x) * M).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<MatrixXd>(L).eigenvalues().minCoeff(), -1e-12);

    EXPECT_THROW(localizing_matrix(ball, dirac, 3), std::out_of_range);
}

TEST(AssembleRelaxation, SmallestInstance) {
    const auto x = Polynomial::variable(1, 0);
    const auto rp = assemble_relaxation(x, {}, 1);
    ASSERT_EQ(rp.blocks.size(), 1u);
    EXPECT_EQ(rp.blocks[0].side, 2u);
    EXPECT_EQ(rp.objective, (VectorXd(3) << 0, 1, 0).finished());
    const VectorXd y = (VectorXd(3) << 1, 0.3, 0.7).finished();
    const MatrixXd want = (MatrixXd(2, 2) << 1, 0.3, 0.3, 0.7).finished();
    EXPECT_EQ(rp.blocks[0].evaluate(y), want);
}

TEST(AssembleRelaxation, OrthotropicBlockSides) {
    const auto p = mech::build_distance_problem_sym2(mech::Sym2Tensor::from_components(-7, 5, 5, -2, -4, 4));
    VectorXd b(6);
    b << 1, 1, -2, 0, 0, 0;
    const auto cons = add_ball_constraint(p.f, p.constraints, 300, b);
    const auto rp = assemble_relaxation(p.f, cons, 2);
    EXPECT_EQ(rp.d0, 2);
    ASSERT_EQ(rp.blocks.size(), 1u + 2u * 10u + 1u);
    EXPECT_EQ(rp.blocks[0].side, 28u);
    for (std::size_t i = 1; i <= 20; ++i) EXPECT_EQ(rp.blocks[i].side, 1u);
    EXPECT_EQ(rp.blocks.back().side, 7u);
    for (int vi : std::vector<int>(rp.v.begin(), rp.v.end() - 1)) EXPECT_EQ(vi, 2);
}

TEST(AssembleRelaxation, CubicElasticityBlockSides) {
    mech::Voigt6 E;
    E << 243, 136, 135, 22, 52, -17, 136, 239, 137, -28, 11, 16, 135, 137, 233, 29, -49, 3, 22, -28, 29, 133, -10, -4,
        52, 11, -49, -10, 119, -2, -17, 16, 3, -4, -2, 130;
    const auto p = mech::build_distance_problem_ela(mech::ElasticityTensor::from_voigt(E));
    const auto rp = assemble_relaxation(p.f, add_ball_constraint(p.f, p.constraints, 58000), 1);
    EXPECT_EQ(rp.blocks[0].side, 10u);
    for (std::size_t i = 1; i < rp.blocks.size(); ++i) EXPECT_EQ(rp.blocks[i].side, 1u);
    EXPECT_EQ(rp.blocks.size(), 1u + 2u * 5u + 1u);
}

TEST(AssembleRelaxation, BlocksMatchLocalizingMatrices) {
    test::Rng rng(21);
    const auto x = Polynomial::variables(3);
    const Polynomial f = pow(x[0], 4) + x[0] * x[1] * x[2] - x[2];
    const std::vector<Constraint> cons{Constraint::ge(1.0 - x[0] * x[0] - x[1] * x[1] - x[2] * x[2]),
                                       Constraint::eq(x[0] * x[1] * x[1] - x[2]), Constraint::ge(x[1])};
    for (int d = 2; d <= 3; ++d) {
        const auto rp = assemble_relaxation(f, cons, d);
        const auto y = random_moments(3, d, rng);
        for (const auto& blk : rp.blocks) {
            const MatrixXd want = localizing_matrix(blk.g, y, blk.order);
            EXPECT_LE((blk.evaluate(y.values()) - want).cwiseAbs().maxCoeff(), 1e-12);
            for (std::size_t a = 0; a < blk.coeff.size(); ++a) {
                if (blk.has(a)) {
                    EXPECT_EQ(blk.coeff[a], blk.coeff[a].transpose());
                }
            }
            EXPECT_EQ(blk.side, binomial(3 + static_cast<std::size_t>(blk.order), 3));
        }
        EXPECT_NEAR(rp.objective.dot(y.values()), y.pair(f), 1e-12);
    }
}

TEST(AssembleRelaxation, Nesting) {
    test::Rng rng(22);
    const auto x = Polynomial::variables(2);
    const Polynomial f = pow(x[0], 4) + x[1] * x[1];
    const std::vector<Constraint> cons{Constraint::ge(2.0 - x[0] * x[0] - x[1] * x[1]), Constraint::eq(pow(x[0], 3) - x[1])};
    const auto lo = assemble_relaxation(f, cons, 2), hi = assemble_relaxation(f, cons, 3);
    const auto y = random_moments(2, 3, rng);
    const auto yt = y.truncate(2);
    ASSERT_EQ(lo.blocks.size(), hi.blocks.size());
    for (std::size_t b = 0; b < lo.blocks.size(); ++b) {
        const MatrixXd big = hi.blocks[b].evaluate(y.values());
        const MatrixXd small = lo.blocks[b].evaluate(yt.values());
        const auto s = static_cast<Eigen::Index>(lo.blocks[b].side);
        EXPECT_LE((big.topLeftCorner(s, s) - small).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(AssembleRelaxation, Errors) {
    const auto x = Polynomial::variables(2);
    EXPECT_THROW(assemble_relaxation(pow(x[0], 4), {}, 1), std::invalid_argument);
    EXPECT_THROW(assemble_relaxation(x[0], {Constraint::ge(Polynomial::variable(3, 0))}, 1), std::invalid_argument);
}
