#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include <cmath>

#include "gramcov/gradients.hpp"
#include "gramcov/rng.hpp"

using namespace gramcov;
using gramcov::testing::mat2;

TEST_CASE("l_c gradient closed form") {
    const Matrix K = mat2(1, 2, 3, 4);
    Matrix expected(2, 2);
    expected << 112, 56, 224, 168;
    CHECK(detail::grad_l_c(K).isApprox(expected));

    // stationary at orthonormal columns
    CHECK(detail::grad_l_c(Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("invariance gradient closed form") {
    Rng rng(1);
    const Matrix K = gen_gaussian(3, 5, rng);
    const Matrix Kp = gen_gaussian(3, 5, rng);
    const GradPair g = detail::grad_invariance_mse(K, Kp);
    const Matrix expected = 2.0 * (K - Kp) / static_cast<double>(K.size());
    CHECK(g.dK.isApprox(expected));
    CHECK(g.dKp->isApprox(-expected));
}

TEST_CASE("finite differences recover a quadratic exactly") {
    // L = sum of squares; central differences are exact for quadratics
    const LossFn fn = [](const Matrix& A, const Matrix& B) {
        return A.squaredNorm() + B.squaredNorm();
    };
    Rng rng(2);
    const Matrix K = gen_gaussian(3, 4, rng);
    const Matrix Kp = gen_gaussian(3, 4, rng);
    const GradPair fd = finite_diff_grad(fn, K, Kp, 1e-6, true);
    CHECK((fd.dK - 2.0 * K).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((*fd.dKp - 2.0 * Kp).cwiseAbs().maxCoeff() <= 1e-8);

    const LossFn constant = [](const Matrix&, const Matrix&) { return 3.5; };
    CHECK(finite_diff_grad(constant, K, Kp, 1e-6, true).dK.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("l_c analytic matches the oracle at the worked example") {
    const Matrix K = mat2(1, 2, 3, 4);
    const LossFn fn = [](const Matrix& A, const Matrix&) { return l_c(A); };
    const GradPair fd = finite_diff_grad(fn, K, K, 1e-6, false);
    const Matrix analytic = detail::grad_l_c(K);
    for (Index c = 0; c < 2; ++c) {
        for (Index r = 0; r < 2; ++r) {
            const double rel = std::abs(analytic(r, c) - fd.dK(r, c)) /
                               std::max(1.0, std::abs(analytic(r, c)));
            CHECK(rel <= 1e-6);
        }
    }
}

TEST_CASE("grad_check passes for every loss id") {
    Rng rng(3);
    LossParams params;
    params.weights = {1.0, 1.0, 1.0};
    for (const auto& id : loss_ids()) {
        for (int seed = 0; seed < 3; ++seed) {
            const Matrix K = gen_gaussian(5, 8, rng);
            const Matrix Kp = gen_gaussian(5, 8, rng);
            for (double tau : {0.05, 1.0}) {
                params.tau = tau;
                const GradCheckReport report = grad_check(id, K, Kp, params, 1e-5);
                INFO(id, " tau=", tau, " max_rel=", report.max_rel_err);
                CHECK(report.pass);
                if (!loss_info(id).uses_tau) break;
            }
        }
    }
}

TEST_CASE("two-branch negatives gradients check out") {
    Rng rng(4);
    LossParams params;
    params.tau = 0.2;
    params.two_branch_negatives = true;
    for (const char* id : {"simclr", "simclr-abs", "simclr-sq", "dcl"}) {
        const Matrix K = gen_gaussian(4, 6, rng);
        const Matrix Kp = gen_gaussian(4, 6, rng);
        const GradCheckReport report = grad_check(id, K, Kp, params, 1e-5);
        INFO(id, " max_rel=", report.max_rel_err);
        CHECK(report.pass);
    }
}

TEST_CASE("a corrupted gradient fails the harness") {
    Rng rng(5);
    Matrix K = gen_gaussian(4, 6, rng);
    Matrix Kp = gen_gaussian(4, 6, rng);
    K /= K.norm();
    Kp /= Kp.norm();
    LossParams params;
    GradPair analytic = analytic_grad("vicreg", K, Kp, params);
    analytic.dK(1, 2) *= 1.10;  // one entry off by 10%
    const LossFn fn = [&](const Matrix& A, const Matrix& B) {
        return evaluate("vicreg", A, B, params).value;
    };
    const GradPair fd = finite_diff_grad(fn, K, Kp, 1e-6, true);
    const double rel = std::abs(analytic.dK(1, 2) - fd.dK(1, 2)) /
                       std::max({std::abs(analytic.dK(1, 2)), std::abs(fd.dK(1, 2)), 1e-8});
    CHECK(rel > 1e-5);
}

TEST_CASE("unknown loss id") {
    LossParams params;
    CHECK_THROWS_AS(analytic_grad("nonsense", Matrix::Ones(2, 2), Matrix::Ones(2, 2), params),
                    UnknownLoss);
}

TEST_CASE("two-branch symmetry of the vicreg family") {
    Rng rng(6);
    LossParams params;
    params.weights = {2.0, 1.0, 0.5};
    params.tau = 0.3;
    for (const char* id : {"vicreg", "vicreg-exp", "vicreg-ctr", "vicreg-ctr-rewrite"}) {
        const Matrix K = gen_gaussian(4, 7, rng);
        const Matrix Kp = gen_gaussian(4, 7, rng);
        const GradPair forward = analytic_grad(id, K, Kp, params);
        const GradPair swapped = analytic_grad(id, Kp, K, params);
        CHECK(forward.dK.isApprox(*swapped.dKp, 1e-12));
        CHECK(forward.dKp->isApprox(swapped.dK, 1e-12));
    }
}

TEST_CASE("simclr-abs gradient is sign-consistent") {
    Rng rng(7);
    const Matrix K = l2_normalize_embeddings(gen_gaussian(4, 6, rng));
    const Matrix Kp = l2_normalize_embeddings(gen_gaussian(4, 6, rng));
    LossParams params;
    params.tau = 0.25;
    const GradPair base = analytic_grad("simclr-abs", K, Kp, params);
    for (Index col = 0; col < K.cols(); ++col) {
        Matrix flipped = K;
        flipped.col(col) = -flipped.col(col);
        const GradPair g = analytic_grad("simclr-abs", flipped, Kp, params);
        // flipping a column flips exactly that gradient block
        CHECK((g.dK.col(col) + base.dK.col(col)).cwiseAbs().maxCoeff() == 0.0);
        for (Index other = 0; other < K.cols(); ++other) {
            if (other == col) continue;
            CHECK((g.dK.col(other) - base.dK.col(other)).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("gradients at stationary constructions vanish") {
    LossParams params;
    // orthonormal columns make l_c-style repulsion stationary
    const Matrix I = Matrix::Identity(3, 3);
    CHECK(detail::grad_l_c(I).cwiseAbs().maxCoeff() == 0.0);
    // identical branches zero the invariance gradient
    const GradPair g = detail::grad_invariance_mse(I, I);
    CHECK(g.dK.cwiseAbs().maxCoeff() == 0.0);
}
