#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "panicsim/correlated_noise.hpp"
#include "panicsim/cross_section.hpp"
#include "panicsim/errors.hpp"
#include "panicsim/rolling_pca.hpp"

using namespace panicsim;

namespace {

ReturnsPanel gaussian_panel(std::size_t t, std::size_t n, double rho, std::uint64_t seed) {
    const EquicorrFactor f(n, rho);
    const auto z = oracle::normals(t * n, seed);
    Matrix v(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < t; ++i) {
        const auto x = f.sample(std::span<const double>(z.data() + i * n, n));
        for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x[k];
    }
    return ReturnsPanel::with_step_labels(std::move(v));
}

oracle::Dense to_dense(const Eigen::MatrixXd& m) {
    oracle::Dense d(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return d;
}

}  // namespace

TEST_CASE("vol transforms") {
    Matrix v(2, 2);
    v << -0.02, 0.03, -0.05, 0.01;
    const auto p = ReturnsPanel::with_step_labels(v);
    CHECK(vol_transform(p, VolTransform::Returns).values == p.values);
    const auto a = vol_transform(p, VolTransform::AbsReturns);
    CHECK(a.values(0, 0) == 0.02);
    CHECK(a.values(0, 1) == 0.03);
    const auto d = vol_transform(p, VolTransform::DiffAbsReturns);
    CHECK(d.n_times() == 1);
    CHECK(d.values(0, 0) == doctest::Approx(0.03));
    CHECK(d.values(0, 1) == doctest::Approx(-0.02));
    CHECK(d.dates == std::vector<std::string>{"1"});
    Matrix one(1, 2);
    one << 0.1, 0.2;
    CHECK_THROWS_AS(vol_transform(ReturnsPanel::with_step_labels(one), VolTransform::DiffAbsReturns), DomainError);
}

TEST_CASE("window covariance") {
    SUBCASE("identical columns give an equal-entry rank-1 matrix") {
        Matrix w(4, 2);
        w << 1, 1, 2, 2, -1, -1, 0.5, 0.5;
        const auto c = window_covariance(w);
        CHECK(c(0, 0) == doctest::Approx(c(0, 1)));
        CHECK(c(1, 1) == doctest::Approx(c(0, 1)));
        CHECK(*first_share(c) == doctest::Approx(1.0));
    }
    SUBCASE("independent columns") {
        const auto p = gaussian_panel(10000, 4, 0.0, 3);
        const auto c = window_covariance(p.values);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK(std::abs(c(i, j)) < 0.05);
        CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("diagonal matches the population dispersion squared") {
        const auto p = gaussian_panel(300, 3, 0.4, 8);
        const auto c = window_covariance(p.values);
        for (Eigen::Index k = 0; k < 3; ++k) {
            std::vector<double> col;
            for (Eigen::Index t = 0; t < 300; ++t) col.push_back(p.values(t, k));
            const double d = cross_moments(col).dispersion;
            CHECK(c(k, k) == doctest::Approx(d * d).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(window_covariance(Matrix::Zero(1, 3)), DomainError);
}

TEST_CASE("first share") {
    for (int n : {1, 3, 10}) CHECK(*first_share(Eigen::MatrixXd::Identity(n, n)) == doctest::Approx(1.0 / n).epsilon(1e-14));
    Eigen::MatrixXd eq = Eigen::MatrixXd::Constant(10, 10, 0.8);
    eq.diagonal().setOnes();
    CHECK(*first_share(eq) == doctest::Approx(0.82).epsilon(1e-12));
    const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(5, -1.0, 2.0);
    CHECK(*first_share(u * u.transpose()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(first_share(Eigen::MatrixXd::Zero(3, 3)).has_value());

    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(first_share(asym), DomainError);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(first_share(indefinite), DomainError);
    Eigen::MatrixXd jitter = Eigen::MatrixXd::Zero(2, 2);
    jitter(0, 0) = 1.0;
    jitter(1, 1) = -1e-12;
    CHECK(*first_share(jitter) == doctest::Approx(1.0));
}

TEST_CASE("eigenvalues agree with a Jacobi oracle for small matrices") {
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto p = gaussian_panel(40, n, 0.3, seed * 13 + n);
            const Eigen::MatrixXd c = window_covariance(p.values);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
            const auto ev = oracle::jacobi_eigenvalues(to_dense(c));
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(es.eigenvalues()(static_cast<Eigen::Index>(i)) - ev[i]) < 1e-8);
            double trace = 0.0;
            for (double e : ev) trace += e;
            CHECK(*first_share(c) == doctest::Approx(ev.back() / trace).epsilon(1e-8));
        }
    }
}

TEST_CASE("rolling first-PC share") {
    SUBCASE("uncorrelated panel stays near 1/n") {
        const auto p = gaussian_panel(600, 10, 0.0, 42);
        const auto s = rolling_first_pc_share(p, {100, VolTransform::Returns, false});
        CHECK(s.share1.size() == 501);
        CHECK(s.times.front() == 99);
        CHECK(s.times.back() == 599);
        for (double v : s.share1) {
            CHECK(v >= 0.1);
            CHECK(v < 0.3);  // 1/n plus sampling spread of the top eigenvalue for W = 100
        }
    }
    SUBCASE("share is bounded by [1/n, 1]") {
        const auto p = gaussian_panel(300, 8, 0.5, 1);
        for (auto mode : {VolTransform::Returns, VolTransform::AbsReturns, VolTransform::DiffAbsReturns}) {
            const auto s = rolling_first_pc_share(p, {50, mode, false});
            for (double v : s.share1) {
                CHECK(v >= 1.0 / 8.0 - 1e-12);
                CHECK(v <= 1.0 + 1e-12);
            }
        }
    }
    SUBCASE("uniform scaling leaves every share unchanged") {
        auto p = gaussian_panel(250, 6, 0.4, 5);
        const auto a = rolling_first_pc_share(p, {60, VolTransform::Returns, false});
        p.values *= 37.5;
        const auto b = rolling_first_pc_share(p, {60, VolTransform::Returns, false});
        REQUIRE(a.share1.size() == b.share1.size());
        for (std::size_t i = 0; i < a.share1.size(); ++i) CHECK(std::abs(a.share1[i] - b.share1[i]) < 1e-12);
    }
    SUBCASE("constant panel windows are degenerate") {
        const auto p = ReturnsPanel::with_step_labels(Matrix::Constant(20, 3, 0.01));
        const auto s = rolling_first_pc_share(p, {10, VolTransform::Returns, false});
        for (std::size_t i = 0; i < s.share1.size(); ++i) {
            CHECK(s.degenerate[i]);
            CHECK(std::isnan(s.share1[i]));
        }
    }
    SUBCASE("correlation-matrix option is scale free per column") {
        auto p = gaussian_panel(400, 5, 0.6, 9);
        const auto a = rolling_first_pc_share(p, {200, VolTransform::Returns, true});
        for (Eigen::Index k = 0; k < 5; ++k) p.values.col(k) *= static_cast<double>(k + 1) * 3.0;
        const auto b = rolling_first_pc_share(p, {200, VolTransform::Returns, true});
        for (std::size_t i = 0; i < a.share1.size(); ++i) CHECK(a.share1[i] == doctest::Approx(b.share1[i]).epsilon(1e-10));
    }
    SUBCASE("window larger than the panel") {
        const auto p = gaussian_panel(50, 3, 0.0, 2);
        CHECK_THROWS_AS(rolling_first_pc_share(p, {100, VolTransform::Returns, false}), DomainError);
    }
}
