#include <doctest.h>

#include <cmath>

#include "subfou/simulate.hpp"
#include "subfou/stats.hpp"

using namespace subfou;

TEST_SUITE("simulate") {

TEST_CASE("build_grid") {
    const auto g = build_grid(1.0, 4);
    CHECK(g.times == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
    CHECK(build_grid(10.0, 1000).dt() == doctest::Approx(0.01));
    CHECK_THROWS_AS(build_grid(1.0, 0), DomainError);
    CHECK_THROWS_AS(build_grid(-1.0, 10), DomainError);
    CHECK(steps_for(40.0, 0.02) == 2000);
    CHECK_THROWS_AS(steps_for(1.0, 0.3), DomainError);
}

TEST_CASE("covariance matrices") {
    const auto g = build_grid(2.0, 8);
    const auto M = covariance_matrix(g, derive_constants(0.5));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) CHECK(M(i, j) == std::min(g.times[i + 1], g.times[j + 1]));
    const auto p = derive_constants(0.75);
    const auto C = covariance_matrix(build_grid(2.0, 2), p);
    CHECK(C(0, 0) == doctest::Approx(0.58579).epsilon(1e-5));
    CHECK(C(0, 1) == doctest::Approx(0.73035).epsilon(1e-5));
    CHECK(C(1, 1) == doctest::Approx(1.65685).epsilon(1e-5));
    CHECK(C(1, 0) == C(0, 1));
    CHECK_NOTHROW(check_psd(covariance_matrix(build_grid(1.0, 64), p)));
    CHECK_NOTHROW(check_psd(covariance_matrix(build_grid(1.0, 64), p, CovKind::fbm)));
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_THROWS_AS(check_psd(bad), NumericError);
    CHECK_THROWS_AS(lower_cholesky(bad), NumericError);
}

TEST_CASE("increment covariance is the differenced covariance") {
    for (double H : {0.3, 0.7}) {
        const auto p = derive_constants(H);
        const auto g = build_grid(3.0, 40);
        const auto C = covariance_matrix(g, p);
        const auto S = increment_covariance(g, p);
        auto Cz = [&](int i, int j) { return i == 0 || j == 0 ? 0.0 : C(i - 1, j - 1); };
        for (int j = 0; j < 40; ++j)
            for (int l = 0; l < 40; ++l)
                CHECK(S(j, l) == doctest::Approx(Cz(j + 1, l + 1) - Cz(j, l + 1) - Cz(j + 1, l) + Cz(j, l))
                                     .epsilon(1e-10).scale(1.0));
        // cumulative sum of the increment factor is the Cholesky factor of C
        const auto L = lower_cholesky(S);
        Eigen::MatrixXd D = L;
        for (int i = 1; i < 40; ++i) D.row(i) += D.row(i - 1);
        CHECK((D - lower_cholesky(C)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("marginal variance and Gaussianity") {
    const auto p = derive_constants(0.7);
    const auto b = simulate_subfbm(build_grid(1.0, 64), p, 2000, SeedPolicy{11});
    std::vector<double> last(2000), z(2000);
    for (std::size_t r = 0; r < 2000; ++r) {
        last[r] = b.values(r, 64);
        z[r] = last[r] / std::sqrt(cov_subfbm(1, 1, p));
    }
    const double se = std::sqrt(2.0) * 0.680492 / std::sqrt(2000.0);
    CHECK(std::abs(variance(last) - 0.680492) < 5 * se);
    CHECK(ks_statistic(z) < 1.63 / std::sqrt(2000.0));
}

TEST_CASE("determinism and replicate independence") {
    const auto p = derive_constants(0.7);
    const auto g = build_grid(2.0, 50);
    for (auto m : {SimMethod::cholesky, SimMethod::fbm_fold, SimMethod::kernel_wiener}) {
        const auto a = simulate_subfbm(g, p, 5, SeedPolicy{3}, m);
        const auto b = simulate_subfbm(g, p, 5, SeedPolicy{3}, m);
        const auto c = simulate_subfbm(g, p, 2, SeedPolicy{3}, m);
        CHECK(a.values == b.values);
        CHECK(a.values.topRows(2) == c.values);
        CHECK(a.values.col(0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.values.row(0) != a.values.row(1));
    }
    CHECK(SeedPolicy{3}.stream_seed(0) != SeedPolicy{3}.stream_seed(1));
    CHECK(SeedPolicy{3}.derive("pilot").master_seed != 3);
}

TEST_CASE("BM case") {
    const auto p = derive_constants(0.5);
    const auto b = simulate_subfbm(build_grid(1.0, 4), p, 4000, SeedPolicy{1});
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            double acc = 0;
            for (int r = 0; r < 4000; ++r) acc += b.values(r, i) * b.values(r, j);
            CHECK(std::abs(acc / 4000 - 0.25 * std::min(i, j)) < 5 * 0.25 * std::max(i, j) * std::sqrt(2.0 / 4000));
        }
}

TEST_CASE("method agreement with the covariance") {
    for (double H : {0.3, 0.7}) {
        const auto p = derive_constants(H);
        const auto g = build_grid(1.0, 8);
        const std::size_t R = 4000;
        for (auto m : {SimMethod::cholesky, SimMethod::fbm_fold}) {
            const auto b = simulate_subfbm(g, p, R, SeedPolicy{21}, m);
            for (int i = 1; i <= 8; ++i)
                for (int j = 1; j <= i; ++j) {
                    double acc = 0;
                    for (std::size_t r = 0; r < R; ++r) acc += b.values(r, i) * b.values(r, j);
                    const double cij = cov_subfbm(g.times[i], g.times[j], p);
                    const double se = std::sqrt((cov_subfbm(g.times[i], g.times[i], p) *
                                                     cov_subfbm(g.times[j], g.times[j], p) + cij * cij) / R);
                    CHECK(std::abs(acc / R - cij) < 5 * se);
                }
        }
    }
}

TEST_CASE("kernel_wiener bias shrinks") {
    const auto p = derive_constants(0.7);
    double prev = 1.0;
    for (std::size_t n : {64, 128, 256}) {
        const auto g = build_grid(1.0, n);
        const auto N = kernel_matrix(KernelKind::n, g.view(), p);
        const double var = p.c_h * p.c_h * N.row(n).squaredNorm() * g.dt();
        const double err = std::abs(var - cov_subfbm(1, 1, p));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 0.01);
    CHECK_THROWS_AS(simulate_subfbm(build_grid(1, 8), derive_constants(0.4), 1, {}, SimMethod::kernel_wiener),
                    DomainError);
}

TEST_CASE("sfou schemes") {
    const auto p = derive_constants(0.7);
    const auto g = build_grid(5.0, 200);
    const auto z = simulate_subfbm(g, p, 3, SeedPolicy{9});
    for (auto s : {Scheme::exp_euler, Scheme::plain_euler}) {
        const auto x = simulate_sfou(g, p, 0.0, 3, SeedPolicy{9}, s);
        CHECK(x.values == z.values);
    }
}

TEST_CASE("ergodic sfou stays bounded and stationary") {
    const auto p = derive_constants(0.7);
    const auto g = build_grid(20.0, 2000);
    const auto b = simulate_sfou(g, p, -1.0, 300, SeedPolicy{4});
    CHECK(b.values.cwiseAbs().maxCoeff() < 20.0);
    std::vector<double> x15(300), x20(300);
    for (int r = 0; r < 300; ++r) {
        x15[r] = b.values(r, 1500);
        x20[r] = b.values(r, 2000);
    }
    CHECK(std::abs(variance(x20) / variance(x15) - 1.0) < 0.2);
}

TEST_CASE("exp and plain Euler agree at rate dt") {
    const auto p = derive_constants(0.7);
    std::vector<double> sup;
    for (std::size_t n : {250, 500, 1000}) {
        const auto model = build_increment_model(build_grid(10.0, n), p);
        double acc = 0;
        for (std::uint64_t r = 0; r < 30; ++r) {
            auto rng = SeedPolicy{8}.stream(r);
            const Eigen::VectorXd dz = draw_increments(model, rng);
            std::vector<double> a(n + 1), b(n + 1);
            integrate_sfou({dz.data(), n}, -1.0, model.grid.dt(), Scheme::exp_euler, a);
            integrate_sfou({dz.data(), n}, -1.0, model.grid.dt(), Scheme::plain_euler, b);
            double m = 0;
            for (std::size_t i = 0; i <= n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
            acc += m;
        }
        sup.push_back(acc / 30);
    }
    CHECK(sup[0] / sup[1] > 1.6);
    CHECK(sup[1] / sup[2] > 1.6);
}

}
