#include "subfou/simulate.hpp"

#include <cmath>
#include <string>

#include "subfou/errors.hpp"
#include "subfou/parallel.hpp"

namespace subfou {

std::string to_string(PathKind k) {
    switch (k) {
    case PathKind::subfbm: return "subfbm";
    case PathKind::sfou: return "sfou";
    case PathKind::wiener: return "wiener";
    case PathKind::martingale: return "martingale";
    }
    return "?";
}

std::string to_string(SimMethod m) {
    switch (m) {
    case SimMethod::cholesky: return "cholesky";
    case SimMethod::fbm_fold: return "fbm_fold";
    case SimMethod::kernel_wiener: return "kernel_wiener";
    case SimMethod::exp_euler: return "exp_euler";
    case SimMethod::plain_euler: return "plain_euler";
    }
    return "?";
}

SimMethod parse_method(const std::string& s) {
    if (s == "cholesky") return SimMethod::cholesky;
    if (s == "fbm_fold") return SimMethod::fbm_fold;
    if (s == "kernel_wiener") return SimMethod::kernel_wiener;
    throw ConfigError("unknown method '" + s + "' (cholesky|fbm_fold|kernel_wiener)");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "exp_euler") return Scheme::exp_euler;
    if (s == "plain_euler") return Scheme::plain_euler;
    throw ConfigError("unknown scheme '" + s + "' (exp_euler|plain_euler)");
}

Eigen::MatrixXd covariance_matrix(const TimeGrid& grid, const HurstParams& p, CovKind which) {
    const std::size_t n = grid.n;
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double s = grid.times[i + 1], t = grid.times[j + 1];
            M(i, j) = M(j, i) = which == CovKind::subfbm ? cov_subfbm(s, t, p) : cov_fbm(s, t, p);
        }
    return M;
}

Eigen::MatrixXd increment_covariance(const TimeGrid& grid, const HurstParams& p) {
    const std::size_t n = grid.n;
    const double e = 2.0 * p.h;
    const double scale = std::pow(grid.dt(), e);
    std::vector<double> pw(2 * n + 2);
    for (std::size_t k = 0; k < pw.size(); ++k) pw[k] = std::pow(static_cast<double>(k), e);
    Eigen::MatrixXd S(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l <= j; ++l) {
            const std::size_t k = j - l, m = j + l;
            const double stationary = 0.5 * (pw[k + 1] + pw[k == 0 ? 1 : k - 1] - 2.0 * pw[k]);
            const double fold = 0.5 * (pw[m + 2] - 2.0 * pw[m + 1] + pw[m]);
            S(j, l) = S(l, j) = scale * (stationary - fold);
        }
    return S;
}

void check_psd(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double norm = ev.cwiseAbs().maxCoeff();
    if (ev(0) < -1e-10 * norm)
        throw NumericError("covariance matrix is indefinite: smallest eigenvalue " +
                           std::to_string(ev(0)));
}

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& M) {
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    const double jitter = 1e-12 * M.trace() / static_cast<double>(M.rows());
    Eigen::MatrixXd J = M;
    J.diagonal().array() += jitter;
    llt.compute(J);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    throw NumericError("cholesky factorization failed after jitter; smallest eigenvalue " +
                       std::to_string(es.eigenvalues()(0)));
}

IncrementModel build_increment_model(const TimeGrid& grid, const HurstParams& p) {
    return {grid, p, lower_cholesky(increment_covariance(grid, p))};
}

Eigen::VectorXd draw_increments(const IncrementModel& m, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::VectorXd xi(m.grid.n);
    for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = nd(rng);
    return m.L.triangularView<Eigen::Lower>() * xi;
}

void integrate_sfou(std::span<const double> dzeta, double theta, double dt, Scheme scheme,
                    std::span<double> out) {
    if (out.size() != dzeta.size() + 1) throw DomainError("integrate_sfou: size mismatch");
    const double a = scheme == Scheme::exp_euler ? std::exp(theta * dt) : 1.0 + theta * dt;
    out[0] = 0.0;
    for (std::size_t i = 0; i < dzeta.size(); ++i) out[i + 1] = a * out[i] + dzeta[i];
}

namespace {

PathBatch empty_batch(const TimeGrid& grid, const HurstParams& p, std::size_t reps,
                      const SeedPolicy& seeds) {
    if (reps < 1) throw DomainError("reps must be >= 1");
    PathBatch b;
    b.grid = grid;
    b.values = RowMatrix::Zero(static_cast<Eigen::Index>(reps), static_cast<Eigen::Index>(grid.n + 1));
    b.H = p.h;
    b.seed = seeds.master_seed;
    return b;
}

} // namespace

PathBatch simulate_subfbm(const TimeGrid& grid, const HurstParams& p, std::size_t reps,
                          const SeedPolicy& seeds, SimMethod method) {
    PathBatch b = empty_batch(grid, p, reps, seeds);
    b.kind = PathKind::subfbm;
    b.method = method;
    const std::size_t n = grid.n;
    switch (method) {
    case SimMethod::cholesky: {
        const auto model = build_increment_model(grid, p);
        parallel_for(reps, [&](std::size_t r) {
            auto rng = seeds.stream(r);
            const Eigen::VectorXd dz = draw_increments(model, rng);
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) b.values(r, i + 1) = acc += dz(i);
        });
        break;
    }
    case SimMethod::fbm_fold: {
        // fBm on {-t_n..-t_1, t_1..t_n}; zeta(t) = (W(t) + W(-t)) / sqrt(2)
        std::vector<double> pts(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            pts[i] = grid.times[i + 1];
            pts[n + i] = -grid.times[i + 1];
        }
        Eigen::MatrixXd R(2 * n, 2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i)
            for (std::size_t j = 0; j <= i; ++j) R(i, j) = R(j, i) = cov_fbm(pts[i], pts[j], p);
        const Eigen::MatrixXd L = lower_cholesky(R);
        parallel_for(reps, [&](std::size_t r) {
            auto rng = seeds.stream(r);
            std::normal_distribution<double> nd;
            Eigen::VectorXd xi(2 * n);
            for (auto& x : xi) x = nd(rng);
            const Eigen::VectorXd w = L.triangularView<Eigen::Lower>() * xi;
            for (std::size_t i = 0; i < n; ++i) b.values(r, i + 1) = (w(i) + w(n + i)) * M_SQRT1_2;
        });
        break;
    }
    case SimMethod::kernel_wiener: {
        require_kernel(p);
        const Eigen::MatrixXd N = kernel_matrix(KernelKind::n, grid.view(), p);
        const double sd = std::sqrt(grid.dt());
        parallel_for(reps, [&](std::size_t r) {
            auto rng = seeds.stream(r);
            std::normal_distribution<double> nd;
            Eigen::VectorXd dw(n);
            for (auto& x : dw) x = sd * nd(rng);
            const Eigen::VectorXd z = p.c_h * (N * dw);
            for (std::size_t i = 1; i <= n; ++i) b.values(r, i) = z(i);
        });
        break;
    }
    default:
        throw DomainError("simulate_subfbm: method must be cholesky, fbm_fold or kernel_wiener");
    }
    return b;
}

PathBatch simulate_sfou(const IncrementModel& model, double theta, std::size_t reps,
                        const SeedPolicy& seeds, Scheme scheme) {
    if (!std::isfinite(theta)) throw DomainError("theta must be finite");
    PathBatch b = empty_batch(model.grid, model.params, reps, seeds);
    b.kind = PathKind::sfou;
    b.theta = theta;
    b.method = scheme == Scheme::exp_euler ? SimMethod::exp_euler : SimMethod::plain_euler;
    const std::size_t n = model.grid.n;
    parallel_for(reps, [&](std::size_t r) {
        auto rng = seeds.stream(r);
        const Eigen::VectorXd dz = draw_increments(model, rng);
        integrate_sfou({dz.data(), n}, theta, model.grid.dt(), scheme,
                       {b.values.data() + r * (n + 1), n + 1});
    });
    return b;
}

PathBatch simulate_sfou(const TimeGrid& grid, const HurstParams& p, double theta, std::size_t reps,
                        const SeedPolicy& seeds, Scheme scheme) {
    return simulate_sfou(build_increment_model(grid, p), theta, reps, seeds, scheme);
}

} // namespace subfou
