#include "subfou/inference.hpp"

#include <cmath>

#include "subfou/errors.hpp"

namespace subfou {

namespace {

void check_path(std::span<const double> X, const TransformCache& c, const char* what) {
    if (X.size() != c.grid.n + 1)
        throw DomainError(std::string(what) + ": path has " + std::to_string(X.size()) +
                          " points, cache grid has " + std::to_string(c.grid.n + 1));
    if (X[0] != 0.0) throw DomainError(std::string(what) + ": path must start at 0");
}

struct Innovations {
    Eigen::VectorXd e;  // L^{-1} dX
    Eigen::VectorXd f;  // L^{-1} (X_left dt)
};

Innovations innovations(std::span<const double> X, const TransformCache& c, std::size_t m) {
    const double dt = c.grid.dt();
    Eigen::MatrixXd rhs(m, 2);
    for (std::size_t k = 0; k < m; ++k) {
        rhs(k, 0) = X[k + 1] - X[k];
        rhs(k, 1) = X[k] * dt;
    }
    c.model.L.topLeftCorner(m, m).triangularView<Eigen::Lower>().solveInPlace(rhs);
    return {rhs.col(0), rhs.col(1)};
}

} // namespace

Eigen::VectorXd TransformCache::collocation_row(std::size_t i) const {
    if (i > grid.n) throw DomainError("collocation_row: index beyond grid");
    Eigen::VectorXd w = v.head(i);
    model.L.topLeftCorner(i, i).triangularView<Eigen::Lower>().transpose().solveInPlace(w);
    return grid.dt() * w;
}

TransformCache build_cache(const TimeGrid& grid, const HurstParams& p, const CacheOptions& opt) {
    require_kernel(p);
    validate(opt.quad);
    TransformCache c;
    c.grid = grid;
    c.params = p;
    c.model = build_increment_model(grid, p);
    const std::size_t n = grid.n;
    const double dt = grid.dt();
    c.v = Eigen::VectorXd::Ones(n);
    c.model.L.triangularView<Eigen::Lower>().solveInPlace(c.v);
    c.V.assign(n + 1, 0.0);
    c.dV.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(c.v(k) > 0.0))
            throw NumericError("innovation weight v_" + std::to_string(k) + " is not positive");
        c.dV[k] = (dt * c.v(k)) * (dt * c.v(k));
        c.V[k + 1] = c.V[k] + c.dV[k];
    }
    c.w_values.resize(n + 1);
    c.dw_values.resize(n);
    for (std::size_t i = 0; i <= n; ++i) c.w_values[i] = w_and_dw(grid.times[i], p).w;
    for (std::size_t i = 0; i < n; ++i) c.dw_values[i] = c.w_values[i + 1] - c.w_values[i];
    if (opt.kernel_matrices) {
        c.k_matrix = kernel_matrix(KernelKind::k, grid.view(), p, opt.quad);
        c.K_matrix = kernel_matrix(KernelKind::K, grid.view(), p, opt.quad);
    }
    return c;
}

std::vector<double> transform_to_Z(std::span<const double> X, const TransformCache& c,
                                   TransformMethod m) {
    check_path(X, c, "transform_to_Z");
    const std::size_t n = c.grid.n;
    std::vector<double> Z(n + 1, 0.0);
    if (m == TransformMethod::midpoint) {
        if (!c.has_kernel_matrices()) throw DomainError("cache was built without kernel matrices");
        Eigen::VectorXd dX(n);
        for (std::size_t j = 0; j < n; ++j) dX(j) = X[j + 1] - X[j];
        Eigen::Map<Eigen::VectorXd>(Z.data(), n + 1) = c.k_matrix * dX;
        return Z;
    }
    const auto in = innovations(X, c, n);
    const double dt = c.grid.dt();
    for (std::size_t k = 0; k < n; ++k) Z[k + 1] = Z[k] + dt * c.v(k) * in.e(k);
    return Z;
}

std::vector<double> reconstruct_X(std::span<const double> Z, const TransformCache& c,
                                  TransformMethod m) {
    check_path(Z, c, "reconstruct_X");
    const std::size_t n = c.grid.n;
    std::vector<double> X(n + 1, 0.0);
    Eigen::VectorXd dZ(n);
    for (std::size_t j = 0; j < n; ++j) dZ(j) = Z[j + 1] - Z[j];
    if (m == TransformMethod::midpoint) {
        if (!c.has_kernel_matrices()) throw DomainError("cache was built without kernel matrices");
        Eigen::Map<Eigen::VectorXd>(X.data(), n + 1) = c.K_matrix * dZ;
        return X;
    }
    const double dt = c.grid.dt();
    for (std::size_t k = 0; k < n; ++k) dZ(k) /= dt * c.v(k);
    const Eigen::VectorXd dX = c.model.L.triangularView<Eigen::Lower>() * dZ;
    for (std::size_t k = 0; k < n; ++k) X[k + 1] = X[k] + dX(k);
    return X;
}

std::vector<double> compute_J(std::span<const double> X, const TransformCache& c) {
    check_path(X, c, "compute_J");
    const std::size_t n = c.grid.n;
    const auto in = innovations(X, c, n);
    std::vector<double> J(n);
    for (std::size_t k = 0; k < n; ++k) J[k] = in.f(k) / (c.grid.dt() * c.v(k));
    return J;
}

EstimationResult mle(std::span<const double> X, const TransformCache& c, std::size_t steps) {
    check_path(X, c, "mle");
    const std::size_t m = steps == 0 ? c.grid.n : steps;
    if (m > c.grid.n) throw DomainError("mle: horizon beyond cache grid");
    const double dt = c.grid.dt();
    const auto in = innovations(X, c, m);
    EstimationResult r;
    r.T = c.grid.times[m];
    r.n = m;
    r.H = c.params.h;
    r.J_samples.resize(m);
    r.Z_path.assign(m + 1, 0.0);
    double A = 0.0, B = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double dz = dt * c.v(k) * in.e(k);
        const double J = in.f(k) / (dt * c.v(k));
        r.J_samples[k] = J;
        r.Z_path[k + 1] = r.Z_path[k] + dz;
        A += J * dz;
        B += J * J * c.dV[k];
    }
    if (!(B > 0.0)) throw NumericError("degenerate path: observed information is zero");
    r.score = A;
    r.obs_info = B;
    r.theta_hat = A / B;
    r.log_lik_at_hat = 0.5 * A * A / B;
    return r;
}

ScorePath score_path(std::span<const double> X, const TransformCache& c) {
    check_path(X, c, "score_path");
    const std::size_t n = c.grid.n;
    const double dt = c.grid.dt();
    const auto in = innovations(X, c, n);
    ScorePath s;
    s.A.assign(n + 1, 0.0);
    s.B.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double dz = dt * c.v(k) * in.e(k);
        const double J = in.f(k) / (dt * c.v(k));
        s.A[k + 1] = s.A[k] + J * dz;
        s.B[k + 1] = s.B[k] + J * J * c.dV[k];
    }
    return s;
}

double log_likelihood(double theta, std::span<const double> X, const TransformCache& c) {
    const auto r = mle(X, c);
    return theta * r.score - 0.5 * theta * theta * r.obs_info;
}

double likelihood_ratio(double theta, double theta0, std::span<const double> X,
                        const TransformCache& c) {
    const auto r = mle(X, c);
    // sum J dM with dM = dZ - theta0 J dV
    const double gamma = r.score - theta0 * r.obs_info;
    const double d = theta - theta0;
    return d * gamma - 0.5 * d * d * r.obs_info;
}

double girsanov_weight(double a, std::span<const double> zeta, const TransformCache& c,
                       TransformMethod m) {
    const auto Z = transform_to_Z(zeta, c, m);
    const double qv = m == TransformMethod::innovations ? c.V.back() : c.w_values.back();
    return std::exp(a * Z.back() - 0.5 * a * a * qv);
}

std::vector<double> prediction_weights(const TimeGrid& observed, double t, const HurstParams& p,
                                       const QuadratureSpec& q) {
    const double a = observed.T;
    if (!(t > a)) throw DomainError("predict needs t > a");
    std::vector<double> w(observed.n);
    for (std::size_t j = 0; j < observed.n; ++j) w[j] = prediction_kernel(observed.midpoint(j), a, t, p, q);
    return w;
}

double predict(std::span<const double> zeta, std::span<const double> weights) {
    if (zeta.size() != weights.size() + 1) throw DomainError("predict: path/weight size mismatch");
    double acc = zeta.back();
    for (std::size_t j = 0; j < weights.size(); ++j) acc += weights[j] * (zeta[j + 1] - zeta[j]);
    return acc;
}

double predict(std::span<const double> zeta, const TimeGrid& observed, double t, const HurstParams& p,
               const QuadratureSpec& q) {
    return predict(zeta, prediction_weights(observed, t, p, q));
}

} // namespace subfou
