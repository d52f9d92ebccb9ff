#pragma once
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "subfou/grid.hpp"
#include "subfou/kernels.hpp"
#include "subfou/random.hpp"

namespace subfou {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class PathKind { subfbm, sfou, wiener, martingale };
enum class SimMethod { cholesky, fbm_fold, kernel_wiener, exp_euler, plain_euler };
enum class CovKind { subfbm, fbm };
enum class Scheme { exp_euler, plain_euler };

std::string to_string(PathKind k);
std::string to_string(SimMethod m);
SimMethod parse_method(const std::string& s);
Scheme parse_scheme(const std::string& s);

struct PathBatch {
    TimeGrid grid;
    RowMatrix values;  // reps x (n+1), column 0 is t = 0
    PathKind kind = PathKind::subfbm;
    double H = 0.5;
    std::optional<double> theta;
    std::uint64_t seed = 0;
    SimMethod method = SimMethod::cholesky;

    std::size_t reps() const { return static_cast<std::size_t>(values.rows()); }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * values.cols(), static_cast<std::size_t>(values.cols())};
    }
};

// Covariance over t_1..t_n (t_0 = 0 is a degenerate zero row and is left out).
Eigen::MatrixXd covariance_matrix(const TimeGrid& grid, const HurstParams& p,
                                  CovKind which = CovKind::subfbm);
// Covariance of the n increments of sub-fBm over a uniform grid.
Eigen::MatrixXd increment_covariance(const TimeGrid& grid, const HurstParams& p);
// Throws NumericError naming the eigenvalue when M has one below -1e-10 ||M||.
void check_psd(const Eigen::MatrixXd& M);
// Lower Cholesky factor; one retry with 1e-12 trace/n jitter on the diagonal.
Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& M);

// Factor L of the increment covariance, S = L L^T. Shared by simulation and inference.
struct IncrementModel {
    TimeGrid grid;
    HurstParams params;
    Eigen::MatrixXd L;
};
IncrementModel build_increment_model(const TimeGrid& grid, const HurstParams& p);

// One replicate: n sub-fBm increments drawn from rng.
Eigen::VectorXd draw_increments(const IncrementModel& m, std::mt19937_64& rng);
// X_0 = 0 and X_{i+1} = a X_i + dzeta_i with a = e^{theta dt} (exp_euler) or 1 + theta dt.
void integrate_sfou(std::span<const double> dzeta, double theta, double dt, Scheme scheme,
                    std::span<double> out);

PathBatch simulate_subfbm(const TimeGrid& grid, const HurstParams& p, std::size_t reps,
                          const SeedPolicy& seeds, SimMethod method = SimMethod::cholesky);
PathBatch simulate_sfou(const TimeGrid& grid, const HurstParams& p, double theta,
                        std::size_t reps, const SeedPolicy& seeds,
                        Scheme scheme = Scheme::exp_euler);
PathBatch simulate_sfou(const IncrementModel& model, double theta, std::size_t reps,
                        const SeedPolicy& seeds, Scheme scheme = Scheme::exp_euler);

} // namespace subfou
