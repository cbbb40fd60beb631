#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pvc/constants.hpp"
#include "pvc/stats.hpp"
#include "pvc/vec.hpp"

namespace pvc {

/// Target of rho * E#V(buffer / 2) used to size the buffer.
inline constexpr double kBufferExceedance = 1e-3;
/// Largest tolerated fraction of rejected replicates.
inline constexpr double kMaxRejectedFraction = 1e-2;
/// Allowed range of rho * E#V(u) for the extremal-index threshold.
inline constexpr double kMinExpectedExceedances = 0.2;
inline constexpr double kMaxExpectedExceedances = 5.0;
/// Per-nucleus values are pooled for the i.i.d. control from the level
/// where rho * E#V equals this.
inline constexpr double kPoolExpectedExceedances = 50.0;

struct ExtremeRunConfig {
  Dim d{2};
  double n = 30;       // box side; rho = n^d
  double buffer = 0;   // 0 selects calibrate_buffer
  std::int64_t reps = 1000;
  std::uint64_t seed = 1;
  double expected_exceedances = 2.0;  // picks the threshold u for theta_hat

  double rho() const;
  /// Throws BadBox for n <= 0 or a negative buffer.
  void validate() const;
};

struct ExtremeReport {
  int d = 2;
  double n = 0;
  double rho = 0;
  double buffer = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> maxima;                  // per replicate
  std::vector<std::int64_t> nuclei_in_box;     // per replicate
  std::vector<double> normalized;              // with alpha1
  double threshold = 0;                        // u used for theta_hat
  MCEstimate theta_hat;
  double ks_gumbel = 0;
  std::int64_t rejected_replicates = 0;
  // Pooled per-nucleus values at or above pool_floor, for the i.i.d. control.
  double pool_floor = 0;
  std::vector<double> pooled_tail;
  std::int64_t total_nuclei = 0;
};

enum class NormConst { Alpha1, Alpha1Prime };

/// Buffer b with rho * E#V(b/2) = kBufferExceedance.
double calibrate_buffer(Dim d, double rho);

/// Threshold u with rho * E#V(u) = expected.
double threshold_for_exceedances(Dim d, double rho, double expected);

/// D(x) for points[index] given every point of the enlarged box, using a
/// neighbor grid. Returns nothing when the cell cannot be certified within
/// available_radius of the nucleus.
class NeighborGrid {
 public:
  NeighborGrid(std::span<const Vec> points, const Vec& lo, const Vec& hi, double cell);
  /// Points within radius of x, translated so that x is the origin, skipping
  /// the point with index `skip`.
  void gather(const Vec& x, double radius, std::int64_t skip, std::vector<Vec>& out) const;

 private:
  std::span<const Vec> points_;
  int d_;
  Vec lo_;
  double cell_;
  std::array<std::int64_t, kMaxDim> shape_{};
  std::vector<std::int64_t> start_;   // CSR offsets per grid cell
  std::vector<std::int64_t> members_;
};

std::optional<double> nucleus_max_vertex_distance(const NeighborGrid& grid, std::span<const Vec> points,
                                                  std::int64_t index, double start_radius,
                                                  double available_radius);

ExtremeReport run_box_experiment(const ExtremeRunConfig& cfg, int workers = 0);

/// kappa_d M^d - log(c rho (log rho)^{d-1}). Throws BadRho unless rho > e.
std::vector<double> gumbel_normalize(std::span<const double> maxima, Dim d, double rho, NormConst which);

double gumbel_cdf(double t);

/// -log(p_le) / expected with the delta-method error of a binomial
/// proportion over `reps` replicates.
MCEstimate extremal_index_from_proportion(double p_le, std::int64_t reps, double expected);

/// Block-maximum estimate at threshold u. Throws ThresholdOutOfRange when
/// rho * E#V(u) is outside [0.2, 5] or the empirical P(M <= u) is 0 or 1.
MCEstimate estimate_extremal_index(const ExtremeReport& report, double u, Dim d);

/// Same estimator after replacing the per-nucleus values of each replicate
/// by i.i.d. draws from the pooled empirical marginal.
MCEstimate iid_control_extremal_index(const ExtremeReport& report, double u, Dim d, std::uint64_t seed);

}  // namespace pvc
