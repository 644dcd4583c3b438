#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedlab {

enum class ErrorKind {
  InvalidParams,
  NegativeFrequency,
  ZeroFrequencyMomentum,
  QuadratureFailure,
  GridTooCoarse,
  BurnInExceedsTrajectory,
  SegmentTooLong,
  LagTooLong,
  WindowTooLong,
  EmptySeries,
  UnknownScenario,
  Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// One violated invariant found by validate().
struct Violation {
  std::string invariant;
  double actual = 0.0;
  double allowed = 0.0;
};

/// Physical parameters. Internal units default to hbar = m = omega0 = 1.
///
/// `charge` and `light_speed` are optional. When both are supplied they must
/// reproduce tau = 2 e^2 / (3 m c^3); when neither is supplied they are derived
/// from tau through the fine-structure relation e^2 = alpha hbar c.
struct SystemParams {
  double hbar = 1.0;
  double m = 1.0;
  double omega0 = 1.0;
  double tau = 0.01;
  double kT = 0.0;
  double K = 0.0;
  std::optional<double> charge;
  std::optional<double> light_speed;

  /// Damping rate of the order-reduced equation, tau * omega0^2.
  double gamma() const { return tau * omega0 * omega0; }
  /// Light speed, supplied or derived from tau.
  double c() const;
  /// Charge, supplied or derived from tau.
  double e() const;
};

struct GridSpec {
  double dt = 0.005;
  std::size_t n_samples = std::size_t{1} << 20;
  double omega_cut = 500.0;
  double omega_v_cut = 5.0;
  std::size_t n_ensemble = 64;
  std::uint64_t seed = 42;

  double duration() const { return dt * static_cast<double>(n_samples); }
  /// Spacing of the synthesis lattice, 2 pi / (n dt).
  double domega() const;
};

struct ValidatedConfig {
  SystemParams params;
  GridSpec grid;
  std::vector<std::string> warnings;
};

inline constexpr double kFineStructure = 7.2973525693e-3;
inline constexpr double kSoftDampingLimit = 0.1;
inline constexpr double kHardDampingLimit = 0.5;

/// Lists every violated invariant without throwing. Empty means valid.
std::vector<Violation> check(const SystemParams& params, const GridSpec& grid);

/// Returns the configuration unchanged (plus warnings) or throws
/// Error(InvalidParams) whose message lists every violated invariant.
ValidatedConfig validate(const SystemParams& params, const GridSpec& grid);

/// Validation of the parameter set alone (no grid).
void validate_params(const SystemParams& params);

/// Sub-seed for ensemble member `index`; a pure function of both arguments.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace sedlab
