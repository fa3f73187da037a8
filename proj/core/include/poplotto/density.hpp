#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace poplotto {

// Global comparison / merge tolerance for breakpoints, atom locations and
// near-zero heights.
inline constexpr double kTolerance = 1e-9;

struct Atom {
  double location = 0.0;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Mass strictly below a point and mass sitting exactly on it.
struct CdfValue {
  double below = 0.0;
  double at = 0.0;

  // CDF value with the tie mass split in half.
  double mid() const { return below + 0.5 * at; }
  // CDF value including the point itself.
  double through() const { return below + at; }
};

// A non-negative measure on [0, inf): a step-function density over
// half-open segments [x_{j-1}, x_j) plus finitely many point atoms.
//
// Construction merges breakpoints closer than kTolerance (dropping the
// zero-width segment between them), clamps heights in (-kTolerance, 0) to
// zero and coalesces atoms at the same location. Anything else that is not a
// valid measure throws std::invalid_argument. Instances are immutable.
class PiecewiseDensity {
 public:
  PiecewiseDensity() = default;
  PiecewiseDensity(std::vector<double> breakpoints, std::vector<double> heights,
                   std::vector<Atom> atoms = {});

  static PiecewiseDensity uniform(double lo, double hi, double mass = 1.0);
  static PiecewiseDensity point(double location, double mass = 1.0);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> heights() const { return heights_; }
  std::span<const Atom> atoms() const { return atoms_; }

  bool empty() const { return heights_.empty() && atoms_.empty(); }
  std::size_t segment_count() const { return heights_.size(); }

  // Mass of the continuous part strictly below x.
  double continuous_cdf(double x) const;
  double continuous_mass() const;

  // Height of the segment [x_{j-1}, x_j) containing x; zero outside.
  double density_at(double x) const;
  // Height of the segment (x_{j-1}, x_j] containing x, i.e. the left
  // segment when x sits on a breakpoint.
  double density_left_of(double x) const;

  // Closed hull of the positive part: segments with height > kTolerance and
  // all atoms. Both are 0 for an empty density.
  double support_lo() const;
  double support_hi() const;

  PiecewiseDensity scaled(double factor) const;
  // Rescaled to total mass 1. Throws std::domain_error on zero mass.
  PiecewiseDensity normalized() const;
  // Adds `height` (possibly negative) on [lo, hi). Throws if the result
  // would have a height below -kTolerance.
  PiecewiseDensity with_block_added(double lo, double hi, double height) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> heights_;
  std::vector<Atom> atoms_;
  // cumulative_[j] = continuous mass on [x_0, x_j).
  std::vector<double> cumulative_;
};

double total_mass(const PiecewiseDensity& d);

// First moment over total mass. Throws std::domain_error for zero mass.
double mean(const PiecewiseDensity& d);

CdfValue cdf(const PiecewiseDensity& d, double x);

struct MixturePart {
  double weight = 1.0;
  PiecewiseDensity density;
};

// Weighted sum of measures over the union of breakpoints. Weights must be
// non-negative.
PiecewiseDensity mixture(std::span<const MixturePart> parts);
// Unweighted sum.
PiecewiseDensity mixture(std::span<const PiecewiseDensity> parts);

}  // namespace poplotto
