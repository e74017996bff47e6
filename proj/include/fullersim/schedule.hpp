#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fullersim::schedule {

// Energies are h * frequency in GHz.
struct Knot {
  double s = 0.0;
  double gamma = 0.0;
  double j = 0.0;

  friend bool operator==(const Knot&, const Knot&) = default;
};

struct Energies {
  double gamma = 0.0;
  double j = 0.0;
};

// Piecewise-linear Gamma(s), J(s) on [0, 1]. Knots strictly increasing in
// s, first at 0 and last at 1, energies non-negative.
class AnnealingSchedule {
 public:
  AnnealingSchedule(std::string name, std::vector<Knot> knots);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Knot>& knots() const noexcept { return knots_; }

  // Exact at knots; throws kRange outside [0, 1].
  Energies eval(double s) const;

  std::string to_csv() const;

 private:
  std::string name_;
  std::vector<Knot> knots_;
};

struct LinearRamp {
  double gamma0_ghz = 6.0;
  double j0_ghz = 4.0;
  int knots = 101;
};

// Gamma(s) = gamma0 (1 - s), J(s) = j0 s on uniform knots. Synthetic
// stand-in for hardware schedules.
AnnealingSchedule default_schedule(const LinearRamp& ramp = {});

// CSV with header "s,gamma_ghz,j_ghz", one knot per row.
AnnealingSchedule load_schedule(std::string_view csv, std::string name = "file");

// Multiplies J(s) by factor in (0, 1]; Gamma is unchanged.
AnnealingSchedule rescale_couplings(const AnnealingSchedule& sched, double factor);

}  // namespace fullersim::schedule
