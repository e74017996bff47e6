#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fullersim/measures.hpp"
#include "fullersim/schedule.hpp"

namespace fullersim::calibrate {

struct CurvePoint {
  double t_a_ns = 0.0;
  double value = 0.0;
};

// Observable versus anneal time; t_a strictly increasing, >= 3 points.
class FidelityCurve {
 public:
  FidelityCurve(std::string schedule_name, std::vector<CurvePoint> points);

  const std::string& schedule_name() const noexcept { return name_; }
  const std::vector<CurvePoint>& points() const noexcept { return points_; }
  // Piecewise-linear in t_a; throws kRange outside the sampled range.
  double at(double t_a_ns) const;

  std::string to_csv() const;  // header ta_ns,f_binned

 private:
  std::string name_;
  std::vector<CurvePoint> points_;
};

FidelityCurve load_curve(std::string_view csv, std::string name = "file");

enum class MatchObservable { kBinnedFidelity, kResidualEnergy };

struct CurveRequest {
  std::vector<double> t_a_ns;
  double ds = 1e-3;
  MatchObservable observable = MatchObservable::kBinnedFidelity;
  int threads = 1;
};

// One evolve + measure per anneal time, in request order.
FidelityCurve fidelity_curve(const topology::FullereneGraph& g,
                             const schedule::AnnealingSchedule& sched,
                             const measures::Reference& ref, const CurveRequest& req);

// t' with curve_b(t') == curve_a(t), by linear inversion on the segment of
// curve_b that brackets the target. Errors: kRange if no segment brackets it,
// kDegenerate if several non-adjacent segments (or a flat one) do.
double equivalent_time(const FidelityCurve& a, const FidelityCurve& b, double t_a_ns);

}  // namespace fullersim::calibrate
