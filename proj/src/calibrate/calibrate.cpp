#include "fullersim/calibrate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fullersim/error.hpp"
#include "fullersim/evolve.hpp"
#include "fullersim/parallel.hpp"

namespace fullersim::calibrate {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

FidelityCurve::FidelityCurve(std::string schedule_name, std::vector<CurvePoint> points)
    : name_(std::move(schedule_name)), points_(std::move(points)) {
  if (points_.size() < 3) throw Error(ErrorKind::kConfig, "a curve needs at least 3 points");
  for (std::size_t k = 1; k < points_.size(); ++k) {
    if (!(points_[k].t_a_ns > points_[k - 1].t_a_ns)) {
      throw Error(ErrorKind::kConfig, "curve t_a not strictly increasing at point " +
                                          std::to_string(k));
    }
  }
}

double FidelityCurve::at(double t) const {
  if (!(t >= points_.front().t_a_ns && t <= points_.back().t_a_ns)) {
    throw Error(ErrorKind::kRange, "t_a=" + fmt(t) + " outside curve range [" +
                                       fmt(points_.front().t_a_ns) + ", " +
                                       fmt(points_.back().t_a_ns) + "]");
  }
  auto hi = std::lower_bound(points_.begin(), points_.end(), t,
                             [](const CurvePoint& p, double x) { return p.t_a_ns < x; });
  if (hi->t_a_ns == t) return hi->value;
  auto lo = hi - 1;
  const double w = (t - lo->t_a_ns) / (hi->t_a_ns - lo->t_a_ns);
  return lo->value + w * (hi->value - lo->value);
}

std::string FidelityCurve::to_csv() const {
  std::string out = "ta_ns,f_binned\n";
  for (const auto& p : points_) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g,%.12g\n", p.t_a_ns, p.value);
    out += buf;
  }
  return out;
}

FidelityCurve load_curve(std::string_view csv, std::string name) {
  std::istringstream in{std::string(csv)};
  std::string line;
  int line_no = 0;
  bool header = false;
  std::vector<CurvePoint> points;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(trim(cell));
    if (!header) {
      if (cells.size() != 2 || cells[0] != "ta_ns") {
        throw Error(ErrorKind::kConfig, "curve line " + std::to_string(line_no) +
                                            ": expected header 'ta_ns,f_binned'");
      }
      header = true;
      continue;
    }
    double v[2];
    if (cells.size() != 2) {
      throw Error(ErrorKind::kConfig, "curve line " + std::to_string(line_no) + ": expected 2 columns");
    }
    for (int c = 0; c < 2; ++c) {
      auto [p, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v[c]);
      if (ec != std::errc{} || p != cells[c].data() + cells[c].size()) {
        throw Error(ErrorKind::kConfig, "curve line " + std::to_string(line_no) +
                                            ": bad number '" + cells[c] + "'");
      }
    }
    points.push_back({v[0], v[1]});
  }
  return FidelityCurve(std::move(name), std::move(points));
}

FidelityCurve fidelity_curve(const topology::FullereneGraph& g,
                             const schedule::AnnealingSchedule& sched,
                             const measures::Reference& ref, const CurveRequest& req) {
  const evolve::Evolver evolver(g);
  std::vector<CurvePoint> points(req.t_a_ns.size());
  parallel_for(req.t_a_ns.size(), req.threads, [&](std::size_t i) {
    const auto w = evolver.run({req.t_a_ns[i], req.ds, sched});
    const auto p = evolve::probabilities(w);
    const auto record = measures::measure_exact(g, p, ref, req.t_a_ns[i]);
    points[i] = {req.t_a_ns[i], req.observable == MatchObservable::kBinnedFidelity
                                    ? record.f_binned
                                    : record.delta_e};
  });
  return FidelityCurve(sched.name(), std::move(points));
}

double equivalent_time(const FidelityCurve& a, const FidelityCurve& b, double t_a_ns) {
  const double target = a.at(t_a_ns);
  const auto& pts = b.points();
  std::vector<std::size_t> segments;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = std::min(pts[i].value, pts[i + 1].value);
    const double hi = std::max(pts[i].value, pts[i + 1].value);
    if (target >= lo && target <= hi) segments.push_back(i);
  }
  if (segments.empty()) {
    throw Error(ErrorKind::kRange, "no match: value " + fmt(target) + " outside the range of curve '" +
                                       b.schedule_name() + "'");
  }
  // Target exactly on a knot shared by two neighbouring segments.
  if (segments.size() == 2 && segments[1] == segments[0] + 1 &&
      pts[segments[1]].value == target) {
    const double lv = pts[segments[0]].value, rv = pts[segments[1] + 1].value;
    if ((lv - target) * (rv - target) < 0.0) return pts[segments[1]].t_a_ns;
  }
  const bool flat = segments.size() == 1 && pts[segments[0]].value == pts[segments[0] + 1].value;
  if (segments.size() > 1 || flat) {
    std::string list;
    for (auto s : segments) {
      list += (list.empty() ? "" : ", ") + std::string("[") + fmt(pts[s].t_a_ns) + ", " +
              fmt(pts[s + 1].t_a_ns) + "]";
    }
    throw Error(ErrorKind::kDegenerate, "ambiguous match for value " + fmt(target) +
                                            ": candidate segments " + list);
  }
  const auto& lo = pts[segments[0]];
  const auto& hi = pts[segments[0] + 1];
  return lo.t_a_ns + (target - lo.value) / (hi.value - lo.value) * (hi.t_a_ns - lo.t_a_ns);
}

}  // namespace fullersim::calibrate
