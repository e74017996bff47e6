#include "fullersim/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fullersim/error.hpp"

namespace fullersim::schedule {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

AnnealingSchedule::AnnealingSchedule(std::string name, std::vector<Knot> knots)
    : name_(std::move(name)), knots_(std::move(knots)) {
  if (knots_.size() < 2) throw Error(ErrorKind::kConfig, "schedule needs at least two knots");
  if (knots_.front().s != 0.0) throw Error(ErrorKind::kConfig, "schedule must start at s=0");
  if (knots_.back().s != 1.0) throw Error(ErrorKind::kConfig, "schedule must end at s=1");
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    if (k > 0 && !(knots_[k].s > knots_[k - 1].s)) {
      throw Error(ErrorKind::kConfig, "knot " + std::to_string(k) + ": s not increasing");
    }
    if (!(knots_[k].gamma >= 0.0) || !(knots_[k].j >= 0.0)) {
      throw Error(ErrorKind::kConfig, "knot " + std::to_string(k) + ": energies must be >= 0");
    }
  }
}

Energies AnnealingSchedule::eval(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorKind::kRange, "schedule evaluated at s=" + fmt(s) + " outside [0, 1]");
  }
  auto hi = std::lower_bound(knots_.begin(), knots_.end(), s,
                             [](const Knot& k, double x) { return k.s < x; });
  if (hi->s == s) return {hi->gamma, hi->j};
  auto lo = hi - 1;
  const double w = (s - lo->s) / (hi->s - lo->s);
  return {lo->gamma + w * (hi->gamma - lo->gamma), lo->j + w * (hi->j - lo->j)};
}

std::string AnnealingSchedule::to_csv() const {
  std::string out = "s,gamma_ghz,j_ghz\n";
  for (const auto& k : knots_) out += fmt(k.s) + ',' + fmt(k.gamma) + ',' + fmt(k.j) + '\n';
  return out;
}

AnnealingSchedule default_schedule(const LinearRamp& ramp) {
  if (ramp.knots < 2) throw Error(ErrorKind::kConfig, "linear ramp needs at least two knots");
  std::vector<Knot> knots;
  const int last = ramp.knots - 1;
  for (int k = 0; k <= last; ++k) {
    const double s = k == last ? 1.0 : static_cast<double>(k) / last;
    knots.push_back({s, ramp.gamma0_ghz * (1.0 - s), ramp.j0_ghz * s});
  }
  return AnnealingSchedule("default", std::move(knots));
}

AnnealingSchedule load_schedule(std::string_view csv, std::string name) {
  std::istringstream in{std::string(csv)};
  std::string line;
  int line_no = 0;
  bool header = false;
  std::vector<Knot> knots;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::kConfig, "schedule line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(trim(cell));
    if (!header) {
      if (cells != std::vector<std::string>{"s", "gamma_ghz", "j_ghz"}) {
        fail("expected header 's,gamma_ghz,j_ghz'");
      }
      header = true;
      continue;
    }
    if (cells.size() != 3) fail("expected 3 columns");
    double v[3];
    for (int c = 0; c < 3; ++c) {
      auto [p, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v[c]);
      if (ec != std::errc{} || p != cells[c].data() + cells[c].size() || !std::isfinite(v[c])) {
        fail("bad number '" + cells[c] + "'");
      }
    }
    if (v[0] < 0.0 || v[0] > 1.0) fail("s outside [0, 1]");
    if (v[1] < 0.0 || v[2] < 0.0) fail("negative energy");
    if (!knots.empty() && !(v[0] > knots.back().s)) fail("s not increasing");
    if (knots.empty() && v[0] != 0.0) fail("first knot must have s=0");
    knots.push_back({v[0], v[1], v[2]});
  }
  if (!header) throw Error(ErrorKind::kConfig, "schedule: missing header");
  if (knots.empty() || knots.back().s != 1.0) {
    throw Error(ErrorKind::kConfig, "schedule line " + std::to_string(line_no) +
                                        ": missing final knot at s=1");
  }
  return AnnealingSchedule(std::move(name), std::move(knots));
}

AnnealingSchedule rescale_couplings(const AnnealingSchedule& sched, double factor) {
  if (!(factor > 0.0 && factor <= 1.0)) {
    throw Error(ErrorKind::kRange, "coupling factor " + fmt(factor) + " outside (0, 1]");
  }
  auto knots = sched.knots();
  for (auto& k : knots) k.j *= factor;
  return AnnealingSchedule(sched.name() + "*J" + fmt(factor), std::move(knots));
}

}  // namespace fullersim::schedule
