#include "qshift/inference_types.hpp"

#include "qshift/errors.hpp"

namespace qshift {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Exact:
      return "exact";
    case Mode::Asymptotic:
      return "asymptotic";
    case Mode::Auto:
      return "auto";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  if (text == "exact") return Mode::Exact;
  if (text == "asymptotic") return Mode::Asymptotic;
  if (text == "auto") return Mode::Auto;
  throw InputError("unknown mode '" + text + "' (expected exact, asymptotic or auto)");
}

bool ConfidenceSet::contains(double delta) const {
  for (const auto& iv : intervals) {
    if (iv.lo <= delta && delta <= iv.hi) return true;
  }
  return false;
}

bool ConfidenceSet::covers(const ConfidenceSet& other) const {
  for (const auto& inner : other.intervals) {
    bool inside = false;
    for (const auto& outer : intervals) {
      if (outer.lo <= inner.lo && inner.hi <= outer.hi) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

ConfidenceSet confidence_set_from_segments(const ShiftTrajectory& trajectory,
                                           const std::function<bool(std::size_t)>& accepted,
                                           double nominal_level) {
  ConfidenceSet set;
  set.nominal_level = nominal_level;
  bool open_run = false;
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    if (!accepted(s)) {
      open_run = false;
      continue;
    }
    const Interval seg = trajectory.segment_bounds(s);
    if (open_run) {
      set.intervals.back().hi = seg.hi;
    } else {
      set.intervals.push_back(seg);
      open_run = true;
    }
  }
  if (set.intervals.empty()) {
    throw FeasibilityError("no hypothesized shift is accepted; the data are too heavily tied");
  }
  set.is_interval = set.intervals.size() == 1;
  set.enclosing_interval = {set.intervals.front().lo, set.intervals.back().hi};
  return set;
}

}  // namespace qshift
