#pragma once

#include <vector>

#include "qshift/shift_table.hpp"

namespace fixture {

// Radiation-exposure example: controls x, exposed y.
inline const std::vector<double> kControl{3.2, 5.1, 8.3, 8.8, 9.5, 11.9, 14.0};
inline const std::vector<double> kTreated{3.7,  6.8,  8.4,  8.5,  10.0, 11.3, 12.0, 12.5,
                                          18.7, 19.0, 20.0, 22.7, 24.0, 31.8, 33.3, 36.0};

inline qshift::TwoSample example() { return qshift::TwoSample(kControl, kTreated); }

}  // namespace fixture
