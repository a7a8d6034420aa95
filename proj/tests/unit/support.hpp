#pragma once

#include "phnls/model.hpp"
#include "phnls/samples.hpp"

#include <cmath>
#include <numbers>

namespace phnls::test {

inline ModelParams d2() { return {2, 1, Rational(3), -1}; }
inline ModelParams d3() { return {3, 1, Rational(3, 2), -1}; }

inline GridPtr grid2(int M = 32, int N = 128, double L = 20.0) { return Grid::make(M, {{N, L}}); }
inline GridPtr grid3(int M = 16, int N = 32, double L = 16.0) { return Grid::make(M, {{N, L}, {N, L}}); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// L² distance between two fields on the same grid.
inline double distance(const Field &a, const Field &b) { return (a - b).l2_norm(); }

} // namespace phnls::test
