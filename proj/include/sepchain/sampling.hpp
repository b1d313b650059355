#pragma once

#include <random>

#include "sepchain/system.hpp"

namespace sepchain {

// Draws a phase point from the standard box: q_1 in [0.5, 2], each angle in
// the central 80% of its first fundamental domain (0, pi/(2k)), p in [-2, 2]^n.
// Keeps the pair discriminants generically nonzero.
PhasePoint sample_point(const ChainSystem& sys, std::mt19937& rng);

std::vector<PhasePoint> sample_points(const ChainSystem& sys, int count, unsigned seed);

}  // namespace sepchain
