#pragma once

namespace fluxon {

/// Magnetic flux quantum h/2e, webers.
inline constexpr double kPhi0 = 2.068e-15;

inline constexpr double kPi = 3.14159265358979323846;

/// Seconds per picosecond. All event times in the toolkit are picoseconds.
inline constexpr double kPicosecond = 1e-12;

/// Two events on one node closer than this (ps) are the same event.
inline constexpr double kDuplicateTolerancePs = 1e-3;

}  // namespace fluxon
