#pragma once

namespace qig::tol {

// Eigenvalues below rank_tol * lambda_max are treated as outside the support.
inline constexpr double kRankTol = 1e-12;

inline constexpr double kTrace = 1e-12;
inline constexpr double kPsdFloor = 1e-12;
inline constexpr double kTraceless = 1e-10;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kUnitary = 1e-12;
inline constexpr double kRldSupport = 1e-9;
inline constexpr double kReverseSld = 1e-9;
inline constexpr double kPovmCompleteness = 1e-10;
inline constexpr double kKrausCompleteness = 1e-10;
inline constexpr double kEnsembleNorm = 1e-12;
inline constexpr double kProbabilitySum = 1e-12;
inline constexpr double kScoreSum = 1e-10;
inline constexpr double kCandidateInvalid = 1e-6;
inline constexpr double kGlobalCommutator = 1e-8;
inline constexpr double kGlobalDiagonal = 1e-8;
inline constexpr double kDivergenceSupport = 1e-9;

}  // namespace qig::tol
