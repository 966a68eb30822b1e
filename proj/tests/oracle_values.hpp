#pragma once

// Generated by tests/oracles/generate_oracles.py (mpmath, 50 digits). Do not edit.

namespace oracle {

inline constexpr double kGammaOneSixth = 5.5663160017802352043;
inline constexpr double kGammaMinusSevenHalves = 0.27008820585226910892;
inline constexpr double kGammaTwentyFivePointFive = 3.0867705405286967828e+24;
inline constexpr double kHyp2f1SixthSixthOneAt09 = 1.0429093895226967844;
inline constexpr double kHyp2f1Mixed = 1.2057486188513027146;
inline constexpr double kHyp2f1NearOne = 1.2903966533538381593;
inline constexpr double kKernelEll1 = 1.2414475848321984253;
inline constexpr double kAlphaEll1 = 1.1039378389068550007;
inline constexpr double kBetaEll1 = 0.59778783308195072901;
inline constexpr double kSeparableEll1At1 = 0.47544239234723279496;
inline constexpr double kAiryCauchyAt0p25 = 0.99739718937582980333;
inline constexpr double kAiryCauchyAt0p5 = 0.97925332166076000897;
inline constexpr double kAiryCauchyAt1 = 0.83881231016976479701;
inline constexpr double kK0CosEll1At1 = 0.83881231016976479701;
inline constexpr double kK1CosEll1AtHalf = 0.49480714614681645941;
inline constexpr double kSourceTermEll1At1 = 1.1547005383792515290;
inline constexpr double kSourceTermEll3At1 = 1.4682338875298918816;

} // namespace oracle
