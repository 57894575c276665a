#pragma once

#include <array>
#include <cmath>
#include <limits>

// Published 4-decimal values of D^(k), N^(k) and lambda^(k) for the
// birth-death chain with p = 0.3, k = 0..10. lambda^(0) is not defined (NaN).

namespace remest::reference {

struct TableRow {
  long k;
  double D;
  double N;
  double lambda;
};

struct PublishedTable {
  double beta;
  std::array<TableRow, 11> rows;
};

inline constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kBirthDeathP = 0.3;
inline constexpr double kTableTolerance = 5e-4;

inline const std::array<PublishedTable, 3>& birth_death_tables() {
  static const std::array<PublishedTable, 3> tables{{
      {0.9,
       {{{0, 0.0, 1.0, kNoValue},
         {1, 0.0, 0.5400, 1.0989},
         {2, 0.4576, 0.1236, 4.1021},
         {3, 0.7695, 0.0475, 9.2839},
         {4, 1.0066, 0.0220, 16.2509},
         {5, 1.1844, 0.0111, 24.4478},
         {6, 1.3130, 0.0058, 33.4121},
         {7, 1.4029, 0.0031, 42.8289},
         {8, 1.4638, 0.0017, 52.5042},
         {9, 1.5040, 0.0009, 62.3245},
         {10, 1.5298, 0.0005, 72.2255}}}},
      {0.95,
       {{{0, 0.0, 1.0, kNoValue},
         {1, 0.0, 0.5700, 1.1050},
         {2, 0.4790, 0.1365, 4.3657},
         {3, 0.8282, 0.0565, 10.6058},
         {4, 1.1218, 0.0288, 19.9550},
         {5, 1.3715, 0.0163, 32.0869},
         {6, 1.5811, 0.0098, 46.4727},
         {7, 1.7536, 0.0061, 62.5651},
         {8, 1.8927, 0.0039, 79.8921},
         {9, 2.0028, 0.0025, 98.0854},
         {10, 2.0884, 0.0016, 116.8739}}}},
      {1.0,
       {{{0, 0.0, 1.0, kNoValue},
         {1, 0.0, 0.6000, 1.1111},
         {2, 0.5000, 0.1500, 4.6667},
         {3, 0.8889, 0.0667, 12.3810},
         {4, 1.2500, 0.0375, 25.9259},
         {5, 1.6000, 0.0240, 46.9697},
         {6, 1.9444, 0.0167, 77.1795},
         {7, 2.2857, 0.0122, 118.2222},
         {8, 2.6250, 0.0094, 171.7647},
         {9, 2.9630, 0.0074, 239.4737},
         {10, 3.0000, 0.0060, 323.0159}}}},
  }};
  return tables;
}

}  // namespace remest::reference
