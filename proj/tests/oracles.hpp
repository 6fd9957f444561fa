#pragma once

// Reference values computed with 40-digit arithmetic before the library was
// written. They are frozen here so the tests never check the library
// against itself.

namespace oracle {

struct CdfPoint {
  double z;
  double value;
};

inline constexpr CdfPoint kNormalCdf[] = {
    {-10.0, 7.619853024160526066e-24},
    {-8.0, 6.2209605742717841235e-16},
    {-6.0, 9.865876450376981407e-10},
    {-3.0, 0.0013498980316300945267},
    {-1.5, 0.066807201268858066004},
    {-0.5, 0.30853753872598689636},
    {0.3, 0.61791142218895263731},
    {1.0, 0.84134474606854294859},
    {2.5, 0.99379033467422386483},
    {5.0, 0.99999971334842812081},
    {8.0, 0.9999999999999993779},
};

inline constexpr double kN1 = 0.84134474606854294859;
inline constexpr double kN2Sqrt2 = 0.99766113250947636708;  // N(2 sqrt 2)
inline constexpr double kQuantile975 = 1.9599639845400542355;
inline constexpr double kQuantile1em10 = -6.3613409024040562047;

// Black-Scholes call, s0 = K = sigma = t = 1.
inline constexpr double kBsUnit = 0.38292492254802620728;
// Black-Scholes call, s0 = 1.3, K = 0.8, sigma = 0.4, t = 2.5.
inline constexpr double kBsGeneric = 0.57970175529581501371;

// 0.99 quantile of the Kolmogorov distribution.
inline constexpr double kKolmogorov99 = 1.62762361151895;

}  // namespace oracle
