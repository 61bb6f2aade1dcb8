#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "mfs/potential.hpp"
#include "mfs/sft.hpp"

namespace mfs::test {

inline double golden_ratio() { return (1.0 + std::sqrt(5.0)) / 2.0; }

inline double binary_entropy(double a) {
  if (a <= 0.0 || a >= 1.0) return 0.0;
  return -a * std::log(a) - (1.0 - a) * std::log(1.0 - a);
}

// log(1 + e^t) without overflow.
inline double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

inline Potential first_symbol(const Sft& sft) {
  return Potential::from_function(sft, 1, [](std::span<const Symbol> w) { return static_cast<double>(w[0]); });
}

// -1 on the cylinder [11], 0 elsewhere.
inline Potential minus_eleven(const Sft& sft) {
  return Potential::from_function(sft, 2, [](std::span<const Symbol> w) { return w[0] == 1 && w[1] == 1 ? -1.0 : 0.0; });
}

inline Sft three_symbol_sft() { return build_sft(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}); }

// a^n by repeated multiplication.
inline std::vector<std::vector<double>> matrix_power(const std::vector<std::vector<double>>& a, int n) {
  const std::size_t size = a.size();
  std::vector<std::vector<double>> out(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) out[i][i] = 1.0;
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<double>> next(size, std::vector<double>(size, 0.0));
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t l = 0; l < size; ++l)
        for (std::size_t j = 0; j < size; ++j) next[i][j] += out[i][l] * a[l][j];
    out = std::move(next);
  }
  return out;
}

}  // namespace mfs::test
