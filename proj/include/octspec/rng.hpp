#pragma once

#include <cstdint>
#include <random>

#include "octspec/cdnum.hpp"
#include "octspec/hmodule.hpp"

namespace octspec {

// Seeded generator for reproducible test data.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }

  CdNumber cd(int level, double scale = 1.0) {
    CdNumber a(level);
    for (int j = 0; j < a.size(); ++j) a[j] = uniform(-scale, scale);
    return a;
  }

  CdNumber unit_cd(int level) {
    CdNumber a = cd(level);
    while (a.norm() < 1e-6) a = cd(level);
    a *= 1.0 / a.norm();
    return a;
  }

  ModuleVector vector(int level, int dim, double scale = 1.0) {
    ModuleVector x(level, dim);
    for (double& c : x.flat()) c = uniform(-scale, scale);
    return x;
  }

  ModuleVector unit_vector(int level, int dim) {
    ModuleVector x = vector(level, dim);
    while (x.norm() < 1e-6) x = vector(level, dim);
    x *= 1.0 / x.norm();
    return x;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace octspec
