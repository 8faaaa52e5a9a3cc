#pragma once

#include <vector>

#include "sobex/core.hpp"

namespace sobex {

// Multi-index alpha in N_0^n, n <= 3.
struct MultiIdx {
  std::array<int, 3> a{0, 0, 0};

  int order() const { return a[0] + a[1] + a[2]; }
  int operator[](int i) const { return a[i]; }
  bool operator==(const MultiIdx& o) const { return a == o.a; }
  bool operator<=(const MultiIdx& o) const {
    return a[0] <= o.a[0] && a[1] <= o.a[1] && a[2] <= o.a[2];
  }
  MultiIdx operator+(const MultiIdx& o) const { return {{a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2]}}; }
  MultiIdx operator-(const MultiIdx& o) const { return {{a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2]}}; }
};

inline double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

inline double factorial(const MultiIdx& m) {
  return factorial(m.a[0]) * factorial(m.a[1]) * factorial(m.a[2]);
}

// x^alpha
inline double pow_mi(const Pt& x, const MultiIdx& m) {
  double r = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < m.a[i]; ++j) r *= x[i];
  return r;
}

// All multi-indices with |alpha| <= max_order, graded (by order, then lex).
inline std::vector<MultiIdx> multi_indices(int n, int max_order) {
  std::vector<MultiIdx> out;
  for (int ord = 0; ord <= max_order; ++ord) {
    if (n == 1) {
      out.push_back({{ord, 0, 0}});
    } else if (n == 2) {
      for (int i = ord; i >= 0; --i) out.push_back({{i, ord - i, 0}});
    } else {
      for (int i = ord; i >= 0; --i)
        for (int j = ord - i; j >= 0; --j) out.push_back({{i, j, ord - i - j}});
    }
  }
  return out;
}

// Number of multi-indices with |alpha| <= k-1 (the jet component count).
inline int jet_components(int n, int k) {
  return static_cast<int>(multi_indices(n, k - 1).size());
}

}  // namespace sobex
