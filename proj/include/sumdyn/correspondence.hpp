#pragma once

#include <vector>

#include "sumdyn/dynamics.hpp"
#include "sumdyn/rational.hpp"
#include "sumdyn/sets.hpp"

namespace sumdyn {

// Output of the finite-scale correspondence construction: the left shift on
// 0/1 sequences, the indicator point of the set, and the first-symbol
// cylinder, wired so that n is in A exactly when T^n a lies in E.
struct SymbolicModel {
    DynamicalSystem system;
    StatePoint point;     // a
    OpenRegion cylinder;  // E = {x : x(1) = 1}, a clopen ball of radius 1/2
    std::uint64_t usable_horizon = 0;
};

// Builds the symbolic model for A and exhaustively checks the equivalence
//   n in A  <=>  T^n a in E   for all n = 1..horizon
// before returning. Indexing convention: a(n+1) = 1 iff n in A, so a(1) = 0.
SymbolicModel build_symbolic(const NaturalSet& a);

struct GenericWindow {
    FolnerWindow window;
    Rational density;
};

// Interval windows of geometrically spaced lengths, each placed where the
// window density of A is maximal (first such placement).
std::vector<GenericWindow> select_generic_windows(const NaturalSet& a, int count);

} // namespace sumdyn
