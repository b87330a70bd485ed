#pragma once

#include <array>
#include <cmath>

#include "axivem/types.hpp"

namespace axivem {

// Point/weight pair on the reference edge s in [0,1]; weights sum to 1,
// the edge length enters as the Jacobian at the call site.
template <typename Scalar>
struct EdgeQuadPoint {
  Scalar s;
  Scalar w;
};

template <typename Scalar>
constexpr std::array<EdgeQuadPoint<Scalar>, 1> edge_midpoint_rule() {
  return {{{Scalar(0.5), Scalar(1)}}};
}

// Two-point Gauss on [0,1], exact for polynomials of degree <= 3.
template <typename Scalar>
std::array<EdgeQuadPoint<Scalar>, 2> edge_gauss2_rule() {
  const Scalar d = Scalar(0.5) / std::sqrt(Scalar(3));
  return {{{Scalar(0.5) - d, Scalar(0.5)}, {Scalar(0.5) + d, Scalar(0.5)}}};
}

// An edge is "vertical" (constant radius) when the radial spread is
// negligible against the element diameter.
template <typename Scalar>
bool edge_is_vertical(Scalar r_a, Scalar r_b, Scalar diameter) {
  return std::abs(r_a - r_b) <= Scalar(1e-12) * diameter;
}

// Barycentric point/weight for triangle rules; weights sum to 1.
template <typename Scalar>
struct TriQuadPoint {
  Scalar l1, l2, l3;
  Scalar w;
};

// Six-point rule, exact for polynomials of degree <= 4.
template <typename Scalar>
std::array<TriQuadPoint<Scalar>, 6> tri_degree4_rule() {
  const Scalar a1 = Scalar(0.445948490915965);
  const Scalar b1 = Scalar(0.108103018168070);
  const Scalar w1 = Scalar(0.223381589678011);
  const Scalar a2 = Scalar(0.091576213509771);
  const Scalar b2 = Scalar(0.816847572980459);
  const Scalar w2 = Scalar(0.109951743655322);
  return {{{a1, a1, b1, w1},
           {a1, b1, a1, w1},
           {b1, a1, a1, w1},
           {a2, a2, b2, w2},
           {a2, b2, a2, w2},
           {b2, a2, a2, w2}}};
}

}  // namespace axivem
