#pragma once

#include <stdexcept>

#include "axivem/types.hpp"

namespace axivem {

// Isotropic material for axisymmetric elasticity. Stores both the
// engineering constants and the Lame pair; admissibility requires
// mu > 0 and lambda + 2 mu > 0.
template <typename Scalar>
struct Material {
  Scalar youngs_modulus;
  Scalar poisson_ratio;
  Scalar lame_lambda;
  Scalar lame_mu;
};

template <typename Scalar>
Material<Scalar> make_material(Scalar youngs, Scalar poisson) {
  if (!(youngs > Scalar(0)))
    throw std::invalid_argument("make_material: Young's modulus must be positive");
  if (!(poisson > Scalar(-1) && poisson < Scalar(0.5)))
    throw std::invalid_argument("make_material: Poisson ratio must lie in (-1, 0.5)");
  Material<Scalar> m;
  m.youngs_modulus = youngs;
  m.poisson_ratio = poisson;
  m.lame_lambda = youngs * poisson / ((Scalar(1) + poisson) * (Scalar(1) - Scalar(2) * poisson));
  m.lame_mu = youngs / (Scalar(2) * (Scalar(1) + poisson));
  return m;
}

template <typename Scalar>
Material<Scalar> material_from_lame(Scalar lambda, Scalar mu) {
  if (!(mu > Scalar(0)) || !(lambda + Scalar(2) * mu > Scalar(0)))
    throw std::invalid_argument("material_from_lame: requires mu > 0 and lambda + 2 mu > 0");
  Material<Scalar> m;
  m.lame_lambda = lambda;
  m.lame_mu = mu;
  m.youngs_modulus = mu * (Scalar(3) * lambda + Scalar(2) * mu) / (lambda + mu);
  m.poisson_ratio = lambda / (Scalar(2) * (lambda + mu));
  return m;
}

// 4x4 constitutive matrix acting on (eps_r, eps_z, gamma_rz, eps_theta)
// with engineering shear, so sigma_rz = mu * gamma_rz and eps' C eps is
// the energy density.
template <typename Scalar>
Mat4<Scalar> constitutive_matrix(const Material<Scalar>& m) {
  const Scalar l = m.lame_lambda;
  const Scalar mu = m.lame_mu;
  Mat4<Scalar> c = Mat4<Scalar>::Zero();
  c(0, 0) = c(1, 1) = c(3, 3) = l + Scalar(2) * mu;
  c(0, 1) = c(1, 0) = l;
  c(0, 3) = c(3, 0) = l;
  c(1, 3) = c(3, 1) = l;
  c(2, 2) = mu;
  return c;
}

}  // namespace axivem
