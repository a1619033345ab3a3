#pragma once

#include "cpnf/dielectric.hpp"

namespace cpnf {

/// Infinite circular cylinder in a homogeneous surrounding medium.
struct FiberGeometry {
  double radius = 200e-9;  // m
  PermittivityModel eps_inner = PermittivityModel::constant(2.1);
  PermittivityModel eps_outer = PermittivityModel::constant(1.0);

  /// Throws DomainError unless radius > 0.
  void validate() const;
};

/// The same cylinder with both permittivities already evaluated at one
/// frequency.  This is what the Green-tensor kernels work with.
struct CylinderAt {
  double radius = 0.0;
  complex eps_inner;
  complex eps_outer;
};

}  // namespace cpnf
