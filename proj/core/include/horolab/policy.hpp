#pragma once

namespace horolab {

/// Every numeric tolerance used by the library, in one place.
struct NumericPolicy {
  double construction = 1e-9;     // det / orthogonality / product checks
  double reconstruction = 1e-10;  // n*a*k against input, relative Frobenius
  double cartan_trace = 1e-12;
  double regularity = 1e-9;       // minimum gap between sorted Cartan entries
  double transversality = 1e-10;  // normalized minors for opposition
  double pivot_margin = 1e-12;    // relative pivots when reading off a chamber's unipotent
  double condition_warning = 1e12;
  double membership = 1e-7;       // block-triangularity test for flat membership
  double crossing = 1e-10;        // bisection width for horosphere crossings
  double flat_descent = 1e-12;    // gradient tolerance for flat / chamber distance
};

const NumericPolicy& default_policy();

}  // namespace horolab
