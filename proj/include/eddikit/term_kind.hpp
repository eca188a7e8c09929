#pragma once

namespace eddikit {

// Candidate force shapes. H(0) = 0 throughout.
enum class TermKind : int {
  DispPower,                // x^i
  VelPower,                 // v^j
  MixedDispSqVel,           // x^2 v
  VelGateOneSided,          // v H(x - e)
  VelGateTwoSided,          // v H(|x| - e)
  ClearanceSpringOneSided,  // (x - e) H(x - e)
  ClearanceSpringTwoSided,  // (|x| - e) sgn(x) H(|x| - e)
};

}  // namespace eddikit
