#pragma once

namespace lie {

// Numeric policy shared by every operation that classifies or rejects.
//
//   classify : decides sign classes of determinants and discriminants
//              (applied after spanning vectors are scaled to unit norm).
//   rank     : rank / singularity decisions (relative to the largest
//              singular value).
//   proper   : on-quadric tests, |(X|X)| <= proper * |X|^2, and the
//              oriented-contact test on pair products.
struct Tolerances {
  double classify = 1e-8;
  double rank = 1e-10;
  double proper = 1e-9;
};

}  // namespace lie
