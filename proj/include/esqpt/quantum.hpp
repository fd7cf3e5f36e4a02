#ifndef ESQPT_QUANTUM_HPP
#define ESQPT_QUANTUM_HPP

#include <Eigen/Sparse>
#include <array>
#include <complex>
#include <vector>

#include "esqpt/u3.hpp"

namespace esqpt::quantum {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;
using SparseD = Eigen::SparseMatrix<double>;

/// Fock states (n0, n1, n2) with n0 + n1 + n2 = N, ordered lexicographically
/// in (n1, n2). Size (N+1)(N+2)/2.
struct FockBasis {
  int N = 0;
  std::vector<std::array<int, 3>> states;

  static FockBasis build(int N);
  int size() const { return static_cast<int>(states.size()); }
  int index(int n1, int n2) const;  // inverse of the ordering
};

/// Hermitised u(3) bilinear Lambda_{kl} = i (B+_k B_l - B+_l B_k).
SparseC bilinear_op(const FockBasis& basis, int k, int l);

/// Hamiltonian (1-xi) C1[u(2)] - xi/(N+1) C2[o(3)] - eps D as a dense
/// complex Hermitian matrix (reference route, small N).
Eigen::MatrixXcd build_hamiltonian(const u3::U3Params& p, const FockBasis& basis);

/// Same operator in the i^{n0}-rotated basis where all matrix elements are
/// real; the production route for large N. Throws if the rotation leaves a
/// residual imaginary part above 1e-12.
SparseD build_hamiltonian_real(const u3::U3Params& p, const FockBasis& basis);

/// All eigenvalues of a Hermitian/symmetric matrix, ascending, divided by N.
std::vector<double> diagonalize(const Eigen::MatrixXcd& H, int N);
std::vector<double> diagonalize(const Eigen::MatrixXd& H, int N);

/// Full spectrum in per-excitation units. Splits the real-rotated matrix
/// into its two exact (-1)^{n1} parity blocks before the dense solve.
std::vector<double> full_spectrum(const u3::U3Params& p, const FockBasis& basis);

struct SpectrumBlock {
  int l = 0;          // |angular momentum| quantum number
  double ell = 0.0;   // l / N
  int dimension = 0;  // merged +-l dimension
  std::vector<double> energies;  // ascending, per excitation
};

/// Spectrum split into eigenspaces of l^2 = [i(B+_2 B_1 - B+_1 B_2)]^2,
/// labelled by ell = l/N >= 0 with +-l partners merged. Requires eps = 0
/// (l^2 is conserved only then); throws std::invalid_argument otherwise.
/// l^2 eigenvalues are grouped with tolerance 1e-8 relative to N^2.
std::vector<SpectrumBlock> l2_blocks(const u3::U3Params& p, const FockBasis& basis);

/// Frobenius norm of [H, l^2]; zero (to rounding) at eps = 0.
double l2_commutator_norm(const u3::U3Params& p, const FockBasis& basis);

}  // namespace esqpt::quantum

#endif
