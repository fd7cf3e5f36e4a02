#include "esqpt/quantum.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>

#include "esqpt/parallel.hpp"

namespace esqpt::quantum {

namespace {

using Triplet = Eigen::Triplet<std::complex<double>>;

/// Eigenvalues of a dense real symmetric matrix via LAPACK dsyevd
/// (divide and conquer); the matrix is consumed as workspace.
std::vector<double> dsyevd_eigenvalues(Eigen::MatrixXd A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  std::vector<double> w(n);
  if (n == 0) return w;
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, A.data(), n, w.data());
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
  return w;
}

}  // namespace

FockBasis FockBasis::build(int N) {
  if (N < 0) throw std::invalid_argument("boson number must be non-negative");
  FockBasis b;
  b.N = N;
  b.states.reserve((N + 1) * (N + 2) / 2);
  for (int n1 = 0; n1 <= N; ++n1)
    for (int n2 = 0; n2 <= N - n1; ++n2) b.states.push_back({N - n1 - n2, n1, n2});
  return b;
}

int FockBasis::index(int n1, int n2) const {
  // states with first component < n1 come first, then n2 within the block
  return n1 * (N + 1) - n1 * (n1 - 1) / 2 + n2;
}

SparseC bilinear_op(const FockBasis& basis, int k, int l) {
  if (k == l || k < 0 || l < 0 || k > 2 || l > 2)
    throw std::invalid_argument("bilinear indices must be distinct in {0,1,2}");
  std::vector<Triplet> trip;
  trip.reserve(2 * basis.states.size());
  const std::complex<double> I(0.0, 1.0);
  for (int i = 0; i < basis.size(); ++i) {
    const auto n = basis.states[i];
    // +i B+_k B_l and -i B+_l B_k
    for (auto [a, b, amp] : {std::tuple{k, l, I}, std::tuple{l, k, -I}}) {
      if (n[b] == 0) continue;
      auto m = n;
      --m[b];
      ++m[a];
      trip.emplace_back(basis.index(m[1], m[2]), i,
                        amp * std::sqrt(double(n[a] + 1) * double(n[b])));
    }
  }
  SparseC M(basis.size(), basis.size());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

namespace {

SparseC assemble_hamiltonian(const u3::U3Params& p, const FockBasis& basis) {
  const SparseC L01 = bilinear_op(basis, 0, 1);
  const SparseC L02 = bilinear_op(basis, 0, 2);
  const SparseC L12 = bilinear_op(basis, 1, 2);
  SparseC C1(basis.size(), basis.size());
  {
    std::vector<Triplet> trip;
    for (int i = 0; i < basis.size(); ++i)
      trip.emplace_back(i, i, double(basis.states[i][1] + basis.states[i][2]));
    C1.setFromTriplets(trip.begin(), trip.end());
  }
  const SparseC C2 = (L01 * L01 + L02 * L02 + L12 * L12).eval();
  return ((1.0 - p.xi) * C1 - (p.xi / (basis.N + 1)) * C2 - p.eps * L02).eval();
}

}  // namespace

Eigen::MatrixXcd build_hamiltonian(const u3::U3Params& p, const FockBasis& basis) {
  Eigen::MatrixXcd H = Eigen::MatrixXcd(assemble_hamiltonian(p, basis));
  const double defect = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12) throw std::runtime_error("assembled Hamiltonian is not Hermitian");
  return H;
}

SparseD build_hamiltonian_real(const u3::U3Params& p, const FockBasis& basis) {
  SparseC H = assemble_hamiltonian(p, basis);
  // conjugate by diag(i^{n0}): dipole links change n0 by one, which turns
  // their +-i amplitudes real; all other couplings change n0 by 0 or 2
  std::vector<std::complex<double>> phase(basis.size());
  static const std::complex<double> kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < basis.size(); ++i) phase[i] = kPow[basis.states[i][0] % 4];

  SparseD out(basis.size(), basis.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(H.nonZeros());
  for (int col = 0; col < H.outerSize(); ++col) {
    for (SparseC::InnerIterator it(H, col); it; ++it) {
      const std::complex<double> v = phase[it.row()] * it.value() * std::conj(phase[col]);
      if (std::abs(v.imag()) > 1e-12)
        throw std::runtime_error("phase rotation left an imaginary matrix element");
      if (v.real() != 0.0) trip.emplace_back(it.row(), col, v.real());
    }
  }
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

std::vector<double> diagonalize(const Eigen::MatrixXcd& H, int N) {
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, H.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  std::vector<double> w(es.eigenvalues().data(), es.eigenvalues().data() + H.rows());
  for (auto& x : w) x /= N;
  return w;
}

std::vector<double> diagonalize(const Eigen::MatrixXd& H, int N) {
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, H.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("matrix is not symmetric");
  std::vector<double> w = dsyevd_eigenvalues(H);
  for (auto& x : w) x /= N;
  return w;
}

std::vector<double> full_spectrum(const u3::U3Params& p, const FockBasis& basis) {
  const SparseD H = build_hamiltonian_real(p, basis);

  // exact block structure: every coupling changes n1 by 0 or 2
  std::vector<int> sel[2];
  for (int i = 0; i < basis.size(); ++i) sel[basis.states[i][1] % 2].push_back(i);

  std::vector<double> all;
  all.reserve(basis.size());
  for (const auto& ids : sel) {
    const int n = static_cast<int>(ids.size());
    std::vector<int> where(basis.size(), -1);
    for (int t = 0; t < n; ++t) where[ids[t]] = t;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (int col = 0; col < H.outerSize(); ++col) {
      if (where[col] < 0) continue;
      for (SparseD::InnerIterator it(H, col); it; ++it) {
        if (where[it.row()] >= 0) B(where[it.row()], where[col]) = it.value();
      }
    }
    auto w = dsyevd_eigenvalues(std::move(B));
    all.insert(all.end(), w.begin(), w.end());
  }
  std::sort(all.begin(), all.end());
  for (auto& x : all) x /= basis.N;
  return all;
}

std::vector<SpectrumBlock> l2_blocks(const u3::U3Params& p, const FockBasis& basis) {
  if (p.eps != 0.0)
    throw std::invalid_argument("l^2 is conserved only at eps = 0");
  const int N = basis.N;
  const int dim = basis.size();

  // l^2 conserves n0, so its eigenvectors are found sector by sector; within
  // the sector with M = N - n0 quanta the operator is a real symmetric
  // (M+1)-dimensional matrix with eigenvalues {M^2, (M-2)^2, ...}
  const SparseD H = build_hamiltonian_real(p, basis);

  std::map<int, std::vector<std::pair<std::vector<int>, Vec>>> eigvecs;  // l -> sector vectors
  const double group_tol = 1e-8 * std::max(1.0, double(N) * double(N));
  for (int n0 = 0; n0 <= N; ++n0) {
    const int M = N - n0;
    std::vector<int> ids(M + 1);
    for (int m = 0; m <= M; ++m) ids[m] = basis.index(M - m, m);  // (n1, n2) = (M-m, m)
    // Lambda_12 restricted to the sector is tridiagonal; its square is real
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M + 1, M + 1);
    auto hop = [&](int m) { return std::sqrt(double(m + 1) * double(M - m)); };  // <m+1|B+2 B1|m> amplitude
    // Lambda^2 = -(B+2B1 - B+1B2)^2 expanded on the tridiagonal structure
    for (int m = 0; m <= M; ++m) {
      const double up = m < M ? hop(m) : 0.0;     // to m+1
      const double dn = m > 0 ? hop(m - 1) : 0.0;  // to m-1
      A(m, m) = up * up + dn * dn;
      if (m + 2 <= M) {
        const double v = -hop(m) * hop(m + 1);
        A(m, m + 2) = v;
        A(m + 2, m) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    for (int t = 0; t <= M; ++t) {
      const double l2val = std::max(es.eigenvalues()[t], 0.0);
      const int l = static_cast<int>(std::lround(std::sqrt(l2val)));
      if (std::abs(double(l) * double(l) - l2val) > group_tol)
        throw std::runtime_error("l^2 eigenvalue is not close to an integer square");
      eigvecs[l].push_back({ids, es.eigenvectors().col(t)});
    }
  }

  std::vector<SpectrumBlock> blocks;
  for (const auto& [l, vecs] : eigvecs) {
    const int d = static_cast<int>(vecs.size());
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(dim, d);
    for (int c = 0; c < d; ++c)
      for (std::size_t r = 0; r < vecs[c].first.size(); ++r)
        V(vecs[c].first[r], c) = vecs[c].second[static_cast<int>(r)];
    const Eigen::MatrixXd Hb = V.transpose() * (H * V);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Hb + Hb.transpose()),
                                                      Eigen::EigenvaluesOnly);
    SpectrumBlock blk;
    blk.l = l;
    blk.ell = double(l) / N;
    blk.dimension = d;
    blk.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
    for (auto& e : blk.energies) e /= N;
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

double l2_commutator_norm(const u3::U3Params& p, const FockBasis& basis) {
  const SparseC L12 = bilinear_op(basis, 1, 2);
  const SparseC l2 = (L12 * L12).eval();
  const Eigen::MatrixXcd H = build_hamiltonian(p, basis);
  const Eigen::MatrixXcd C = H * l2 - Eigen::MatrixXcd(l2) * H;
  return C.norm();
}

}  // namespace esqpt::quantum
