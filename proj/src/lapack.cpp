#include "lapack.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <string>

#include "fttc/error.hpp"

namespace fttc::linalg {

// A row-major m x n buffer is the column-major n x m transpose; both kernels
// factor that transpose and read the results back without copying.

void lq_rows(const Mat& a, Mat& l, Mat& q) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  const lapack_int rho = std::min(m, n);
  std::vector<cplx> buf(a.data(), a.data() + a.size());  // column-major n x m
  std::vector<cplx> tau(static_cast<std::size_t>(std::max(rho, 1)));
  lapack_int info = LAPACKE_zgeqrf(LAPACK_COL_MAJOR, n, m, buf.data(), n, tau.data());
  if (info != 0) throw_numerical("zgeqrf failed with info " + std::to_string(info));
  l = Mat::Zero(m, rho);
  for (lapack_int j = 0; j < m; ++j)
    for (lapack_int i = 0; i <= std::min(j, rho - 1); ++i)
      l(j, i) = buf[static_cast<std::size_t>(j) * n + i];
  info = LAPACKE_zungqr(LAPACK_COL_MAJOR, n, rho, rho, buf.data(), n, tau.data());
  if (info != 0) throw_numerical("zungqr failed with info " + std::to_string(info));
  q.resize(rho, n);
  std::copy_n(buf.data(), static_cast<std::size_t>(rho) * n, q.data());
}

void svd_thin(const Mat& a, Mat& u, std::vector<double>& s, Mat& vh) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  s.assign(static_cast<std::size_t>(k), 0.0);
  // Column-major factorization a^T = U' S V'^H gives a = conj(V') S U'^T:
  // the VT' buffer is u in row-major order and the U' buffer is vh.
  std::vector<cplx> buf(a.data(), a.data() + a.size());
  std::vector<cplx> uc(static_cast<std::size_t>(n) * k);
  std::vector<cplx> vtc(static_cast<std::size_t>(k) * m);
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', n, m, buf.data(), n, s.data(),
                                   uc.data(), n, vtc.data(), k);
  if (info > 0) {
    buf.assign(a.data(), a.data() + a.size());
    std::vector<double> superb(static_cast<std::size_t>(std::max(k - 1, 1)));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', n, m, buf.data(), n, s.data(), uc.data(),
                          n, vtc.data(), k, superb.data());
  }
  if (info != 0) throw_numerical("SVD failed with info " + std::to_string(info));
  u.resize(m, k);
  std::copy(vtc.begin(), vtc.end(), u.data());
  vh.resize(k, n);
  std::copy(uc.begin(), uc.end(), vh.data());
}

}  // namespace fttc::linalg
