#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fttc/quadrature.hpp"
#include "fttc/tensor_train.hpp"

namespace fttc {

inline constexpr std::size_t kDefaultBasisDegree = 32;
inline constexpr std::size_t kMultiplyDegreeCap = 64;
inline constexpr double kDegreeTailTol = 1e-12;

/// Orthonormal Legendre basis phi_0 .. phi_{p-1} on [a, b]:
/// phi_l(x) = sqrt((2l + 1) / (b - a)) P_l((2x - a - b) / (b - a)).
struct Basis {
  double a = -5.0;
  double b = 5.0;
  std::size_t p = kDefaultBasisDegree;

  double length() const noexcept { return b - a; }
  bool contains(double x) const noexcept { return x >= a && x <= b; }
  /// Same domain, different degree.
  Basis with_degree(std::size_t degree) const { return {a, b, degree}; }
  bool same_domain(const Basis& o) const noexcept { return a == o.a && b == o.b; }
  /// Throws unless b > a and p >= 1.
  void validate() const;

  /// phi_0(x) .. phi_{p-1}(x). Throws for x outside [a, b].
  std::vector<double> eval(double x) const;
};

/// Coefficient TT over per-dimension bases.
class FunctionTrain {
 public:
  FunctionTrain(std::vector<Basis> bases, TensorTrain coeffs);

  std::size_t order() const noexcept { return bases_.size(); }
  const std::vector<Basis>& bases() const noexcept { return bases_; }
  const Basis& basis(std::size_t k) const { return bases_.at(k); }
  const TensorTrain& coeffs() const noexcept { return coeffs_; }
  std::size_t max_rank() const { return coeffs_.max_rank(); }

 private:
  std::vector<Basis> bases_;
  TensorTrain coeffs_;
};

// ---- univariate basis tools ------------------------------------------------

/// Coefficients theta_l = sum_q w_q f(x_q) phi_l(x_q) from samples at the nodes
/// of `rule`, which must be a Gauss-Legendre rule on the basis domain with at
/// least p nodes.
std::vector<cplx> basis_project(const Basis& basis, const QuadratureRule& rule,
                                std::span<const cplx> samples);

/// Convenience overload sampling `f` on a q-point rule (q = 0 means 2p).
std::vector<cplx> basis_project(const Basis& basis,
                                const std::function<cplx(double)>& f,
                                std::size_t q = 0);

/// Value of sum_l coeffs[l] phi_l(x).
cplx basis_eval(const Basis& basis, std::span<const cplx> coeffs, double x);

/// Row-major p x p matrix mapping coefficients to those of the first or second
/// derivative.
std::vector<double> basis_diff_matrix(const Basis& basis, int order);

/// Gamma_l = integral of phi_l over [a, b]; only Gamma_0 = sqrt(b - a) is nonzero.
std::vector<double> basis_integrals(const Basis& basis);

/// Row-major p_out x basis.p matrix of the Galerkin product with g:
/// M[k][l] = integral of phi_k g phi_l, g given by coefficients on the same
/// domain. Exact when p_out >= basis.p + g_coeffs.size() - 1.
std::vector<cplx> basis_product_matrix(const Basis& basis, std::span<const cplx> g_coeffs,
                                       std::size_t p_out);

// ---- construction ------------------------------------------------------------

/// Rank-1 FT of prod_k f_k(x_k), each factor projected on its basis.
FunctionTrain ft_from_rank1(const std::vector<Basis>& bases,
                            const std::vector<std::function<cplx(double)>>& factors);

/// Constant function `value`, rank 1.
FunctionTrain ft_constant(const std::vector<Basis>& bases, cplx value);

// ---- operations --------------------------------------------------------------

cplx ft_eval(const FunctionTrain& f, std::span<const double> x);

/// Sum of two FTs on the same domains; differing degrees are zero-padded.
FunctionTrain ft_add(const FunctionTrain& f, const FunctionTrain& g);
FunctionTrain ft_scale(const FunctionTrain& f, cplx s);
FunctionTrain ft_conj(const FunctionTrain& f);

struct FtTerm {
  cplx weight;
  const FunctionTrain* function;
};

/// Block sum with zero-padding to the largest degree per dimension; no rounding.
FunctionTrain ft_lincomb(std::span<const FtTerm> terms);

/// Pointwise product projected on degree min(p_f + p_g - 1, p_cap) using
/// p_f + p_g Gauss-Legendre nodes, followed by tail truncation.
FunctionTrain ft_multiply(const FunctionTrain& f, const FunctionTrain& g,
                          std::size_t p_cap = kMultiplyDegreeCap);

/// Partial derivative of order 1 or 2 along dimension k.
FunctionTrain ft_diff(const FunctionTrain& f, std::size_t k, int order);

cplx ft_integrate(const FunctionTrain& f);

/// integral of conj(f) g by the running-matrix contraction.
cplx ft_inner(const FunctionTrain& f, const FunctionTrain& g);
/// integral of f g without conjugation.
cplx ft_bilinear(const FunctionTrain& f, const FunctionTrain& g);
double ft_norm(const FunctionTrain& f);

/// (-1/(2m)) sum_k d^2 f / dx_k^2, rounding after each accumulation.
FunctionTrain ft_laplacian(const FunctionTrain& f, double mass,
                           double tol = kDefaultRoundTol,
                           std::size_t rmax = kUnboundedRank);

FunctionTrain ft_round(const FunctionTrain& f, double tol,
                       std::size_t rmax = kUnboundedRank);

/// Drop trailing basis functions whose coefficient slice norm is at most
/// rel_tol times the core norm.
FunctionTrain ft_trim_degree(const FunctionTrain& f, double rel_tol = kDegreeTailTol);

/// Re-express every dimension on degree `p` (zero-pad or truncate).
FunctionTrain ft_resize_degree(const FunctionTrain& f, std::size_t p);
FunctionTrain ft_resize_degree(const FunctionTrain& f, std::span<const std::size_t> degrees);

// ---- FTC1 checkpoint format ----------------------------------------------------

inline constexpr std::uint8_t kFtcMagic[4] = {0x46, 0x54, 0x43, 0x31};

void ft_serialize(const FunctionTrain& f, std::ostream& out);
FunctionTrain ft_deserialize(std::istream& in);
void ft_save(const FunctionTrain& f, const std::string& path);
FunctionTrain ft_load(const std::string& path);

}  // namespace fttc
