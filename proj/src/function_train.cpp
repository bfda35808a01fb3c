#include "fttc/function_train.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <string>

#include "byte_io.hpp"
#include "fttc/error.hpp"
#include "linalg.hpp"

namespace fttc {

using linalg::Mat;

namespace {

using RealMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_same_domains(const FunctionTrain& f, const FunctionTrain& g, const char* op) {
  if (f.order() != g.order()) throw_invalid(std::string(op) + ": dimension count mismatch");
  for (std::size_t k = 0; k < f.order(); ++k) {
    if (!f.basis(k).same_domain(g.basis(k))) {
      throw_invalid(std::string(op) + ": basis domain mismatch in dimension " +
                    std::to_string(k));
    }
  }
}

/// Core with its mode resized to p: zero-padded or truncated.
TtCore resize_mode(const TtCore& c, std::size_t p) {
  if (p == c.mode()) return c;
  TtCore out(c.left(), p, c.right());
  const std::size_t keep = std::min(p, c.mode());
  for (std::size_t i = 0; i < c.left(); ++i)
    for (std::size_t l = 0; l < keep; ++l)
      for (std::size_t j = 0; j < c.right(); ++j) out(i, l, j) = c(i, l, j);
  return out;
}

/// q x p matrix of phi_l at the rule nodes.
RealMat eval_matrix(const Basis& basis, const QuadratureRule& rule) {
  RealMat m(static_cast<Eigen::Index>(rule.size()), static_cast<Eigen::Index>(basis.p));
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto phi = basis.eval(rule.nodes[q]);
    for (std::size_t l = 0; l < basis.p; ++l) {
      m(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(l)) = phi[l];
    }
  }
  return m;
}

/// Running contraction shared by ft_inner and ft_bilinear.
cplx contract(const FunctionTrain& f, const FunctionTrain& g, bool conjugate) {
  require_same_domains(f, g, conjugate ? "ft_inner" : "ft_bilinear");
  Mat v = Mat::Ones(1, 1);
  for (std::size_t k = 0; k < f.order(); ++k) {
    const TtCore& a = f.coeffs().core(k);
    const TtCore& b = g.coeffs().core(k);
    const std::size_t p = std::min(a.mode(), b.mode());
    Mat next = Mat::Zero(static_cast<Eigen::Index>(a.right()),
                         static_cast<Eigen::Index>(b.right()));
    for (std::size_t l = 0; l < p; ++l) {
      if (conjugate) {
        next.noalias() += linalg::slice(a, l).adjoint() * v * linalg::slice(b, l);
      } else {
        next.noalias() += linalg::slice(a, l).transpose() * v * linalg::slice(b, l);
      }
    }
    v = std::move(next);
  }
  return v(0, 0);
}

}  // namespace

// ---- Basis ------------------------------------------------------------------------

void Basis::validate() const {
  if (!(b > a)) throw_invalid("basis domain requires b > a");
  if (p < 1) throw_invalid("basis degree must be at least 1");
}

std::vector<double> Basis::eval(double x) const {
  if (!contains(x)) {
    throw_invalid("point " + std::to_string(x) + " outside basis domain [" +
                  std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  const double len = length();
  std::vector<double> phi = legendre_values(p, (2.0 * x - a - b) / len);
  for (std::size_t l = 0; l < p; ++l) {
    phi[l] *= std::sqrt((2.0 * static_cast<double>(l) + 1.0) / len);
  }
  return phi;
}

FunctionTrain::FunctionTrain(std::vector<Basis> bases, TensorTrain coeffs)
    : bases_(std::move(bases)), coeffs_(std::move(coeffs)) {
  if (bases_.size() != coeffs_.order()) {
    throw_invalid("function train: basis count does not match the coefficient order");
  }
  for (std::size_t k = 0; k < bases_.size(); ++k) {
    bases_[k].validate();
    if (bases_[k].p != coeffs_.core(k).mode()) {
      throw_invalid("function train: degree of dimension " + std::to_string(k) +
                    " does not match its coefficient mode size");
    }
  }
}

// ---- univariate tools ---------------------------------------------------------------

std::vector<cplx> basis_project(const Basis& basis, const QuadratureRule& rule,
                                std::span<const cplx> samples) {
  basis.validate();
  if (rule.size() < basis.p) {
    throw_invalid("basis_project: quadrature order " + std::to_string(rule.size()) +
                  " is below the basis degree " + std::to_string(basis.p));
  }
  if (samples.size() != rule.size()) {
    throw_invalid("basis_project: sample count does not match the quadrature rule");
  }
  std::vector<cplx> theta(basis.p);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto phi = basis.eval(rule.nodes[q]);
    const cplx wf = rule.weights[q] * samples[q];
    for (std::size_t l = 0; l < basis.p; ++l) theta[l] += wf * phi[l];
  }
  return theta;
}

std::vector<cplx> basis_project(const Basis& basis, const std::function<cplx(double)>& f,
                                std::size_t q) {
  basis.validate();
  if (q == 0) q = 2 * basis.p;
  const QuadratureRule rule = gauss_legendre(q, basis.a, basis.b);
  std::vector<cplx> samples(q);
  for (std::size_t i = 0; i < q; ++i) samples[i] = f(rule.nodes[i]);
  return basis_project(basis, rule, samples);
}

cplx basis_eval(const Basis& basis, std::span<const cplx> coeffs, double x) {
  if (coeffs.size() != basis.p) throw_invalid("basis_eval: coefficient count mismatch");
  const auto phi = basis.eval(x);
  cplx s = 0.0;
  for (std::size_t l = 0; l < basis.p; ++l) s += coeffs[l] * phi[l];
  return s;
}

std::vector<double> basis_diff_matrix(const Basis& basis, int order) {
  basis.validate();
  if (order != 1 && order != 2) throw_invalid("basis_diff_matrix: order must be 1 or 2");
  const auto p = static_cast<Eigen::Index>(basis.p);
  RealMat d1 = RealMat::Zero(p, p);
  const double scale = 2.0 / basis.length();
  for (Eigen::Index l = 0; l < p; ++l) {
    for (Eigen::Index k = l - 1; k >= 0; k -= 2) {
      d1(k, l) = scale * std::sqrt(static_cast<double>((2 * l + 1) * (2 * k + 1)));
    }
  }
  RealMat d = order == 1 ? d1 : RealMat(d1 * d1);
  return {d.data(), d.data() + d.size()};
}

std::vector<double> basis_integrals(const Basis& basis) {
  basis.validate();
  std::vector<double> gamma(basis.p, 0.0);
  gamma[0] = std::sqrt(basis.length());
  return gamma;
}

std::vector<cplx> basis_product_matrix(const Basis& basis, std::span<const cplx> g_coeffs,
                                       std::size_t p_out) {
  basis.validate();
  if (g_coeffs.empty() || p_out == 0) {
    throw_invalid("basis_product_matrix: empty factor or output degree");
  }
  const Basis gb = basis.with_degree(g_coeffs.size());
  const Basis ob = basis.with_degree(p_out);
  const std::size_t q = basis.p + g_coeffs.size() + p_out;
  const QuadratureRule rule = gauss_legendre((q + 1) / 2 + 1, basis.a, basis.b);
  std::vector<cplx> m(p_out * basis.p);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i];
    const cplx gw = rule.weights[i] * basis_eval(gb, g_coeffs, x);
    const auto in = basis.eval(x);
    const auto out = ob.eval(x);
    for (std::size_t k = 0; k < p_out; ++k)
      for (std::size_t l = 0; l < basis.p; ++l) m[k * basis.p + l] += gw * out[k] * in[l];
  }
  return m;
}

// ---- construction ---------------------------------------------------------------------

FunctionTrain ft_from_rank1(const std::vector<Basis>& bases,
                            const std::vector<std::function<cplx(double)>>& factors) {
  if (bases.empty()) throw_invalid("ft_from_rank1: no dimensions");
  if (factors.size() != bases.size()) throw_invalid("ft_from_rank1: factor count mismatch");
  std::vector<std::vector<cplx>> coeffs;
  for (std::size_t k = 0; k < bases.size(); ++k) {
    coeffs.push_back(basis_project(bases[k], factors[k]));
  }
  return FunctionTrain(bases, tt_from_rank1(coeffs));
}

FunctionTrain ft_constant(const std::vector<Basis>& bases, cplx value) {
  if (bases.empty()) throw_invalid("ft_constant: no dimensions");
  std::vector<std::vector<cplx>> coeffs;
  for (std::size_t k = 0; k < bases.size(); ++k) {
    bases[k].validate();
    std::vector<cplx> c(bases[k].p, 0.0);
    c[0] = std::sqrt(bases[k].length()) * (k == 0 ? value : cplx{1.0, 0.0});
    coeffs.push_back(std::move(c));
  }
  return FunctionTrain(bases, tt_from_rank1(coeffs));
}

// ---- operations -----------------------------------------------------------------------

cplx ft_eval(const FunctionTrain& f, std::span<const double> x) {
  if (x.size() != f.order()) throw_invalid("ft_eval: point has wrong dimension");
  Mat v = Mat::Ones(1, 1);
  for (std::size_t k = 0; k < f.order(); ++k) {
    const auto phi = f.basis(k).eval(x[k]);
    const TtCore& c = f.coeffs().core(k);
    Mat m = Mat::Zero(static_cast<Eigen::Index>(c.left()), static_cast<Eigen::Index>(c.right()));
    for (std::size_t l = 0; l < c.mode(); ++l) m += phi[l] * linalg::slice(c, l);
    v = v * m;
  }
  return v(0, 0);
}

FunctionTrain ft_lincomb(std::span<const FtTerm> terms) {
  if (terms.empty()) throw_invalid("ft_lincomb: no terms");
  const FunctionTrain& first = *terms.front().function;
  std::vector<Basis> bases = first.bases();
  for (const auto& t : terms) {
    require_same_domains(first, *t.function, "ft_lincomb");
    for (std::size_t k = 0; k < bases.size(); ++k) {
      bases[k].p = std::max(bases[k].p, t.function->basis(k).p);
    }
  }
  std::vector<TensorTrain> padded;
  padded.reserve(terms.size());
  for (const auto& t : terms) {
    std::vector<TtCore> cores;
    for (std::size_t k = 0; k < bases.size(); ++k) {
      cores.push_back(resize_mode(t.function->coeffs().core(k), bases[k].p));
    }
    padded.emplace_back(std::move(cores));
  }
  std::vector<TtTerm> tt_terms;
  for (std::size_t i = 0; i < terms.size(); ++i) tt_terms.push_back({terms[i].weight, &padded[i]});
  return FunctionTrain(std::move(bases), tt_lincomb(tt_terms));
}

FunctionTrain ft_add(const FunctionTrain& f, const FunctionTrain& g) {
  const FtTerm terms[] = {{1.0, &f}, {1.0, &g}};
  return ft_lincomb(terms);
}

FunctionTrain ft_scale(const FunctionTrain& f, cplx s) {
  return FunctionTrain(f.bases(), tt_scale(f.coeffs(), s));
}

FunctionTrain ft_conj(const FunctionTrain& f) {
  return FunctionTrain(f.bases(), tt_conj(f.coeffs()));
}

FunctionTrain ft_multiply(const FunctionTrain& f, const FunctionTrain& g, std::size_t p_cap) {
  require_same_domains(f, g, "ft_multiply");
  if (p_cap == 0) throw_invalid("ft_multiply: degree cap must be positive");
  std::vector<Basis> bases;
  std::vector<TtCore> cores;
  for (std::size_t k = 0; k < f.order(); ++k) {
    const Basis& bf = f.basis(k);
    const Basis& bg = g.basis(k);
    const std::size_t p_out = std::min(bf.p + bg.p - 1, p_cap);
    const Basis bo = bf.with_degree(p_out);
    const QuadratureRule rule = gauss_legendre(bf.p + bg.p, bf.a, bf.b);
    const auto nq = static_cast<Eigen::Index>(rule.size());
    const RealMat phi_f = eval_matrix(bf, rule);
    const RealMat phi_g = eval_matrix(bg, rule);
    RealMat proj = eval_matrix(bo, rule).transpose();  // p_out x q
    for (Eigen::Index q = 0; q < nq; ++q) proj.col(q) *= rule.weights[static_cast<std::size_t>(q)];
    const Mat proj_c = proj.cast<cplx>();

    const TtCore& a = f.coeffs().core(k);
    const TtCore& b = g.coeffs().core(k);
    auto values = [&](const TtCore& c, const RealMat& phi) {
      std::vector<Mat> v;
      for (std::size_t i = 0; i < c.left(); ++i) {
        linalg::ConstMapMat ci(c.data().data() + i * c.mode() * c.right(),
                               static_cast<Eigen::Index>(c.mode()),
                               static_cast<Eigen::Index>(c.right()));
        v.push_back(phi.cast<cplx>() * ci);  // q x right
      }
      return v;
    };
    const auto va = values(a, phi_f);
    const auto vb = values(b, phi_g);
    const std::size_t rl = a.left() * b.left();
    const std::size_t rr = a.right() * b.right();
    TtCore out(rl, p_out, rr);
    Mat prod(nq, static_cast<Eigen::Index>(rr));
    for (std::size_t i = 0; i < a.left(); ++i) {
      for (std::size_t i2 = 0; i2 < b.left(); ++i2) {
        for (std::size_t j = 0; j < a.right(); ++j)
          for (std::size_t j2 = 0; j2 < b.right(); ++j2)
            prod.col(static_cast<Eigen::Index>(j * b.right() + j2)) =
                va[i].col(static_cast<Eigen::Index>(j)).cwiseProduct(
                    vb[i2].col(static_cast<Eigen::Index>(j2)));
        const Mat block = proj_c * prod;  // p_out x rr
        for (std::size_t l = 0; l < p_out; ++l)
          for (std::size_t j = 0; j < rr; ++j)
            out(i * b.left() + i2, l, j) =
                block(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
      }
    }
    bases.push_back(bo);
    cores.push_back(std::move(out));
  }
  return ft_trim_degree(FunctionTrain(std::move(bases), TensorTrain(std::move(cores))));
}

FunctionTrain ft_diff(const FunctionTrain& f, std::size_t k, int order) {
  if (k >= f.order()) throw_invalid("ft_diff: dimension index out of range");
  const Basis& basis = f.basis(k);
  const std::vector<double> d = basis_diff_matrix(basis, order);
  const std::size_t p = basis.p;
  TensorTrain coeffs = tt_mode_apply(f.coeffs(), k, [&](std::span<cplx> v) {
    std::vector<cplx> in(v.begin(), v.end());
    for (std::size_t r = 0; r < p; ++r) {
      cplx s = 0.0;
      for (std::size_t c = r + 1; c < p; ++c) s += d[r * p + c] * in[c];
      v[r] = s;
    }
  });
  return FunctionTrain(f.bases(), std::move(coeffs));
}

cplx ft_integrate(const FunctionTrain& f) {
  Mat v = Mat::Ones(1, 1);
  for (std::size_t k = 0; k < f.order(); ++k) {
    const auto gamma = basis_integrals(f.basis(k));
    v = v * (gamma[0] * linalg::slice(f.coeffs().core(k), 0));
  }
  return v(0, 0);
}

cplx ft_inner(const FunctionTrain& f, const FunctionTrain& g) { return contract(f, g, true); }

cplx ft_bilinear(const FunctionTrain& f, const FunctionTrain& g) {
  return contract(f, g, false);
}

double ft_norm(const FunctionTrain& f) { return tt_norm(f.coeffs()); }

FunctionTrain ft_laplacian(const FunctionTrain& f, double mass, double tol, std::size_t rmax) {
  if (!(mass > 0.0)) throw_invalid("ft_laplacian: mass must be positive");
  FunctionTrain acc = ft_diff(f, 0, 2);
  for (std::size_t k = 1; k < f.order(); ++k) {
    acc = ft_round(ft_add(acc, ft_diff(f, k, 2)), tol, rmax);
  }
  return ft_scale(acc, -0.5 / mass);
}

FunctionTrain ft_round(const FunctionTrain& f, double tol, std::size_t rmax) {
  return FunctionTrain(f.bases(), tt_round(f.coeffs(), tol, rmax));
}

FunctionTrain ft_trim_degree(const FunctionTrain& f, double rel_tol) {
  std::vector<Basis> bases = f.bases();
  std::vector<TtCore> cores;
  for (std::size_t k = 0; k < f.order(); ++k) {
    const TtCore& c = f.coeffs().core(k);
    std::vector<double> slice_sq(c.mode(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < c.left(); ++i)
      for (std::size_t l = 0; l < c.mode(); ++l)
        for (std::size_t j = 0; j < c.right(); ++j) slice_sq[l] += std::norm(c(i, l, j));
    for (double s : slice_sq) total += s;
    const double threshold = rel_tol * std::sqrt(total);
    std::size_t p = c.mode();
    while (p > 1 && std::sqrt(slice_sq[p - 1]) <= threshold) --p;
    bases[k].p = p;
    cores.push_back(resize_mode(c, p));
  }
  return FunctionTrain(std::move(bases), TensorTrain(std::move(cores)));
}

FunctionTrain ft_resize_degree(const FunctionTrain& f, std::size_t p) {
  const std::vector<std::size_t> degrees(f.order(), p);
  return ft_resize_degree(f, degrees);
}

FunctionTrain ft_resize_degree(const FunctionTrain& f, std::span<const std::size_t> degrees) {
  if (degrees.size() != f.order()) throw_invalid("ft_resize_degree: one degree per dimension");
  std::vector<Basis> bases = f.bases();
  std::vector<TtCore> cores;
  for (std::size_t k = 0; k < f.order(); ++k) {
    if (degrees[k] == 0) throw_invalid("ft_resize_degree: degree must be positive");
    bases[k].p = degrees[k];
    cores.push_back(resize_mode(f.coeffs().core(k), degrees[k]));
  }
  return FunctionTrain(std::move(bases), TensorTrain(std::move(cores)));
}

// ---- FTC1 ------------------------------------------------------------------------------

void ft_serialize(const FunctionTrain& f, std::ostream& out) {
  out.write(reinterpret_cast<const char*>(kFtcMagic), 4);
  byte_io::put_le(out, static_cast<std::uint32_t>(f.order()));
  for (const Basis& b : f.bases()) {
    byte_io::put_f64(out, b.a);
    byte_io::put_f64(out, b.b);
    byte_io::put_le(out, static_cast<std::uint64_t>(b.p));
  }
  tt_serialize(f.coeffs(), out);
}

FunctionTrain ft_deserialize(std::istream& in) {
  std::array<unsigned char, 4> magic{};
  in.read(reinterpret_cast<char*>(magic.data()), 4);
  if (in.gcount() != 4) byte_io::io_error("FTC1: truncated stream while reading magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kFtcMagic))) {
    byte_io::io_error("FTC1: bad magic");
  }
  const auto d = byte_io::get_le<std::uint32_t>(in, "FTC1 order");
  if (d == 0 || d > (1u << 16)) byte_io::io_error("FTC1: implausible order");
  std::vector<Basis> bases(d);
  for (auto& b : bases) {
    b.a = byte_io::get_f64(in, "FTC1 domain");
    b.b = byte_io::get_f64(in, "FTC1 domain");
    b.p = byte_io::get_le<std::uint64_t>(in, "FTC1 degree");
  }
  TensorTrain coeffs = tt_deserialize(in);
  try {
    return FunctionTrain(std::move(bases), std::move(coeffs));
  } catch (const Error& e) {
    byte_io::io_error(std::string("FTC1: ") + e.what());
  }
}

void ft_save(const FunctionTrain& f, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) byte_io::io_error("cannot open " + tmp + " for writing");
    ft_serialize(f, out);
    out.flush();
    if (!out) byte_io::io_error("write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) byte_io::io_error("cannot rename " + tmp);
}

FunctionTrain ft_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) byte_io::io_error("cannot open " + path);
  return ft_deserialize(in);
}

}  // namespace fttc
