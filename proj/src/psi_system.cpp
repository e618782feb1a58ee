#include "indexfiber/psi_system.hpp"

#include <cmath>
#include <ostream>

#include <Eigen/QR>

#include "indexfiber/structured_matrices.hpp"

namespace indexfiber {

PsiSystem assemble_psi(const IndexSpectrum& spectrum) {
  const auto& profile = spectrum.profile();
  if (profile.ell() < 2) throw ArgumentError("assemble_psi: need at least two fixed points");
  PsiSystem psi(spectrum);
  if (spectrum.is_exact()) {
    auto exact = assemble_psi_polynomials<GaussianRational>(profile.parts(), spectrum.exact_values());
    for (const auto& p : exact) psi.polys_.push_back(p.to_complex_polynomial());
    psi.exact_polys_ = std::move(exact);
  } else {
    psi.polys_ = assemble_psi_polynomials<Complex>(profile.parts(), spectrum.values());
  }
  psi.partials_.resize(psi.polys_.size());
  for (std::size_t k = 0; k < psi.polys_.size(); ++k)
    for (int v = 0; v < psi.n_vars(); ++v) psi.partials_[k].push_back(psi.polys_[k].derivative(v));
  return psi;
}

std::vector<int> PsiSystem::degrees() const {
  std::vector<int> out;
  const int d = profile().degree();
  const int ell = profile().ell();
  for (int k = 1; k <= ell - 2; ++k) out.push_back(d - ell + k);
  return out;
}

long long PsiSystem::bezout_number() const {
  long long n = 1;
  for (int deg : degrees()) n *= deg;
  return n;
}

std::vector<int> PsiSystem::zero_components() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < polys_.size(); ++k) {
    const bool zero = exact_polys_ ? (*exact_polys_)[k].is_zero() : polys_[k].is_zero();
    if (zero) out.push_back(static_cast<int>(k));
  }
  return out;
}

double PsiSystem::coefficient_scale() const {
  double s = 0.0;
  for (const auto& p : polys_) s = std::max(s, p.max_abs_coefficient());
  return s;
}

Eigen::VectorXcd PsiSystem::evaluate(std::span<const Complex> point) const {
  if (static_cast<int>(point.size()) != n_vars()) throw ArgumentError("psi evaluate: dimension mismatch");
  Eigen::VectorXcd out(size());
  for (int k = 0; k < size(); ++k) out(k) = polys_[static_cast<std::size_t>(k)].evaluate<Complex>(point);
  return out;
}

Eigen::MatrixXcd PsiSystem::gradient(std::span<const Complex> point) const {
  if (static_cast<int>(point.size()) != n_vars()) throw ArgumentError("psi gradient: dimension mismatch");
  Eigen::MatrixXcd g(size(), n_vars());
  for (int k = 0; k < size(); ++k)
    for (int v = 0; v < n_vars(); ++v)
      g(k, v) = partials_[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)].evaluate<Complex>(point);
  return g;
}

Eigen::MatrixXcd PsiSystem::jacobian(std::span<const Complex> point, int chart) const {
  if (profile().ell() < 3) throw ArgumentError("psi jacobian: need at least three fixed points");
  if (static_cast<int>(point.size()) != n_vars()) throw ArgumentError("psi jacobian: dimension mismatch");
  if (chart < 0 || chart >= n_vars()) throw ArgumentError("psi jacobian: chart index out of range");
  const Complex pin = point[static_cast<std::size_t>(chart)];
  double scale = 0.0;
  for (const auto& z : point) scale = std::max(scale, std::abs(z));
  if (!(std::abs(pin) > 1e-14 * scale)) throw ArgumentError("psi jacobian: chart coordinate vanishes");
  std::vector<Complex> normalized(point.begin(), point.end());
  for (auto& z : normalized) z /= pin;
  const Eigen::MatrixXcd g = gradient(normalized);
  Eigen::MatrixXcd jac(size(), size());
  int col = 0;
  for (int v = 0; v < n_vars(); ++v) {
    if (v == chart) continue;
    jac.col(col++) = g.col(v);
  }
  return jac;
}

void PsiSystem::dump(std::ostream& os) const {
  const auto deg = degrees();
  for (std::size_t k = 0; k < polys_.size(); ++k) {
    os << "# psi_" << (k + 1) << " degree " << deg[k] << "\n";
    for (const auto& [e, c] : polys_[k].terms()) {
      for (std::size_t v = 0; v < e.size(); ++v) os << (v ? "," : "") << e[v];
      os.precision(17);
      os << "\t" << c.real() << "\t" << c.imag() << "\n";
    }
  }
}

AuxiliaryResidueVector recover_aux(const IndexSpectrum& spectrum, std::span<const Complex> zetas,
                                   const RecoverOptions& options) {
  const auto& profile = spectrum.profile();
  const int ell = profile.ell();
  const int d = profile.degree();
  if (ell < 2) throw ArgumentError("recover_aux: rho is not determined by a single fixed point");
  if (static_cast<int>(zetas.size()) != ell) throw ArgumentError("recover_aux: need one zeta per fixed point");
  // distinctness, through the same test build_map applies
  (void)build_map(profile, zetas, Complex(1.0, 0.0), options.distinct);

  const int unknowns = d - ell + 1;
  Eigen::MatrixXcd system(d, unknowns);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(d);
  int col = 0;
  for (int i = 0; i < ell; ++i) {
    const int di = profile.part(i);
    const Eigen::MatrixXcd block = binomial_block<Complex>(d, di, zetas[static_cast<std::size_t>(i)]);
    rhs -= spectrum.value(i) * block.col(0);
    for (int k = 1; k < di; ++k) system.col(col++) = block.col(k);
  }
  // sum_i A_d^{d_i} (m_i, m_{i,1}, ...)^t = (0, ..., 0, -1/rho)^t, with u = 1/rho moved left
  system.col(col) = Eigen::VectorXcd::Unit(d, d - 1);

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(system);
  const Eigen::VectorXcd x = qr.solve(rhs);
  const double scale = system.norm() * x.norm() + rhs.norm();
  const double residual = (system * x - rhs).norm() / (scale > 0.0 ? scale : 1.0);
  if (!(residual <= options.consistency_tolerance)) {
    throw InconsistentError("recover_aux: residue equations are inconsistent (relative residual " +
                            std::to_string(residual) + ")");
  }
  const Complex inv_rho = x(unknowns - 1);
  if (!(std::abs(inv_rho) > 1e-300) || !(std::abs(inv_rho) > 1e-12 * x.norm())) {
    throw InconsistentError("recover_aux: no finite rho");
  }

  AuxiliaryResidueVector out;
  out.rho = Complex(1.0, 0.0) / inv_rho;
  out.residual = residual;
  col = 0;
  const double m_scale = std::max(spectrum.max_abs(), x.cwiseAbs().maxCoeff());
  for (int i = 0; i < ell; ++i) {
    const int di = profile.part(i);
    Eigen::VectorXcd r(di);
    r(0) = spectrum.value(i);
    for (int k = 1; k < di; ++k) r(k) = x(col++);
    if (di >= 2 && !(std::abs(r(di - 1)) > 1e-10 * m_scale)) {
      throw InconsistentError("recover_aux: top auxiliary residue vanishes at a multiple fixed point");
    }
    if (di == 1) {
      const bool zero = spectrum.is_exact() ? spectrum.exact_values()[static_cast<std::size_t>(i)].is_zero()
                                            : !(std::abs(r(0)) > 1e-14 * m_scale);
      if (zero) throw InconsistentError("recover_aux: zero index at a simple fixed point");
    }
    out.residues.push_back(std::move(r));
  }
  return out;
}

}  // namespace indexfiber
