#include "lattix/graded.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lattix {

GradedOperator::GradedOperator(std::shared_ptr<const Lattice> lat, int site_rank,
                               Eigen::MatrixXcd a, Eigen::MatrixXcd embed_plus,
                               Eigen::MatrixXcd embed_minus, std::string descriptor)
    : lat_(std::move(lat)),
      site_rank_(site_rank),
      a_(std::move(a)),
      embed_plus_(std::move(embed_plus)),
      embed_minus_(std::move(embed_minus)),
      descriptor_(std::move(descriptor)) {
  if (site_rank_ < 1) throw std::invalid_argument("site rank must be positive");
  const long full = static_cast<long>(lat_->n_sites()) * site_rank_;
  if (embed_plus_.rows() != full || embed_plus_.cols() != a_.cols()) {
    throw std::invalid_argument("plus embedding has the wrong shape");
  }
  if (embed_minus_.rows() != full || embed_minus_.cols() != a_.rows()) {
    throw std::invalid_argument("minus embedding has the wrong shape");
  }
  const double iso_plus = (embed_plus_.adjoint() * embed_plus_ -
                           Eigen::MatrixXcd::Identity(a_.cols(), a_.cols()))
                              .cwiseAbs()
                              .maxCoeff();
  const double iso_minus = (embed_minus_.adjoint() * embed_minus_ -
                            Eigen::MatrixXcd::Identity(a_.rows(), a_.rows()))
                               .cwiseAbs()
                               .maxCoeff();
  if (iso_plus > 1e-9 || iso_minus > 1e-9) {
    throw std::invalid_argument("embeddings must be isometries");
  }
}

Eigen::VectorXd GradedOperator::singular_values() const { return ::lattix::singular_values(a_); }

KernelDims GradedOperator::index_by_svd(double tol) const {
  const Eigen::VectorXd sv = singular_values();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) >= tol) ++rank;
  }
  KernelDims out;
  out.dim_ker = dim_plus() - rank;
  out.dim_coker = dim_minus() - rank;
  out.index = out.dim_ker - out.dim_coker;
  return out;
}

namespace {

// diag(E V g(L) V* E*) as a real vector over the full site space.
Eigen::VectorXd embedded_filtered_diag(const Eigen::MatrixXcd& embed,
                                       const Eigen::MatrixXcd& product,
                                       const FilterFunction& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(product);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXd g = es.eigenvalues();
  for (int i = 0; i < g.size(); ++i) g(i) = f.eval(std::sqrt(std::max(0.0, g(i))));
  const Eigen::MatrixXcd ev = embed * es.eigenvectors();
  return (ev.cwiseAbs2() * g).real();
}

}  // namespace

double GradedOperator::supertrace_filtered(const FilterFunction& f) const {
  auto g_sum = [&f](const Eigen::MatrixXcd& product) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(product);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    double acc = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      acc += f.eval(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
    }
    return acc;
  };
  return g_sum(a_.adjoint() * a_) - g_sum(a_ * a_.adjoint());
}

Eigen::VectorXd GradedOperator::supertrace_density(const FilterFunction& f) const {
  const Eigen::VectorXd plus = embedded_filtered_diag(embed_plus_, a_.adjoint() * a_, f);
  const Eigen::VectorXd minus = embedded_filtered_diag(embed_minus_, a_ * a_.adjoint(), f);
  const Eigen::VectorXd full = plus - minus;
  Eigen::VectorXd per_site = Eigen::VectorXd::Zero(lat_->n_sites());
  for (int s = 0; s < lat_->n_sites(); ++s) {
    for (int r = 0; r < site_rank_; ++r) per_site(s) += full(s * site_rank_ + r);
  }
  return per_site;
}

}  // namespace lattix
