#include "fermopt/oracle.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "fermopt/pauli.hpp"
#include "fermopt/rng.hpp"

namespace fermopt {

namespace {

void require_dense_budget(int n_modes) {
  if (n_modes > kDenseModeBudget) {
    throw Error(ErrorCode::kBudgetExceeded,
                "budget exceeded: " + std::to_string(n_modes) +
                    " modes is beyond the dense limit; use the iterative method");
  }
}

DenseOperator pauli_matrix(const PauliString& p, int n_modes) {
  PauliSum s(n_modes);
  s.add(p, 1.0);
  return s.dense();
}

double lambda_max_dense(const MajoranaHamiltonian& h) {
  const DenseOperator m = to_pauli(h).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double lambda_max_lanczos(const MajoranaHamiltonian& h, const EigenOptions& opt) {
  const PauliSum op = to_pauli(h);
  const auto dim = static_cast<Eigen::Index>(op.dim());
  const Eigen::Index m = std::min<Eigen::Index>(opt.krylov_dim, dim);
  CounterRng rng(opt.seed, 0);
  Eigen::VectorXcd start(dim);
  for (Eigen::Index s = 0; s < dim; ++s) start[s] = {rng.normal(), rng.normal()};
  start.normalize();

  Eigen::MatrixXcd basis(dim, m);
  Eigen::VectorXcd w(dim);
  double best = -std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.col(0) = start;
    Eigen::Index steps = 0;
    double last_beta = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      op.apply(basis.col(j), w);
      alpha.push_back(basis.col(j).dot(w).real());
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd proj = basis.leftCols(j + 1).adjoint() * w;
        w -= basis.leftCols(j + 1) * proj;
      }
      last_beta = w.norm();
      steps = j + 1;
      if (last_beta < 1e-13 || j + 1 == m) break;
      beta.push_back(last_beta);
      basis.col(j + 1) = w / last_beta;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index j = 0; j < steps; ++j) {
      t(j, j) = alpha[static_cast<std::size_t>(j)];
      if (j + 1 < steps) t(j, j + 1) = t(j + 1, j) = beta[static_cast<std::size_t>(j)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
    const Eigen::Index top = steps - 1;
    const double theta = tri.eigenvalues()(top);
    const Eigen::VectorXd y = tri.eigenvectors().col(top);
    best = theta;
    const double residual = std::abs(last_beta * y(steps - 1));
    if (residual <= opt.tol * std::max(1.0, std::abs(theta)) || steps == dim) return theta;
    start = basis.leftCols(steps) * y.cast<std::complex<double>>();
    start.normalize();
  }
  return best;
}

}  // namespace

DenseOperator jordan_wigner(ModeIndex i, int n_modes) {
  require_dense_budget(n_modes);
  if (i < 0 || i >= 2 * n_modes) throw Error(ErrorCode::kIndexOutOfRange, "Majorana index out of range");
  return pauli_matrix(majorana_pauli(i), n_modes);
}

DenseOperator monomial_matrix(std::span<const ModeIndex> indices, int n_modes) {
  require_dense_budget(n_modes);
  return pauli_matrix(monomial_pauli(indices), n_modes);
}

DenseOperator dense_hamiltonian(const MajoranaHamiltonian& h) {
  require_dense_budget(h.n_modes());
  return to_pauli(h).dense();
}

double lambda_max_exact(const MajoranaHamiltonian& h, EigenMethod method, const EigenOptions& options) {
  if (method == EigenMethod::kAuto) {
    method = h.n_modes() <= kDenseEigenModes ? EigenMethod::kDense : EigenMethod::kIterative;
  }
  if (method == EigenMethod::kDense) {
    if (h.n_modes() > kDenseEigenModes) {
      throw Error(ErrorCode::kBudgetExceeded, "budget exceeded: dense diagonalization limited to " +
                                                  std::to_string(kDenseEigenModes) + " modes");
    }
    return lambda_max_dense(h);
  }
  if (h.n_modes() > kIterativeModes) {
    throw Error(ErrorCode::kBudgetExceeded, "budget exceeded: iterative solver limited to " +
                                                std::to_string(kIterativeModes) + " modes");
  }
  return lambda_max_lanczos(h, options);
}

DenseOperator dense_state_from_matching(const MatchingState& state) {
  const int n = state.n_majoranas() / 2;
  require_dense_budget(n);
  const auto dim = Eigen::Index{1} << n;
  DenseOperator rho = DenseOperator::Identity(dim, dim);
  const auto& pairs = state.matching.pairs();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const ModeIndex idx[2] = {pairs[p].first, pairs[p].second};
    const DenseOperator dimer = monomial_matrix(idx, n);
    rho = rho * (DenseOperator::Identity(dim, dim) + static_cast<double>(state.signs[p]) * dimer);
  }
  return rho / static_cast<double>(dim);
}

DenseOperator dense_state_from_correlation(const CorrelationMatrix& gamma) {
  const int n = gamma.n_modes();
  require_dense_budget(n);
  const auto dim = Eigen::Index{1} << n;
  DenseOperator rho = DenseOperator::Identity(dim, dim);
  if (n == 0) return rho;
  Eigen::RealSchur<Eigen::MatrixXd> schur(gamma.gamma());
  const Eigen::MatrixXd& o = schur.matrixU();
  const Eigen::MatrixXd& t = schur.matrixT();
  std::vector<DenseOperator> c;
  for (int a = 0; a < 2 * n; ++a) c.push_back(jordan_wigner(a, n));
  const auto rotated = [&](Eigen::Index k) {
    DenseOperator d = DenseOperator::Zero(dim, dim);
    for (int a = 0; a < 2 * n; ++a) {
      if (o(a, k) != 0.0) d += o(a, k) * c[static_cast<std::size_t>(a)];
    }
    return d;
  };
  const std::complex<double> i_unit(0.0, 1.0);
  for (Eigen::Index k = 0; k + 1 < t.rows();) {
    const double nu = t(k, k + 1);
    if (std::abs(t(k + 1, k)) > 1e-14 || std::abs(nu) > 1e-14) {
      rho = rho * (DenseOperator::Identity(dim, dim) + i_unit * nu * rotated(k) * rotated(k + 1));
      k += 2;
    } else {
      k += 1;
    }
  }
  return rho / static_cast<double>(dim);
}

double dense_expectation(const DenseOperator& rho, const DenseOperator& op) {
  return (op.cwiseProduct(rho.transpose())).sum().real();
}

double dense_expectation(const DenseOperator& rho, const MajoranaHamiltonian& h) {
  return dense_expectation(rho, dense_hamiltonian(h));
}

bool is_valid_density(const DenseOperator& rho, bool pure, double tol) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol) return false;
  return !pure || (rho * rho - rho).cwiseAbs().maxCoeff() <= tol;
}

double first_order_sign(int q) {
  if (q < 4 || q % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "two-colored models need even q >= 4");
  return -1.0;
}

std::vector<double> default_theta_grid(int q, int points) {
  const double sign = first_order_sign(q);
  std::vector<double> grid;
  const double lo = std::log(1e-3);
  const double hi = std::log(2.0);
  for (int p = 1; p <= points; ++p) {
    grid.push_back(sign * std::exp(lo + (hi - lo) * p / points));
  }
  return grid;
}

ThetaCurve rho_theta_sweep(const TwoColoredModel& model, std::span<const double> grid) {
  const int n1 = model.n1;
  const int n2 = model.n2;
  const int majoranas = n1 + 2 * n2;
  const int n = (majoranas + 1) / 2;
  require_dense_budget(n);
  const auto dim = Eigen::Index{1} << n;

  PauliSum h_op(n);
  PauliSum k_op(n);
  const double norm = 1.0 / std::sqrt(binomial(n1, model.q - 1));
  for (std::size_t t = 0; t < model.labels.size(); ++t) {
    const auto& lab = model.labels[t];
    h_op.add(monomial_pauli(model.h[t].indices), model.h[t].coeff);
    IndexSet idx = lab.subset;
    idx.push_back(n1 + n2 + lab.chi);
    k_op.add(monomial_pauli(idx), lab.raw * norm);
  }
  const DenseOperator h = h_op.dense();
  const DenseOperator k = k_op.dense();

  DenseOperator rho0 = DenseOperator::Identity(dim, dim);
  for (int j = 0; j < n2; ++j) {
    const ModeIndex idx[2] = {n1 + j, n1 + n2 + j};
    rho0 = rho0 * (DenseOperator::Identity(dim, dim) - monomial_matrix(idx, n));
  }
  rho0 /= static_cast<double>(dim);

  const std::complex<double> i_unit(0.0, 1.0);
  const DenseOperator zeta = -i_unit * k;
  ThetaCurve curve;
  curve.slope = dense_expectation(rho0, DenseOperator(zeta * h - h * zeta));
  double sum_sq = 0.0;
  for (const auto& lab : model.labels) sum_sq += lab.raw * lab.raw;
  curve.slope_closed_form = 2.0 * first_order_sign(model.q) /
                            (std::sqrt(static_cast<double>(n2)) * binomial(n1, model.q - 1)) * sum_sq;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k);
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXcd h_hat = v.adjoint() * h * v;
  const Eigen::MatrixXcd r_hat = v.adjoint() * rho0 * v;
  // Tr(H rho_theta) = sum_ab Hhat_ba e^{i theta (l_a - l_b)} rhohat_ab
  const Eigen::MatrixXcd weights = h_hat.transpose().cwiseProduct(r_hat);
  curve.best_energy = -std::numeric_limits<double>::infinity();
  for (double theta : grid) {
    Eigen::VectorXcd phase(dim);
    for (Eigen::Index a = 0; a < dim; ++a) phase[a] = std::exp(i_unit * theta * lam[a]);
    const double e = (phase.asDiagonal() * weights * phase.conjugate().asDiagonal()).sum().real();
    curve.theta.push_back(theta);
    curve.energy.push_back(e);
    if (e > curve.best_energy) {
      curve.best_energy = e;
      curve.best_theta = theta;
    }
  }
  return curve;
}

}  // namespace fermopt
