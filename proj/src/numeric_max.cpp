#include "fermopt/numeric_max.hpp"

#include <cmath>

#include "fermopt/pfaffian.hpp"
#include "fermopt/rng.hpp"

namespace fermopt {

namespace {

double term_value(const Eigen::MatrixXd& g, const IndexSet& idx) {
  switch (idx.size()) {
    case 2: return g(idx[0], idx[1]);
    case 4:
      return g(idx[0], idx[1]) * g(idx[2], idx[3]) - g(idx[0], idx[2]) * g(idx[1], idx[3]) +
             g(idx[0], idx[3]) * g(idx[1], idx[2]);
    default: {
      const auto m = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd sub(m, m);
      for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = g(idx[r], idx[c]);
      }
      return pfaffian_unchecked(sub);
    }
  }
}

Eigen::MatrixXd reference_dimers(int n_majoranas) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n_majoranas, n_majoranas);
  for (int a = 0; a + 1 < n_majoranas; a += 2) {
    g(a, a + 1) = 1.0;
    g(a + 1, a) = -1.0;
  }
  return g;
}

Eigen::MatrixXd random_orthogonal(int dim, CounterRng& rng, bool flip_parity) {
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) a(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    if (r(c, c) < 0) q.col(c) *= -1.0;
  }
  const bool negative = q.determinant() < 0;
  if (negative != flip_parity) q.col(0) *= -1.0;
  return q;
}

struct Ascent {
  Eigen::MatrixXd gamma;
  double value;
  int iterations;
  bool converged;
};

Ascent ascend(Eigen::MatrixXd gamma, const MajoranaHamiltonian& h, const NumericMaxOptions& opt) {
  const auto dim = gamma.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
  double f = energy(gamma, h);
  double step = 1.0;
  Ascent out{gamma, f, 0, false};
  for (int it = 0; it < opt.max_iters; ++it) {
    out.iterations = it + 1;
    const Eigen::MatrixXd g = energy_gradient(gamma, h);
    const Eigen::MatrixXd x = gamma * g - g * gamma;
    const double slope = 0.5 * x.squaredNorm();
    if (std::sqrt(x.squaredNorm()) <= opt.grad_tol * std::max(1.0, std::abs(f))) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    bool stalled = false;
    while (step > 1e-14) {
      const Eigen::MatrixXd half = 0.5 * step * x;
      const Eigen::MatrixXd r = (eye - half).partialPivLu().solve(eye + half);
      Eigen::MatrixXd trial = r * gamma * r.transpose();
      trial = 0.5 * (trial - trial.transpose());
      const double ft = energy(trial, h);
      if (ft >= f + 1e-4 * step * slope) {
        stalled = ft - f <= 1e-13 * std::max(1.0, std::abs(f));
        gamma = std::move(trial);
        f = ft;
        accepted = true;
        step = std::min(step * 2.0, 1e3);
        break;
      }
      step *= 0.5;
    }
    if (!accepted || stalled) {
      out.converged = true;
      break;
    }
  }
  out.gamma = gamma;
  out.value = f;
  return out;
}

}  // namespace

double energy(const Eigen::MatrixXd& gamma, const MajoranaHamiltonian& h) {
  double e = 0.0;
  for (const auto& t : h.terms()) e += t.coeff * term_value(gamma, t.indices);
  return e;
}

Eigen::MatrixXd energy_gradient(const Eigen::MatrixXd& gamma, const MajoranaHamiltonian& h) {
  const auto dim = gamma.rows();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    const auto& idx = t.indices;
    const auto m = idx.size();
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t r = p + 1; r < m; ++r) {
        double minor;
        if (m == 2) {
          minor = 1.0;
        } else if (m == 4) {
          std::size_t rest[2];
          std::size_t c = 0;
          for (std::size_t s = 0; s < 4; ++s) {
            if (s != p && s != r) rest[c++] = s;
          }
          minor = gamma(idx[rest[0]], idx[rest[1]]);
        } else {
          IndexSet sub;
          for (std::size_t s = 0; s < m; ++s) {
            if (s != p && s != r) sub.push_back(idx[s]);
          }
          minor = term_value(gamma, sub);
        }
        const double sign = (p + r + 1) % 2 == 0 ? 1.0 : -1.0;
        grad(idx[p], idx[r]) += t.coeff * sign * minor;
      }
    }
  }
  const Eigen::MatrixXd upper = grad.triangularView<Eigen::StrictlyUpper>();
  return upper - upper.transpose();
}

NumericMaxResult gaussian_numeric_max(const MajoranaHamiltonian& h, const NumericMaxOptions& options) {
  const int dim = h.n_majoranas();
  const Eigen::MatrixXd reference = reference_dimers(dim);
  NumericMaxResult best;
  best.value = -std::numeric_limits<double>::infinity();
  const auto consider = [&](const Ascent& a) {
    if (a.value > best.value) {
      best.value = a.value;
      best.gamma = CorrelationMatrix(a.gamma);
      best.iterations = a.iterations;
      best.converged = a.converged;
    }
  };
  for (const auto& s : options.seeds) {
    if (s.n_majoranas() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "seed state has the wrong number of Majoranas");
    }
    consider(ascend(s.gamma(), h, options));
  }
  CounterRng rng(options.seed, substream(9, 0));
  for (int r = 0; r < options.restarts; ++r) {
    const Eigen::MatrixXd q = random_orthogonal(dim, rng, r % 2 == 1);
    consider(ascend(q * reference * q.transpose(), h, options));
  }
  if (!std::isfinite(best.value)) {
    best.gamma = CorrelationMatrix(reference);
    best.value = energy(reference, h);
  }
  return best;
}

double quadratic_gaussian_max(const MajoranaHamiltonian& h) {
  const int dim = h.n_majoranas();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    if (t.weight() != 2) throw Error(ErrorCode::kInvalidArgument, "Hamiltonian is not quadratic");
    a(t.indices[0], t.indices[1]) = t.coeff;
    a(t.indices[1], t.indices[0]) = -t.coeff;
  }
  if (dim == 0) return 0.0;
  return 0.5 * Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues().sum();
}

}  // namespace fermopt
