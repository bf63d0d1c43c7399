// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nbspec/error.hpp"
#include "nbspec/rng.hpp"

namespace nbspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool modulus_before(const Complex& a, const Complex& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

// Vertices surviving iterated removal of degree <= 1 vertices.
std::vector<bool> core_vertices(const DirectedEdgeIndex& index) {
  const Vertex n = index.num_vertices();
  std::vector<int> deg(n);
  std::vector<bool> alive(n, true);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = index.degree(v);
    if (deg[v] <= 1) queue.push_back(v);
  }
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    if (!alive[v]) continue;
    alive[v] = false;
    for (EdgeId e : index.out_edges(v)) {
      const Vertex w = index.head(e);
      if (alive[w] && --deg[w] == 1) queue.push_back(w);
    }
  }
  return alive;
}

// Parlett-Reinsch diagonal similarity scaling by powers of two.
void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  constexpr double radix_sq = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = a.col(i).cwiseAbs().sum() - std::fabs(a(i, i));
      double r = a.row(i).cwiseAbs().sum() - std::fabs(a(i, i));
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix_sq;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix_sq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

std::vector<Complex> general_eigenvalues(Eigen::MatrixXd a) {
  std::vector<Complex> out;
  if (a.rows() == 0) return out;
  balance(a);
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("QR iteration did not converge");
  }
  out.assign(solver.eigenvalues().data(),
             solver.eigenvalues().data() + solver.eigenvalues().size());
  return out;
}

// Removes the `count` entries closest to `target`.
void remove_closest(std::vector<Complex>& values, Complex target, int count) {
  for (int c = 0; c < count; ++c) {
    if (values.empty()) throw numerical_error("companion spectrum too small");
    auto best = std::min_element(
        values.begin(), values.end(), [&](const Complex& a, const Complex& b) {
          return std::abs(a - target) < std::abs(b - target);
        });
    values.erase(best);
  }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double total = v.sum();
  double sign = 1.0;
  if (std::fabs(total) > 1e-12 * v.cwiseAbs().sum()) {
    sign = total > 0.0 ? 1.0 : -1.0;
  } else {
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    sign = v[arg] >= 0.0 ? 1.0 : -1.0;
  }
  v *= sign;
}

}  // namespace

std::string to_string(SpectrumMethod method) {
  switch (method) {
    case SpectrumMethod::dense:
      return "dense";
    case SpectrumMethod::companion:
      return "companion";
    case SpectrumMethod::arnoldi:
      return "arnoldi";
  }
  return "unknown";
}

void sort_by_modulus(std::vector<Complex>& values) {
  std::stable_sort(values.begin(), values.end(), modulus_before);
}

SpectrumReport full_spectrum_dense(const DirectedEdgeIndex& index, EdgeId cap) {
  if (index.size() > cap) {
    throw cap_exceeded("dense spectrum requested for " +
                       std::to_string(index.size()) +
                       " oriented edges (cap " + std::to_string(cap) + ")");
  }
  const std::vector<bool> core = core_vertices(index);
  std::vector<EdgeId> kept;
  for (EdgeId e = 0; e < index.size(); ++e) {
    if (core[index.tail(e)] && core[index.head(e)]) kept.push_back(e);
  }
  std::vector<EdgeId> position(index.size(), -1);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    position[kept[i]] = static_cast<EdgeId>(i);
  }
  const auto kc = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(kc, kc);
  for (Eigen::Index i = 0; i < kc; ++i) {
    for (EdgeId f : index.out_continuations(kept[i])) {
      if (position[f] >= 0) b(i, position[f]) = 1.0;
    }
  }

  SpectrumReport report;
  report.method = SpectrumMethod::dense;
  report.eigenvalues = general_eigenvalues(std::move(b));
  report.eigenvalues.resize(index.size(), Complex(0.0, 0.0));
  sort_by_modulus(report.eigenvalues);
  return report;
}

SpectrumReport full_spectrum_companion(const LabeledGraph& graph,
                                       bool deflate_trees) {
  const std::int64_t m = 2 * graph.num_edges();
  const LabeledGraph core =
      deflate_trees ? induced_subgraph(graph, two_core_mask(graph)) : graph;
  const Eigen::Index n = core.num_vertices();
  const std::int64_t edges = core.num_edges();

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : core.neighbors(v)) k(v, w) = 1.0;
    k(v, n + v) = -(core.degree(v) - 1.0);
    k(n + v, v) = 1.0;
  }

  SpectrumReport report;
  report.method = SpectrumMethod::companion;
  report.eigenvalues = general_eigenvalues(std::move(k));
  const std::int64_t excess = edges - n;
  if (excess >= 0) {
    report.eigenvalues.insert(report.eigenvalues.end(), excess, Complex(1.0));
    report.eigenvalues.insert(report.eigenvalues.end(), excess, Complex(-1.0));
  } else {
    remove_closest(report.eigenvalues, Complex(1.0), static_cast<int>(-excess));
    remove_closest(report.eigenvalues, Complex(-1.0), static_cast<int>(-excess));
  }
  report.eigenvalues.resize(m, Complex(0.0, 0.0));
  sort_by_modulus(report.eigenvalues);
  return report;
}

SpectrumReport arnoldi_eigenpairs(const LinearMap& op, EdgeId dim,
                                  const ArnoldiOptions& options) {
  if (dim <= 0) throw invalid_argument("Arnoldi on an empty space");
  if (options.count < 1) throw invalid_argument("count must be >= 1");
  if (!(options.tol > 0.0)) throw invalid_argument("tol must be positive");
  const Eigen::Index n = dim;
  const int count = static_cast<int>(std::min<Eigen::Index>(options.count, n));
  Eigen::Index kdim = options.krylov_dim > 0 ? options.krylov_dim
                                             : std::max(30, 4 * count);
  kdim = std::max<Eigen::Index>(kdim, count + 3);
  kdim = std::min(kdim, n);

  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, kdim + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(kdim + 1, kdim);
  Eigen::VectorXd w(n);
  Rng rng(options.seed);
  double scale = 0.0;

  // Fills column j with a random unit vector orthogonal to columns < j.
  auto fresh_column = [&](Eigen::Index j) {
    for (int attempt = 0; attempt < 5; ++attempt) {
      for (Eigen::Index i = 0; i < n; ++i) V(i, j) = rng.normal();
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd c = V.leftCols(j).transpose() * V.col(j);
        V.col(j) -= V.leftCols(j) * c;
      }
      const double norm = V.col(j).norm();
      if (norm > 1e-8) {
        V.col(j) /= norm;
        return;
      }
    }
    V.col(j).setZero();
  };

  auto apply = [&](Eigen::Index j) {
    op(std::span<const double>(V.col(j).data(), n),
       std::span<double>(w.data(), n));
  };

  fresh_column(0);
  Eigen::Index start = 0;
  SpectrumReport report;
  report.method = SpectrumMethod::arnoldi;
  report.converged = false;

  std::vector<Complex> ritz;
  Eigen::MatrixXcd ritz_vectors;
  std::vector<Eigen::Index> order;
  int wanted = count;

  for (int restart = 0;; ++restart) {
    report.iterations = restart + 1;
    for (Eigen::Index j = start; j < kdim; ++j) {
      apply(j);
      scale = std::max(scale, w.norm());
      for (Eigen::Index i = 0; i <= j; ++i) {
        const double h = V.col(i).dot(w);
        H(i, j) += h;
        w -= h * V.col(i);
      }
      const Eigen::VectorXd c = V.leftCols(j + 1).transpose() * w;
      if (c.norm() > 1e-8 * w.norm()) {
        w -= V.leftCols(j + 1) * c;
        H.col(j).head(j + 1) += c;
      }
      const double beta = w.norm();
      if (j + 1 == n) {
        H(j + 1, j) = 0.0;
      } else if (beta <= 1e-12 * std::max(scale, kEps)) {
        // Invariant subspace found; continue in its complement.
        H(j + 1, j) = 0.0;
        fresh_column(j + 1);
      } else {
        H(j + 1, j) = beta;
        V.col(j + 1) = w / beta;
      }
    }

    const Eigen::MatrixXd hk = H.topLeftCorner(kdim, kdim);
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(hk, true);
    if (solver.info() != Eigen::Success) {
      throw numerical_error("Arnoldi: projected eigenproblem failed");
    }
    ritz.assign(solver.eigenvalues().data(),
                solver.eigenvalues().data() + kdim);
    ritz_vectors = solver.eigenvectors();
    order.resize(kdim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return modulus_before(ritz[a], ritz[b]);
                     });

    wanted = count;
    if (wanted < kdim && ritz[order[wanted - 1]].imag() > 0.0) ++wanted;

    const double beta_last = std::fabs(H(kdim, kdim - 1));
    bool converged = true;
    for (int i = 0; i < wanted; ++i) {
      const double theta = std::abs(ritz[order[i]]);
      const double estimate =
          beta_last * std::abs(ritz_vectors(kdim - 1, order[i]));
      if (estimate > options.tol * std::max(theta, kEps * scale)) {
        converged = false;
      }
    }
    if (converged || kdim == n) {
      report.converged = true;
      break;
    }
    if (restart + 1 >= options.max_restarts) break;

    // Thick restart: keep an orthonormal basis of the leading Ritz
    // vectors (real and imaginary parts of complex pairs).
    Eigen::Index keep = wanted + (kdim - wanted) / 2;
    keep = std::min(keep, kdim - 2);
    if (ritz[order[keep - 1]].imag() > 0.0) {
      keep = keep + 1 <= kdim - 1 ? keep + 1 : keep - 1;
    }
    Eigen::MatrixXd y(kdim, keep);
    for (Eigen::Index i = 0; i < keep; ++i) {
      const Eigen::VectorXcd& col = ritz_vectors.col(order[i]);
      if (ritz[order[i]].imag() > 0.0) {
        y.col(i) = col.real();
        y.col(i + 1) = col.imag();
        ++i;
      } else {
        y.col(i) = col.real();
      }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    const Eigen::MatrixXd u =
        qr.householderQ() * Eigen::MatrixXd::Identity(kdim, keep);
    const Eigen::MatrixXd t = u.transpose() * hk * u;
    const Eigen::RowVectorXd b = H(kdim, kdim - 1) * u.row(kdim - 1);

    const Eigen::MatrixXd v_new = V.leftCols(kdim) * u;
    const Eigen::VectorXd v_next = V.col(kdim);
    V.setZero();
    V.leftCols(keep) = v_new;
    V.col(keep) = v_next;
    H.setZero();
    H.topLeftCorner(keep, keep) = t;
    H.row(keep).head(keep) = b;
    start = keep;
  }

  const int returned = count;
  Eigen::VectorXd x(n);
  Eigen::VectorXd ax(n);
  for (int i = 0; i < returned; ++i) {
    const Complex theta = ritz[order[i]];
    const Eigen::VectorXcd z = V.leftCols(kdim) * ritz_vectors.col(order[i]);
    report.eigenvalues.push_back(theta);

    x = z.real();
    op(std::span<const double>(x.data(), n), std::span<double>(ax.data(), n));
    Eigen::VectorXd res_re = ax - theta.real() * x;
    Eigen::VectorXd res_im = -theta.imag() * x;
    x = z.imag();
    op(std::span<const double>(x.data(), n), std::span<double>(ax.data(), n));
    res_re += theta.imag() * x;
    res_im += ax - theta.real() * x;
    const double znorm = z.norm();
    report.residuals.push_back(
        znorm > 0.0 ? std::sqrt(res_re.squaredNorm() + res_im.squaredNorm()) /
                          znorm
                    : std::numeric_limits<double>::infinity());

    if (theta.imag() == 0.0) {
      Eigen::VectorXd v = z.real();
      const double norm = v.norm();
      if (norm > 0.0) v /= norm;
      fix_sign(v);
      report.leading_values.push_back(theta.real());
      report.leading_vectors.emplace_back(
          std::vector<double>(v.data(), v.data() + n));
    }
  }
  return report;
}

SpectrumReport leading_eigenpairs(const DirectedEdgeIndex& index,
                                  const ArnoldiOptions& options) {
  const LinearMap op = [&index](std::span<const double> in,
                                std::span<double> out) {
    apply_B(index, in, out);
  };
  return arnoldi_eigenpairs(op, index.size(), options);
}

CandidateVector candidate_vector(const DirectedEdgeIndex& index,
                                 const EdgeVector& chi_k, int ell) {
  if (ell < 0) throw invalid_argument("ell must be >= 0");
  CandidateVector out;
  EdgeVector x = check(index, chi_k);
  EdgeVector y(index.size());
  auto rescale = [&](EdgeVector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) return false;
    v.as_eigen() /= norm;
    return true;
  };
  bool ok = rescale(x);
  for (int s = 0; s < ell && ok; ++s) {
    apply_Bt(index, x.span(), y.span());
    std::swap(x, y);
    ok = rescale(x);
  }
  for (int s = 0; s < ell && ok; ++s) {
    apply_B(index, x.span(), y.span());
    std::swap(x, y);
    ok = rescale(x);
  }
  if (!ok) {
    out.vector = EdgeVector(index.size());
    out.degenerate = true;
    return out;
  }
  out.vector = std::move(x);
  return out;
}

int default_depth(double alpha, std::int64_t n, double kappa) {
  if (!(alpha > 1.0)) throw invalid_argument("default depth needs alpha > 1");
  if (n < 2) throw invalid_argument("default depth needs n >= 2");
  if (!(kappa > 0.0)) throw invalid_argument("kappa must be positive");
  const double depth = kappa * std::log(static_cast<double>(n)) / std::log(alpha);
  return std::max(1, static_cast<int>(std::lround(depth)));
}

double alignment(const EdgeVector& u, const EdgeVector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > 0.0) || !(nv > 0.0)) {
    throw numerical_error("alignment of a zero vector");
  }
  return std::fabs(u.dot(v)) / (nu * nv);
}

Eigen::MatrixXd dense_bkp(const DirectedEdgeIndex& index, int k, EdgeId cap) {
  if (k < 0) throw invalid_argument("power must be >= 0");
  const Eigen::MatrixXd b = dense_B(index, cap);
  const Eigen::Index m = b.rows();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
  for (int s = 0; s < k; ++s) power = power * b;
  Eigen::MatrixXd out(m, m);
  for (EdgeId f = 0; f < m; ++f) out.col(f) = power.col(DirectedEdgeIndex::inv(f));
  return out;
}

SymmetricSpectrum bkp_dense_spectrum(const DirectedEdgeIndex& index, int k,
                                     EdgeId cap) {
  const Eigen::MatrixXd a = dense_bkp(index, k, cap);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("symmetric eigensolver failed");
  }
  const Eigen::Index m = a.rows();
  SymmetricSpectrum out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  if (m > 0) fix_sign(out.vectors.col(0));
  return out;
}

std::vector<double> bp_predicted_spectrum(const DirectedEdgeIndex& index) {
  std::vector<double> out;
  for (Vertex v = 0; v < index.num_vertices(); ++v) {
    out.push_back(index.degree(v) - 1.0);
  }
  // An isolated vertex contributes -1 above and lowers the count m - n of
  // further -1 values by one, which may make it negative.
  const std::int64_t extra =
      static_cast<std::int64_t>(index.size()) - index.num_vertices();
  if (extra >= 0) {
    out.insert(out.end(), extra, -1.0);
  } else {
    for (std::int64_t i = 0; i < -extra; ++i) {
      const auto it = std::find(out.begin(), out.end(), -1.0);
      if (it == out.end()) throw numerical_error("inconsistent degree sequence");
      out.erase(it);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BpCheck bp_identity_check(const DirectedEdgeIndex& index, EdgeId cap) {
  BpCheck check;
  check.predicted = bp_predicted_spectrum(index);
  const Eigen::MatrixXd bp = dense_bkp(index, 1, cap);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      bp, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("symmetric eigensolver failed");
  }
  check.computed.assign(solver.eigenvalues().data(),
                        solver.eigenvalues().data() + bp.rows());
  std::sort(check.computed.begin(), check.computed.end());
  if (check.computed.size() != check.predicted.size()) {
    throw numerical_error("B P spectrum size mismatch");
  }
  for (std::size_t i = 0; i < check.computed.size(); ++i) {
    check.max_error = std::max(
        check.max_error, std::fabs(check.computed[i] - check.predicted[i]));
  }
  return check;
}

std::vector<double> bkp_singular_values(const DirectedEdgeIndex& index, int k,
                                        int count, double tol,
                                        std::uint64_t seed) {
  if (k < 1) throw invalid_argument("power must be >= 1");
  if (count < 1) throw invalid_argument("count must be >= 1");
  const EdgeId m = index.size();
  if (m == 0) return {};
  count = std::min(count, static_cast<int>(m));

  // Small problems: exact dense spectrum, which also gets multiplicities
  // that a single Krylov sequence cannot see.
  constexpr EdgeId kDenseLimit = 400;
  if (m <= kDenseLimit) {
    const SymmetricSpectrum spectrum = bkp_dense_spectrum(index, k, m);
    std::vector<double> s(m);
    for (EdgeId i = 0; i < m; ++i) s[i] = std::fabs(spectrum.values[i]);
    std::sort(s.begin(), s.end(), std::greater<>());
    s.resize(count);
    return s;
  }

  EdgeVector buffer(m);
  EdgeVector tmp(m);
  auto op = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    for (EdgeId e = 0; e < m; ++e) buffer[e] = in[DirectedEdgeIndex::inv(e)];
    for (int s = 0; s < k; ++s) {
      apply_B(index, buffer.span(), tmp.span());
      std::swap(buffer, tmp);
    }
    out = buffer.as_eigen();
  };

  const Eigen::Index max_dim = std::min<Eigen::Index>(m, 3000);
  Eigen::MatrixXd V(m, max_dim);
  std::vector<double> alphas;
  std::vector<double> betas;
  Rng rng(seed);
  auto fresh = [&](Eigen::Index j) {
    for (EdgeId i = 0; i < m; ++i) V(i, j) = rng.normal();
    for (int pass = 0; pass < 2; ++pass) {
      V.col(j) -= V.leftCols(j) * (V.leftCols(j).transpose() * V.col(j));
    }
    V.col(j).normalize();
  };
  fresh(0);
  Eigen::VectorXd w(m);
  double scale = 0.0;
  std::vector<double> result;
  for (Eigen::Index j = 0; j < max_dim; ++j) {
    op(V.col(j), w);
    scale = std::max(scale, w.norm());
    const double a = V.col(j).dot(w);
    alphas.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
    }
    const double b = w.norm();
    const bool last = j + 1 == max_dim;
    const bool breakdown = b <= 1e-12 * std::max(scale, kEps);

    const auto dim = static_cast<Eigen::Index>(alphas.size());
    if (dim >= count && (j % 5 == 4 || last || breakdown)) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alphas.data(), dim);
      Eigen::VectorXd sub(std::max<Eigen::Index>(dim - 1, 0));
      for (Eigen::Index i = 0; i + 1 < dim; ++i) sub[i] = betas[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
      solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      std::vector<Eigen::Index> idx(dim);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) {
        return std::fabs(solver.eigenvalues()[x]) >
               std::fabs(solver.eigenvalues()[y]);
      });
      const double top = std::fabs(solver.eigenvalues()[idx[0]]);
      bool converged = true;
      for (int i = 0; i < count; ++i) {
        const double residual =
            b * std::fabs(solver.eigenvectors()(dim - 1, idx[i]));
        if (residual > tol * std::max(top, kEps)) converged = false;
      }
      if (converged || last || dim == m) {
        if (!converged) {
          throw numerical_error("Lanczos did not converge for B^k P");
        }
        for (int i = 0; i < count; ++i) {
          result.push_back(std::fabs(solver.eigenvalues()[idx[i]]));
        }
        return result;
      }
    }
    if (j + 1 < max_dim) {
      betas.push_back(breakdown ? 0.0 : b);
      if (breakdown) {
        fresh(j + 1);
      } else {
        V.col(j + 1) = w / b;
      }
    }
  }
  throw numerical_error("Lanczos did not converge for B^k P");
}

}  // namespace nbspec
