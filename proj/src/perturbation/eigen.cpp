#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "fullersim/error.hpp"
#include "fullersim/perturbation.hpp"

namespace fullersim::perturbation {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// T restricted to one connected component, in local indices.
struct LocalOperator {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> columns;
  std::size_t max_degree = 0;

  std::size_t dim() const { return offsets.size() - 1; }
  void apply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t a = 0; a < dim(); ++a) {
      double acc = 0.0;
      for (std::size_t k = offsets[a]; k < offsets[a + 1]; ++k) acc += x[columns[k]];
      y[a] = -acc;
    }
  }
};

LocalOperator restrict_to(const TunnelingMatrix& t, std::span<const std::uint32_t> members,
                          std::span<const std::uint32_t> local_index) {
  LocalOperator op;
  op.offsets.reserve(members.size() + 1);
  op.offsets.push_back(0);
  for (auto a : members) {
    for (auto b : t.row(a)) op.columns.push_back(local_index[b]);
    op.offsets.push_back(op.columns.size());
    op.max_degree = std::max(op.max_degree, t.degree(a));
  }
  return op;
}

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
  int restarts = 0;
};

// Lanczos with full reorthogonalisation, restarted from the current Ritz
// vector until the residual reaches the tolerance.
Eigenpair lowest_eigenpair(const LocalOperator& op, const EigenOptions& opts) {
  const std::size_t n = op.dim();
  Eigenpair out;
  if (n == 1) {
    out.vector = {1.0};
    return out;
  }
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(opts.krylov_dim), n);
  std::vector<std::vector<double>> basis(m, std::vector<double>(n));
  std::vector<double> w(n), y(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> alpha, beta;

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    basis[0] = y;
    alpha.clear();
    beta.clear();
    std::size_t used = 0;
    for (std::size_t j = 0; j < m; ++j) {
      op.apply(basis[j], w);
      alpha.push_back(dot(w, basis[j]));
      // Two Gram-Schmidt passes against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i <= j; ++i) axpy(-dot(w, basis[i]), basis[i], w);
      }
      used = j + 1;
      const double b = std::sqrt(dot(w, w));
      if (j + 1 == m || b < 1e-12) break;
      beta.push_back(b);
      for (std::size_t i = 0; i < n; ++i) basis[j + 1][i] = w[i] / b;
    }
    beta.resize(used - 1);
    auto ritz = lowest_tridiagonal_eigenpair(std::span(alpha.data(), used), beta);

    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < used; ++i) axpy(ritz.vector[i], basis[i], y);
    const double norm = std::sqrt(dot(y, y));
    for (auto& v : y) v /= norm;

    op.apply(y, w);
    const double rayleigh = dot(y, w);
    axpy(-rayleigh, y, w);
    out.value = rayleigh;
    out.residual = std::sqrt(dot(w, w));
    out.restarts = restart;
    if (out.residual <= opts.tolerance) {
      // Perron vector of -T is positive on a connected component.
      if (std::accumulate(y.begin(), y.end(), 0.0) < 0) {
        for (auto& v : y) v = -v;
      }
      out.vector = std::move(y);
      return out;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "Lanczos did not converge: residual %.3e after %d restarts",
                out.residual, opts.max_restarts);
  throw Error(ErrorKind::kNonConvergence, buf);
}

}  // namespace

TridiagonalEigenpair lowest_tridiagonal_eigenpair(std::span<const double> diag,
                                                  std::span<const double> offdiag) {
  // Implicit QL with Wilkinson shifts, accumulating rotations in z.
  const int n = static_cast<int>(diag.size());
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());
  std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);  // z[k*n + i]: row k, column i
  for (int i = 0; i < n; ++i) z[i * n + i] = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw Error(ErrorKind::kNonConvergence, "tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          d[i + 1] = g + (p = s * r);
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z[k * n + i + 1];
            z[k * n + i + 1] = s * z[k * n + i] + c * f;
            z[k * n + i] = c * z[k * n + i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  const int best = static_cast<int>(std::min_element(d.begin(), d.end()) - d.begin());
  TridiagonalEigenpair out{d[best], std::vector<double>(n)};
  for (int k = 0; k < n; ++k) out.vector[k] = z[k * n + best];
  return out;
}

PerturbativeState perturbative_ground_state(const TunnelingMatrix& t, const EigenOptions& opts) {
  PerturbativeState state;
  state.components = connected_components(t);
  const auto& comp = state.components;
  const std::size_t count = comp.sizes.size();
  if (t.dim() == 0) throw Error(ErrorKind::kRange, "empty tunneling matrix");

  std::vector<std::vector<std::uint32_t>> members(count);
  for (std::size_t c = 0; c < count; ++c) members[c].reserve(comp.sizes[c]);
  for (std::size_t a = 0; a < t.dim(); ++a) {
    members[comp.component_of[a]].push_back(static_cast<std::uint32_t>(a));
  }
  std::vector<std::uint32_t> local_index(t.dim());
  for (const auto& mem : members) {
    for (std::size_t k = 0; k < mem.size(); ++k) local_index[mem[k]] = static_cast<std::uint32_t>(k);
  }

  // Largest components first; Gershgorin (-max degree) skips components
  // that cannot reach the current best eigenvalue.
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return comp.sizes[a] > comp.sizes[b]; });

  struct Evaluated {
    std::size_t component;
    double value;
  };
  std::vector<Evaluated> evaluated;
  Eigenpair best;
  std::size_t best_component = 0;
  bool have_best = false;
  for (auto c : order) {
    auto op = restrict_to(t, members[c], local_index);
    const double lower = -static_cast<double>(op.max_degree);
    if (have_best && lower > best.value + opts.tie_tolerance) continue;
    auto pair = lowest_eigenpair(op, opts);
    evaluated.push_back({c, pair.value});
    if (!have_best || pair.value < best.value) {
      best = std::move(pair);
      best_component = c;
      have_best = true;
    }
  }
  for (const auto& ev : evaluated) {
    if (ev.component != best_component &&
        std::abs(ev.value - best.value) <= opts.tie_tolerance) {
      char buf[192];
      std::snprintf(buf, sizeof buf,
                    "components %zu (size %zu) and %zu (size %zu) tie at eigenvalue %.12f",
                    best_component, comp.sizes[best_component], ev.component,
                    comp.sizes[ev.component], best.value);
      throw Error(ErrorKind::kDegenerate, buf);
    }
  }

  state.q.assign(t.dim(), 0.0);
  const auto& mem = members[best_component];
  double total = 0.0;
  for (std::size_t k = 0; k < mem.size(); ++k) total += best.vector[k] * best.vector[k];
  for (std::size_t k = 0; k < mem.size(); ++k) {
    state.q[mem[k]] = best.vector[k] * best.vector[k] / total;
  }
  state.component = static_cast<int>(best_component);
  state.eigenvalue = best.value;
  state.residual = best.residual;
  state.restarts = best.restarts;
  return state;
}

PerturbativeState uniform_ground_state(const GroundStateManifold& m) {
  if (m.size() == 0) throw Error(ErrorKind::kRange, "empty manifold");
  PerturbativeState state;
  state.q.assign(m.size(), 1.0 / static_cast<double>(m.size()));
  state.component = -1;
  return state;
}

}  // namespace fullersim::perturbation
