#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fullersim/manifold.hpp"
#include "fullersim/topology.hpp"

namespace fullersim::perturbation {

using manifold::GroundStateManifold;
using topology::FullereneGraph;

// Precomputed bit tests for the floppy-dimer criterion on a cubic graph.
// Bond (i,j) is floppy when i's other two neighbours contribute opposite
// bond energies to i, and likewise for j: then flipping both spins leaves
// the classical energy unchanged.
class DimerDetector {
 public:
  explicit DimerDetector(const FullereneGraph& g);

  int n_vertices() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return stencils_.size(); }

  bool is_floppy(std::size_t edge, std::uint64_t bits) const noexcept {
    const auto& s = stencils_[edge];
    return ((((bits >> s.i1) ^ (bits >> s.i2)) & 1U) == s.i_parity) &&
           ((((bits >> s.j1) ^ (bits >> s.j2)) & 1U) == s.j_parity);
  }
  std::uint64_t flip_mask(std::size_t edge) const noexcept { return stencils_[edge].flip; }

  int count(std::uint64_t bits) const noexcept;
  std::vector<int> floppy_edges(std::uint64_t bits) const;

 private:
  struct Stencil {
    std::uint8_t i1, i2, j1, j2;
    std::uint64_t i_parity, j_parity;  // required (bit xor) of the outer pairs
    std::uint64_t flip;
  };
  int n_;
  std::vector<Stencil> stencils_;
};

// Edge indices of the floppy dimers of c.
std::vector<int> floppy_dimers(const FullereneGraph& g, const SpinConfig& c);

// Symmetric adjacency over manifold indices; every stored pair carries the
// matrix value -1, the diagonal is zero.
class TunnelingMatrix {
 public:
  TunnelingMatrix(std::vector<std::size_t> row_offsets, std::vector<std::uint32_t> columns);

  std::size_t dim() const noexcept { return row_offsets_.size() - 1; }
  std::size_t nonzeros() const noexcept { return columns_.size(); }
  std::span<const std::uint32_t> row(std::size_t a) const noexcept {
    return {columns_.data() + row_offsets_[a], columns_.data() + row_offsets_[a + 1]};
  }
  std::size_t degree(std::size_t a) const noexcept {
    return row_offsets_[a + 1] - row_offsets_[a];
  }
  // y = T x
  void multiply(std::span<const double> x, std::span<double> y) const noexcept;
  bool is_symmetric() const;

 private:
  std::vector<std::size_t> row_offsets_;
  std::vector<std::uint32_t> columns_;
};

// Links each manifold state to the partner reached by flipping each of its
// floppy dimers. A missing partner means the manifold is incomplete
// (kConsistency).
TunnelingMatrix build_tunneling_matrix(const GroundStateManifold& m, const FullereneGraph& g,
                                       int threads = 1);

struct ComponentReport {
  std::vector<std::uint32_t> component_of;  // per manifold index
  std::vector<std::size_t> sizes;           // labels ordered by smallest member
  std::size_t isolated = 0;                 // singleton components
};

ComponentReport connected_components(const TunnelingMatrix& t);

struct PerturbativeState {
  std::vector<double> q;  // per manifold index, sums to one
  int component = -1;     // component carrying the extremal eigenvector
  double eigenvalue = 0.0;
  double residual = 0.0;  // ||T v - lambda v|| for the unit eigenvector
  int restarts = 0;
  ComponentReport components;
};

struct EigenOptions {
  double tolerance = 1e-10;      // residual target
  double tie_tolerance = 1e-9;   // components closer than this are degenerate
  int krylov_dim = 40;
  int max_restarts = 5000;
};

// Extremal (most negative) eigenvector of T, found per connected component
// by restarted Lanczos. Ties between components raise kDegenerate.
PerturbativeState perturbative_ground_state(const TunnelingMatrix& t,
                                            const EigenOptions& opts = {});

PerturbativeState uniform_ground_state(const GroundStateManifold& m);

// Lowest eigenpair of a symmetric tridiagonal matrix (diag, offdiag of
// length diag.size()-1). Eigenvector has unit norm.
struct TridiagonalEigenpair {
  double value;
  std::vector<double> vector;
};
TridiagonalEigenpair lowest_tridiagonal_eigenpair(std::span<const double> diag,
                                                  std::span<const double> offdiag);

}  // namespace fullersim::perturbation
