#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace frontline {

/// Grid families on the fixed domain [0, 1]. D1-D3 refine the trailing
/// intervals of a uniform base grid by (d-j)^p, D4 is geometric with the
/// first interval of length 1/M.
enum class MeshStrategy { D1 = 1, D2 = 2, D3 = 3, D4 = 4 };

std::string to_string(MeshStrategy strategy);
MeshStrategy parse_mesh_strategy(const std::string& text);

struct MeshSpec {
  MeshStrategy strategy = MeshStrategy::D4;
  int N = 20;  // interval count; derived from M and d for D1-D3
  int M = 10;
  int d = 3;
};

/// Weights of the quadratic through three neighbouring nodes, differentiated
/// at the middle node. Index 0 is the left neighbour.
struct DerivativeWeights {
  std::array<double, 3> first{};
  std::array<double, 3> second{};
};

class Mesh {
 public:
  /// `points` must start at 0, end at 1 and be strictly increasing with at
  /// least five entries (N >= 4 intervals).
  explicit Mesh(std::vector<double> points);

  const std::vector<double>& points() const noexcept { return y_; }
  double point(int i) const { return y_[static_cast<std::size_t>(i)]; }
  int intervals() const noexcept { return static_cast<int>(y_.size()) - 1; }
  /// alpha_i = y_i - y_{i-1}, i = 1..N.
  double spacing(int i) const { return alpha_[static_cast<std::size_t>(i)]; }

  /// Stencil at node i for i = 0..N-1. Node 0 uses a mirrored ghost node at
  /// -alpha_1, so its weights act on (C_{-1}, C_0, C_1).
  const DerivativeWeights& stencil(int i) const { return stencils_[static_cast<std::size_t>(i)]; }

  /// d/dy at y = 1 of the quadratic through (y_{N-2}, C_{N-2}), (y_{N-1}, C_{N-1}), (1, 0).
  const std::array<double, 2>& boundary_slope_weights() const noexcept { return slope_; }
  /// d2/dy2 at y = 1 of the cubic through the last three free nodes and (1, 0).
  const std::array<double, 3>& boundary_curvature_weights() const noexcept { return curvature_; }

  bool same_points(const Mesh& other) const noexcept { return y_ == other.y_; }

 private:
  std::vector<double> y_;
  std::vector<double> alpha_;
  std::vector<DerivativeWeights> stencils_;
  std::array<double, 2> slope_{};
  std::array<double, 3> curvature_{};
};

struct BoundaryStencils {
  std::array<double, 2> slope{};      // over C_{N-2}, C_{N-1}
  std::array<double, 3> curvature{};  // over C_{N-3}, C_{N-2}, C_{N-1}
};

Mesh build_mesh(const MeshSpec& spec);

/// Interval count a D1-D3 spec expands to.
int subdivided_interval_count(const MeshSpec& spec);

/// Root q in (0, 1] of sum_{i=1..N} q^{i-1} / M = 1.
double geometric_ratio(int N, int M);

DerivativeWeights interior_stencil(double h1, double h2);

BoundaryStencils boundary_stencils(std::span<const double> y);
inline BoundaryStencils boundary_stencils(const Mesh& mesh) { return boundary_stencils(mesh.points()); }

/// Finite-difference weights for the derivative of order `order` at `at`
/// from the interpolating polynomial through `nodes` (Fornberg's recursion).
std::vector<double> lagrange_derivative_weights(double at, std::span<const double> nodes, int order);

/// Plain-text dump: one row per node with y, spacing and stencil weights,
/// followed by the two boundary rows.
void write_mesh_table(const Mesh& mesh, std::ostream& out);

}  // namespace frontline
