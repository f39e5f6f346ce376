#pragma once

#include <array>
#include <span>
#include <vector>

#include "sobext/outer_constants.hpp"
#include "sobext/pipeline.hpp"

namespace sobext {

/// Value, gradient and Hessian (xx, xy, yy) at a point.
struct Jet {
  double value = 0.0;
  std::array<double, 2> grad{0.0, 0.0};
  std::array<double, 3> hess{0.0, 0.0, 0.0};
};

/// 1 on |t| <= a, 0 on |t| >= b, quintic smoothstep in between. Returns the
/// value and the first two derivatives in t.
std::array<double, 3> plateau(double t, double a, double b);

/// The cutoff chi: 1 on [-3 2^-12, 3 2^-12] x [-2^-12, 2^-12], 0 outside
/// (-2^-10, 2^-10)^2.
Jet cutoff(double x, double y);

/// Half-widths, in units of the side, of the box where phi_Q = 1 (0.9Q) and
/// of its support (1.1Q). The ramp straddles the boundary of Q, so phi_Q >= 1/4
/// on Q.
inline constexpr double kBumpPlateau = 0.45;
inline constexpr double kBumpSupport = 0.55;

/// phi_Q = 1 on 0.9Q, 0 outside 1.1Q; theta_Q = phi_Q / sum of phi over
/// relevant squares.
class BumpSystem {
 public:
  struct Weight {
    SquareId square;
    Jet theta;
  };

  explicit BumpSystem(const CzDecomposition& cz);

  const CzDecomposition& cz() const { return *cz_; }
  Jet bump(SquareId q, double x, double y) const;
  /// Nonzero theta_Q at a point of Q_inner that lies in the CZ square `cell`.
  void weights_in_cell(SquareId cell, double x, double y, std::vector<Weight>& out) const;
  std::vector<Weight> weights(double x, double y) const;

 private:
  const CzDecomposition* cz_;
  std::vector<std::array<double, 3>> geometry_;  // center x, center y, side
};

/// The extension T#f for one data vector, in the normalized frame. Holds
/// references to the pipeline, which must outlive it.
class ExtensionField {
 public:
  ExtensionField(const Pipeline& pipeline, const DataVector& f);

  const Pipeline& pipeline() const { return *pipeline_; }
  const BumpSystem& bumps() const { return bumps_; }
  const DataVector& data() const { return f_plus_; }

  /// T+f+ on Q_inner. Throws ValidationError outside it.
  Jet evaluate_inner(double x, double y) const;
  /// T+f+ with the containing CZ square known.
  Jet evaluate_in_cell(SquareId cell, double x, double y) const;
  /// T#f anywhere in the plane (normalized frame).
  Jet evaluate_global(double x, double y) const;
  /// T#f at a point of Q_inner inside the CZ square `cell`.
  Jet evaluate_global_in_cell(SquareId cell, double x, double y) const { return blend(evaluate_in_cell(cell, x, y), x, y); }
  /// T#f at a point given in user coordinates, derivatives in user coordinates.
  Jet evaluate_user(const RationalPoint& z) const;

  /// L_F = alpha + beta x + gamma y.
  std::array<double, 3> outer_affine() const { return outer_; }

  /// Sites of E the value T#f(x, y) depends on.
  std::vector<SiteIndex> witness(double x, double y) const;

 private:
  struct Neighbor {
    SquareId square;
    double dv;
    double dslope;
  };

  Jet blend(const Jet& inner, double x, double y) const;
  void add_anchor_sites(SquareId q, std::vector<SiteIndex>& out) const;

  const Pipeline* pipeline_;
  BumpSystem bumps_;
  DataVector f_plus_;
  std::vector<double> base_value_;   // f+(zbar(Q)) per square
  std::vector<double> base_slope_;   // D_Q
  std::vector<double> base_xbar_;
  std::vector<std::vector<Neighbor>> offsets_;
  std::array<double, 3> outer_{0.0, 0.0, 0.0};
};

}  // namespace sobext
