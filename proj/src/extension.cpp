#include "sobext/extension.hpp"

#include <algorithm>
#include <cmath>

namespace sobext {

namespace {

constexpr double kInner = 0x1p-10;
constexpr double kSite = 0x1p-11;

}  // namespace

std::array<double, 3> plateau(double t, double a, double b) {
  const double r = std::fabs(t);
  if (r <= a) return {1.0, 0.0, 0.0};
  if (r >= b) return {0.0, 0.0, 0.0};
  const double w = b - a;
  const double u = (b - r) / w;
  const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  const double ds = 30.0 * u * u * (1.0 - u) * (1.0 - u);
  const double dds = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
  const double sign = t < 0 ? -1.0 : 1.0;
  return {s, -sign * ds / w, dds / (w * w)};
}

namespace {

Jet tensor(const std::array<double, 3>& px, const std::array<double, 3>& py) {
  Jet j;
  j.value = px[0] * py[0];
  j.grad = {px[1] * py[0], px[0] * py[1]};
  j.hess = {px[2] * py[0], px[1] * py[1], px[0] * py[2]};
  return j;
}

}  // namespace

Jet cutoff(double x, double y) {
  return tensor(plateau(x, 3.0 * 0x1p-12, kInner), plateau(y, 0x1p-12, kInner));
}

BumpSystem::BumpSystem(const CzDecomposition& cz) : cz_(&cz) {
  geometry_.reserve(cz.size());
  for (const CzSquare& s : cz.squares()) {
    geometry_.push_back({s.square.x_interval().center_d(), s.square.y_interval().center_d(), s.square.side_d()});
  }
}

Jet BumpSystem::bump(SquareId q, double x, double y) const {
  const auto& [cx, cy, side] = geometry_.at(static_cast<std::size_t>(q));
  return tensor(plateau(x - cx, kBumpPlateau * side, kBumpSupport * side),
                plateau(y - cy, kBumpPlateau * side, kBumpSupport * side));
}

void BumpSystem::weights_in_cell(SquareId cell, double x, double y, std::vector<Weight>& out) const {
  out.clear();
  Jet total;
  for (SquareId q : cz_->neighbors(cell)) {
    if (!cz_->square(q).relevant) continue;
    Jet phi = bump(q, x, y);
    if (phi.value == 0.0) continue;
    total.value += phi.value;
    for (int k = 0; k < 2; ++k) total.grad[k] += phi.grad[k];
    for (int k = 0; k < 3; ++k) total.hess[k] += phi.hess[k];
    out.push_back({q, phi});
  }
  if (!(total.value > 0.0)) throw InvariantError("sum of bumps vanishes at a point of Q_inner");
  const double s = total.value;
  const auto& gs = total.grad;
  const auto& hs = total.hess;
  for (Weight& w : out) {
    const Jet phi = w.theta;
    const auto& g = phi.grad;
    const auto& h = phi.hess;
    const double v = phi.value;
    Jet t;
    t.value = v / s;
    for (int k = 0; k < 2; ++k) t.grad[k] = g[k] / s - v * gs[k] / (s * s);
    // (xx, xy, yy) index pairs
    constexpr int a_idx[3] = {0, 0, 1};
    constexpr int b_idx[3] = {0, 1, 1};
    for (int k = 0; k < 3; ++k) {
      const int a = a_idx[k];
      const int b = b_idx[k];
      t.hess[k] = h[k] / s - (g[a] * gs[b] + gs[a] * g[b]) / (s * s) - v * hs[k] / (s * s) +
                  2.0 * v * gs[a] * gs[b] / (s * s * s);
    }
    w.theta = t;
  }
}

std::vector<BumpSystem::Weight> BumpSystem::weights(double x, double y) const {
  if (!(std::fabs(x) <= kInner && std::fabs(y) <= kInner)) throw ValidationError("point outside Q_inner");
  std::vector<Weight> out;
  weights_in_cell(cz_->locate(x, y), x, y, out);
  return out;
}

ExtensionField::ExtensionField(const Pipeline& pipeline, const DataVector& f)
    : pipeline_(&pipeline), bumps_(pipeline.cz), f_plus_(augment(f, pipeline.sites)) {
  const CzDecomposition& cz = pipeline.cz;
  const ExactDataVector exact = augment(to_exact(f), pipeline.sites);
  const std::size_t n = cz.size();
  std::vector<Rational> value(n), slope(n), xbar(n);
  base_value_.assign(n, 0.0);
  base_slope_.assign(n, 0.0);
  base_xbar_.assign(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    if (!cz.square(static_cast<SquareId>(q)).relevant) continue;
    const AffineSlice& s = pipeline.family.slice(static_cast<SquareId>(q));
    value[q] = exact.at(s.zbar);
    slope[q] = s.slope(exact);
    xbar[q] = s.xbar;
    base_value_[q] = to_double(value[q]);
    base_slope_[q] = to_double(slope[q]);
    base_xbar_[q] = pipeline.sites.x_d(s.zbar);
  }
  // L_Q - L_Q0 = dv + dslope (x - xbar(Q0)), computed exactly.
  offsets_.assign(n, {});
  for (std::size_t q0 = 0; q0 < n; ++q0) {
    if (!cz.square(static_cast<SquareId>(q0)).relevant) continue;
    for (SquareId q : cz.neighbors(static_cast<SquareId>(q0))) {
      const auto k = static_cast<std::size_t>(q);
      if (!cz.square(q).relevant) continue;
      const AffineSlice& a = pipeline.family.slice(q);
      const AffineSlice& b = pipeline.family.slice(static_cast<SquareId>(q0));
      if (k == q0 || (a.zbar == b.zbar && a.z1 == b.z1 && a.z2 == b.z2)) {
        offsets_[q0].push_back({q, 0.0, 0.0});
        continue;
      }
      Rational dv = value[k] - value[q0] + slope[k] * (xbar[q0] - xbar[k]);
      Rational ds = slope[k] - slope[q0];
      offsets_[q0].push_back({q, to_double(dv), to_double(ds)});
    }
  }
  const double f_plus = evaluate_inner(kSite, 0.0).value;
  const double f_minus = evaluate_inner(-kSite, 0.0).value;
  const double f_corner = evaluate_inner(kSite, kSite).value;
  outer_ = {(f_plus + f_minus) / 2.0, (f_plus - f_minus) / kInner, (f_corner - f_plus) / kSite};
}

Jet ExtensionField::evaluate_in_cell(SquareId cell, double x, double y) const {
  thread_local std::vector<BumpSystem::Weight> weights;
  bumps_.weights_in_cell(cell, x, y, weights);
  const auto c = static_cast<std::size_t>(cell);
  const double dx = x - base_xbar_[c];
  Jet out;
  out.value = base_value_[c] + base_slope_[c] * dx;
  out.grad = {base_slope_[c], 0.0};
  const auto& offsets = offsets_[c];
  for (const auto& w : weights) {
    auto it = std::find_if(offsets.begin(), offsets.end(), [&](const Neighbor& nb) { return nb.square == w.square; });
    if (it == offsets.end()) throw InvariantError("bump weight for a square outside the neighbor table");
    if (it->dv == 0.0 && it->dslope == 0.0) continue;
    const Jet& t = w.theta;
    const double delta = it->dv + it->dslope * dx;
    const double ds = it->dslope;
    out.value += t.value * delta;
    out.grad[0] += t.grad[0] * delta + t.value * ds;
    out.grad[1] += t.grad[1] * delta;
    out.hess[0] += t.hess[0] * delta + 2.0 * t.grad[0] * ds;
    out.hess[1] += t.hess[1] * delta + t.grad[1] * ds;
    out.hess[2] += t.hess[2] * delta;
  }
  return out;
}

Jet ExtensionField::evaluate_inner(double x, double y) const {
  if (!(std::fabs(x) <= kInner && std::fabs(y) <= kInner)) throw ValidationError("point outside Q_inner");
  return evaluate_in_cell(pipeline_->cz.locate(x, y), x, y);
}

Jet ExtensionField::blend(const Jet& inner, double x, double y) const {
  const Jet chi = cutoff(x, y);
  const auto& [alpha, beta, gamma] = outer_;
  const double affine = alpha + beta * x + gamma * y;
  if (chi.value == 1.0 && chi.grad[0] == 0.0 && chi.grad[1] == 0.0) return inner;
  Jet diff = inner;
  diff.value -= affine;
  diff.grad[0] -= beta;
  diff.grad[1] -= gamma;
  Jet out;
  out.value = chi.value * diff.value + affine;
  out.grad[0] = chi.value * diff.grad[0] + chi.grad[0] * diff.value + beta;
  out.grad[1] = chi.value * diff.grad[1] + chi.grad[1] * diff.value + gamma;
  out.hess[0] = chi.value * diff.hess[0] + 2.0 * chi.grad[0] * diff.grad[0] + diff.value * chi.hess[0];
  out.hess[1] = chi.value * diff.hess[1] + chi.grad[0] * diff.grad[1] + chi.grad[1] * diff.grad[0] +
                diff.value * chi.hess[1];
  out.hess[2] = chi.value * diff.hess[2] + 2.0 * chi.grad[1] * diff.grad[1] + diff.value * chi.hess[2];
  return out;
}

Jet ExtensionField::evaluate_global(double x, double y) const {
  if (!(std::fabs(x) < kInner && std::fabs(y) < kInner)) {
    Jet out;
    out.value = outer_[0] + outer_[1] * x + outer_[2] * y;
    out.grad = {outer_[1], outer_[2]};
    return out;
  }
  return blend(evaluate_inner(x, y), x, y);
}

Jet ExtensionField::evaluate_user(const RationalPoint& z) const {
  const SiteSet& sites = pipeline_->sites;
  RationalPoint local = sites.from_user(z);
  Jet j = evaluate_global(to_double(local.x), to_double(local.y));
  const double s = to_double(sites.scale());
  for (double& g : j.grad) g *= s;
  for (double& h : j.hess) h *= s * s;
  return j;
}

void ExtensionField::add_anchor_sites(SquareId q, std::vector<SiteIndex>& out) const {
  for (SiteIndex s : anchor_sites(pipeline_->anchors, q)) {
    if (s == kAuxSite) {
      out.push_back(pipeline_->sites.min_site());
      out.push_back(pipeline_->sites.max_site());
    } else {
      out.push_back(s);
    }
  }
}

std::vector<SiteIndex> ExtensionField::witness(double x, double y) const {
  std::vector<SiteIndex> out;
  auto inner_sites = [&](double px, double py) {
    SquareId cell = pipeline_->cz.locate(px, py);
    add_anchor_sites(cell, out);
    std::vector<BumpSystem::Weight> weights;
    bumps_.weights_in_cell(cell, px, py, weights);
    for (const auto& w : weights) add_anchor_sites(w.square, out);
  };
  const bool inside = std::fabs(x) < kInner && std::fabs(y) < kInner;
  const double chi = inside ? cutoff(x, y).value : 0.0;
  if (chi > 0.0) inner_sites(x, y);
  if (chi < 1.0) {
    inner_sites(kSite, kSite);
    out.push_back(pipeline_->sites.min_site());
    out.push_back(pipeline_->sites.max_site());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sobext
