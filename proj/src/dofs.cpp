#include "vem/dofs.hpp"

#include <algorithm>
#include <cmath>

namespace vem {

int DofLayout::vertex_block() const {
  if (vertex_order < 0) return 0;
  return vertex_order == 0 ? components : 3 * components;
}

int DofLayout::edge_block() const {
  return (edge_order + 1) * components + (edge_normal_order + 1) + (edge_flux_order + 1);
}

bool operator==(const DofLayout& a, const DofLayout& b) {
  return a.components == b.components && a.vertex_order == b.vertex_order && a.edge_order == b.edge_order &&
         a.edge_normal_order == b.edge_normal_order && a.edge_flux_order == b.edge_flux_order &&
         a.inner_order == b.inner_order && a.inner_perp_order == b.inner_perp_order &&
         a.inner_grad_order == b.inner_grad_order && a.coefficient_order == b.coefficient_order;
}

LocalOrdering local_ordering(const Mesh& mesh, int e) {
  const auto& poly = mesh.polygon(e);
  const auto& edges = mesh.element_edges(e);
  const std::size_t n = poly.size();
  const std::size_t r = std::min_element(poly.begin(), poly.end()) - poly.begin();
  LocalOrdering o;
  for (std::size_t i = 0; i < n; ++i) {
    o.vertices.push_back(poly[(r + i) % n]);
    o.edges.push_back(edges[(r + i) % n]);
  }
  return o;
}

ElementDofs::ElementDofs(const Mesh& mesh, int e, const DofLayout& layout, const ScalarBasis& moments,
                         int quad_order)
    : layout_(layout), ordering_(local_ordering(mesh, e)) {
  const int nc = layout.components;
  const double area = mesh.area(e);
  const double sigma = moments.orthonormal() ? std::sqrt(area) : 1.0;
  if (layout.edge_normal_order >= 0 && nc != 1)
    throw ConfigError("normal derivative moments need a scalar space");
  if ((layout.edge_flux_order >= 0 || layout.inner_perp_order >= 0 || layout.inner_grad_order >= 0) && nc != 2)
    throw ConfigError("flux, perp and gradient moments need a vector space");
  const int needed = std::max({layout.inner_order, layout.inner_perp_order, layout.inner_grad_order,
                               layout.coefficient_order});
  if (needed > moments.order()) throw ConfigError("moment basis order too small for the dof layout");

  // sample points: vertices, then edge rules, then the element rule
  struct Sample {
    int first;
    Quadrature quad;
  };
  for (int v : ordering_.vertices) points_.push_back(mesh.vertex(v));
  std::vector<Sample> edge_samples;
  const bool edge_rules = layout.edge_order >= 0 || layout.edge_normal_order >= 0 || layout.edge_flux_order >= 0;
  if (edge_rules)
    for (int s : ordering_.edges) {
      Sample smp{static_cast<int>(points_.size()), mesh.edge_quadrature(s, quad_order)};
      points_.insert(points_.end(), smp.quad.points.begin(), smp.quad.points.end());
      edge_samples.push_back(std::move(smp));
    }
  Sample inner{static_cast<int>(points_.size()), {}};
  if (needed >= 0) {
    inner.quad = mesh.element_quadrature(e, quad_order);
    points_.insert(points_.end(), inner.quad.points.begin(), inner.quad.points.end());
  }

  // descriptors
  const int nv = static_cast<int>(ordering_.vertices.size());
  if (layout.vertex_order >= 0)
    for (int i = 0; i < nv; ++i) {
      const int v = ordering_.vertices[i];
      int slot = 0;
      for (int c = 0; c < nc; ++c)
        dofs_.push_back({DofKind::VertexValue, EntityType::Vertex, v, slot++, 0, c, 0, 1.0});
      if (layout.vertex_order >= 1)
        for (int c = 0; c < nc; ++c)
          for (int d = 0; d < 2; ++d)
            dofs_.push_back(
                {DofKind::VertexGradient, EntityType::Vertex, v, slot++, 0, c, d, mesh.vertex_length_scale(v)});
    }
  for (int i = 0; i < nv && edge_rules; ++i) {
    const int s = ordering_.edges[i];
    int slot = 0;
    for (int c = 0; c < nc; ++c)
      for (int k = 0; k <= layout.edge_order; ++k)
        dofs_.push_back({DofKind::EdgeMoment, EntityType::Edge, s, slot++, k, c, 0, 1.0 / mesh.edge_length(s)});
    for (int k = 0; k <= layout.edge_normal_order; ++k)
      dofs_.push_back({DofKind::EdgeNormalMoment, EntityType::Edge, s, slot++, k, 0, 0, 1.0});
    for (int k = 0; k <= layout.edge_flux_order; ++k)
      dofs_.push_back({DofKind::EdgeFluxMoment, EntityType::Edge, s, slot++, k, 0, 0, 1.0 / mesh.edge_length(s)});
  }
  {
    int slot = 0;
    for (int c = 0; c < nc; ++c)
      for (int j = 0; j < poly_dim(layout.inner_order); ++j)
        dofs_.push_back({DofKind::InnerMoment, EntityType::Element, e, slot++, j, c, 0, sigma / area});
    for (int j = 0; j < poly_dim(layout.inner_perp_order); ++j)
      dofs_.push_back({DofKind::InnerPerpMoment, EntityType::Element, e, slot++, j, 0, 0, sigma / area});
    for (int j = 1; j < poly_dim(layout.inner_grad_order); ++j)
      dofs_.push_back({DofKind::InnerGradMoment, EntityType::Element, e, slot++, j, 0, 0, sigma / std::sqrt(area)});
    for (int c = 0; c < nc; ++c)
      for (int j = 0; j < poly_dim(layout.coefficient_order); ++j)
        dofs_.push_back({DofKind::Coefficient, EntityType::Element, e, slot++, j, c, 0, 1.0});
  }

  // functional matrices
  const int np = static_cast<int>(points_.size());
  value_map_ = Matrix::Zero(size(), np * nc);
  if (needs_gradient()) gradient_map_ = Matrix::Zero(size(), np * nc * 2);
  Matrix mvals, mgrads;
  if (needed >= 0) {
    mvals = moments.values(inner.quad.points);
    if (layout.inner_grad_order >= 0) mgrads = moments.gradients(inner.quad.points);
  }
  auto local_vertex = [&](int v) {
    return static_cast<int>(std::find(ordering_.vertices.begin(), ordering_.vertices.end(), v) -
                            ordering_.vertices.begin());
  };
  auto local_edge = [&](int s) {
    return static_cast<int>(std::find(ordering_.edges.begin(), ordering_.edges.end(), s) - ordering_.edges.begin());
  };
  for (int i = 0; i < size(); ++i) {
    const DofDescriptor& d = dofs_[i];
    switch (d.kind) {
      case DofKind::VertexValue: value_map_(i, local_vertex(d.entity) * nc + d.component) = 1.0; break;
      case DofKind::VertexGradient:
        gradient_map_(i, (local_vertex(d.entity) * nc + d.component) * 2 + d.direction) = d.scale;
        break;
      case DofKind::EdgeMoment:
      case DofKind::EdgeNormalMoment:
      case DofKind::EdgeFluxMoment: {
        const Sample& smp = edge_samples[local_edge(d.entity)];
        const EdgeBasis eb(mesh, d.entity, d.index);
        const Vec2 n = mesh.edge_normal(d.entity);
        for (std::size_t q = 0; q < smp.quad.size(); ++q) {
          const int p = smp.first + static_cast<int>(q);
          const double w = d.scale * smp.quad.weights[q] * std::pow(eb.tau(smp.quad.points[q]), d.index);
          if (d.kind == DofKind::EdgeMoment) value_map_(i, p * nc + d.component) += w;
          else if (d.kind == DofKind::EdgeFluxMoment)
            for (int c = 0; c < 2; ++c) value_map_(i, p * nc + c) += w * n[c];
          else
            for (int dir = 0; dir < 2; ++dir) gradient_map_(i, p * 2 + dir) += w * n[dir];
        }
        break;
      }
      case DofKind::InnerMoment:
      case DofKind::Coefficient:
        for (std::size_t q = 0; q < inner.quad.size(); ++q)
          value_map_(i, (inner.first + q) * nc + d.component) += d.scale * inner.quad.weights[q] * mvals(q, d.index);
        break;
      case DofKind::InnerPerpMoment: {
        const double h = moments.length_scale();
        for (std::size_t q = 0; q < inner.quad.size(); ++q) {
          const Vec2 r = (inner.quad.points[q] - moments.center()) / h;
          const double w = d.scale * inner.quad.weights[q] * mvals(q, d.index);
          value_map_(i, (inner.first + q) * nc + 0) += w * r.y();
          value_map_(i, (inner.first + q) * nc + 1) -= w * r.x();
        }
        break;
      }
      case DofKind::InnerGradMoment:
        for (std::size_t q = 0; q < inner.quad.size(); ++q)
          for (int c = 0; c < 2; ++c)
            value_map_(i, (inner.first + q) * nc + c) +=
                d.scale * inner.quad.weights[q] * mgrads(2 * q + c, d.index);
        break;
    }
  }
}

Matrix ElementDofs::apply(const Matrix& values, const Matrix& gradients) const {
  Matrix out = value_map_ * values;
  if (needs_gradient()) {
    if (gradients.rows() != gradient_map_.cols())
      throw ConfigError("dof evaluation needs gradients of the field");
    out += gradient_map_ * gradients;
  }
  return out;
}

std::vector<int> ElementDofs::edge_subset(int s) const {
  const auto it = std::find(ordering_.edges.begin(), ordering_.edges.end(), s);
  if (it == ordering_.edges.end()) throw TopologyError("edge is not part of the element");
  const std::size_t i = it - ordering_.edges.begin();
  const int a = ordering_.vertices[i], b = ordering_.vertices[(i + 1) % ordering_.vertices.size()];
  std::vector<int> out;
  for (int k = 0; k < size(); ++k) {
    const DofDescriptor& d = dofs_[k];
    if ((d.entity_type == EntityType::Edge && d.entity == s) ||
        (d.entity_type == EntityType::Vertex && (d.entity == a || d.entity == b)))
      out.push_back(k);
  }
  return out;
}

int ElementDofs::find(EntityType type, int entity, int slot) const {
  for (int i = 0; i < size(); ++i)
    if (dofs_[i].entity_type == type && dofs_[i].entity == entity && dofs_[i].slot == slot) return i;
  return -1;
}

}  // namespace vem
