#pragma once

#include "vem/basis.hpp"
#include "vem/mesh.hpp"

#include <vector>

namespace vem {

enum class DofKind {
  VertexValue,       // v_c(x_v)
  VertexGradient,    // h_v d_dir v_c(x_v)
  EdgeMoment,        // 1/|s| int_s v_c tau^k
  EdgeNormalMoment,  // int_s (d v / d n_s) tau^k, unweighted
  EdgeFluxMoment,    // 1/|s| int_s (v . n_s) tau^k
  InnerMoment,       // 1/|E| int_E v_c m_j
  InnerPerpMoment,   // 1/|E| int_E v . x^perp m_j
  InnerGradMoment,   // 1/sqrt|E| int_E v . grad m_j
  Coefficient        // int_E v m_j against an orthonormal basis (DG)
};

enum class EntityType { Vertex, Edge, Element };

/// One linear functional of the local dof set. Edge functionals use the
/// global edge orientation (tau from the lower to the higher vertex index,
/// n_s the tangent rotated by -90 degrees) so that neighbours agree.
struct DofDescriptor {
  DofKind kind = DofKind::VertexValue;
  EntityType entity_type = EntityType::Vertex;
  int entity = -1;    // global vertex, edge or element index
  int slot = 0;       // position inside the entity's dof block
  int index = 0;      // moment power or basis member
  int component = 0;  // value component
  int direction = 0;  // derivative direction for vertex gradients
  double scale = 1.0;
};

/// Which functionals a local space uses. Orders of -1 mean absent.
struct DofLayout {
  int components = 1;
  int vertex_order = -1;  // 0: values, 1: values and gradients
  int edge_order = -1;
  int edge_normal_order = -1;
  int edge_flux_order = -1;
  int inner_order = -1;
  int inner_perp_order = -1;
  int inner_grad_order = -1;  // members of M_k without the constant
  int coefficient_order = -1;

  int vertex_block() const;
  int edge_block() const;
  bool needs_gradient() const { return vertex_order >= 1 || edge_normal_order >= 0; }
};

bool operator==(const DofLayout& a, const DofLayout& b);

/// Local vertices start at the lowest global vertex index and run
/// counterclockwise; local edge i joins local vertices i and i+1.
struct LocalOrdering {
  std::vector<int> vertices;
  std::vector<int> edges;
};
LocalOrdering local_ordering(const Mesh& mesh, int e);

/// The dof functionals of one element, stored as a matrix acting on
/// sampled field values (and gradients) at a fixed set of points.
class ElementDofs {
public:
  ElementDofs() = default;
  /// `moments` supplies the element moment test functions; it must have
  /// order >= every inner order in the layout.
  ElementDofs(const Mesh& mesh, int e, const DofLayout& layout, const ScalarBasis& moments, int quad_order);

  int size() const { return static_cast<int>(dofs_.size()); }
  const std::vector<DofDescriptor>& descriptors() const { return dofs_; }
  const DofDescriptor& descriptor(int i) const { return dofs_[i]; }
  const DofLayout& layout() const { return layout_; }
  const LocalOrdering& ordering() const { return ordering_; }
  const std::vector<Point>& points() const { return points_; }
  int components() const { return layout_.components; }
  bool needs_gradient() const { return layout_.needs_gradient(); }

  /// values: rows p * nc + c; gradients: rows (p * nc + c) * 2 + d (may be
  /// empty when no functional needs derivatives). One column per field.
  Matrix apply(const Matrix& values, const Matrix& gradients) const;

  /// Local indices of the dofs located on the closure of global edge s.
  std::vector<int> edge_subset(int s) const;
  /// Local index of the dof matching (kind, entity, slot), or -1.
  int find(EntityType type, int entity, int slot) const;

private:
  DofLayout layout_;
  LocalOrdering ordering_;
  std::vector<DofDescriptor> dofs_;
  std::vector<Point> points_;
  Matrix value_map_;     // dofs x (points * nc)
  Matrix gradient_map_;  // dofs x (points * nc * 2)
};

}  // namespace vem
