#pragma once

#include "vem/projection.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace vem {

enum class Family { H1Conforming, H1Nonconforming, H2Conforming, H2Nonconforming, DivFree, CurlFree, DG };

Family parse_family(const std::string& name);
std::string family_name(Family f);

/// [vertex, edge, inner] moment orders. With an edge pair [value, normal]
/// the vertex entry counts derivative order minus one, so -1 means values
/// only and 0 values plus gradients.
struct TestSpaces {
  int vertex = -1;
  int edge = -1;
  int normal = -1;
  bool pair = false;
  int inner = -1;
  bool operator==(const TestSpaces&) const = default;
};

struct SpaceSpec {
  Family family = Family::H1Conforming;
  int order = 1;
  int components = 1;  // h1 families only: independent copies
  int q = -100;        // gradient basis order, default per family
  int r = -100;        // hessian basis order
  bool stabilization_free = false;
  std::optional<TestSpaces> test_spaces;
  int orthonormalize = -1;  // -1: default (on for order >= 3)
  bool laplace_mean = true;  // lowest order H2 extra constraint
  Scaling scaling = Scaling::BoundingBox;
};

/// testSpaces tuple of a scalar family; ConfigError for vector families.
TestSpaces test_spaces_of(Family f, int order);
DofLayout layout_from_test_spaces(const TestSpaces& ts, int components);
TupleRecipe make_recipe(const SpaceSpec& spec);

/// Global identity of a dof: the entity it lives on and its slot there.
struct DofKey {
  EntityType type;
  int entity;
  int slot;
  auto operator<=>(const DofKey&) const = default;
};

using ValueFn = std::function<Vector(const Point&)>;     // components
using GradientFn = std::function<Matrix(const Point&)>;  // components x 2

class Space {
public:
  Space(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec, int threads = 0);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const SpaceSpec& spec() const { return spec_; }
  const TupleRecipe& recipe() const { return recipe_; }
  int size() const { return static_cast<int>(keys_.size()); }
  int components() const { return components_; }
  int num_elements() const { return static_cast<int>(tuples_.size()); }
  bool fourth_order() const { return recipe_.b2_order >= 0; }

  const VemTuple& tuple(int e) const { return tuples_[e]; }
  const ProjectionBlock& block(int e) const { return blocks_[e]; }
  const std::vector<int>& local_to_global(int e) const { return l2g_[e]; }
  const DofKey& key(int g) const { return keys_[g]; }

  /// Dofs on the closure of boundary edges accepted by the predicate
  /// (all boundary edges when empty).
  std::vector<int> boundary_dofs(const std::function<bool(int edge)>& on = {}) const;

  /// Applies every dof functional to a smooth field. Gradients are needed
  /// when the layout has derivative dofs.
  Vector interpolate(const ValueFn& value, const GradientFn& gradient = {}) const;

private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceSpec spec_;
  TupleRecipe recipe_;
  int components_ = 1;
  std::vector<VemTuple> tuples_;
  std::vector<ProjectionBlock> blocks_;
  std::vector<std::vector<int>> l2g_;
  std::vector<DofKey> keys_;
};

/// Runs fn(e) for all elements on `threads` workers (0: hardware).
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace vem
