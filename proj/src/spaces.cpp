#include "vem/spaces.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace vem {

Family parse_family(const std::string& name) {
  static const std::map<std::string, Family> names = {
      {"h1-conforming", Family::H1Conforming}, {"h1-nonconforming", Family::H1Nonconforming},
      {"h2-conforming", Family::H2Conforming}, {"h2-nonconforming", Family::H2Nonconforming},
      {"div-free", Family::DivFree},           {"curl-free", Family::CurlFree},
      {"dg", Family::DG}};
  const auto it = names.find(name);
  if (it == names.end()) throw ConfigError("unknown space family '" + name + "'");
  return it->second;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::H1Conforming: return "h1-conforming";
    case Family::H1Nonconforming: return "h1-nonconforming";
    case Family::H2Conforming: return "h2-conforming";
    case Family::H2Nonconforming: return "h2-nonconforming";
    case Family::DivFree: return "div-free";
    case Family::CurlFree: return "curl-free";
    case Family::DG: return "dg";
  }
  return "?";
}

TestSpaces test_spaces_of(Family f, int k) {
  switch (f) {
    case Family::H1Conforming: return {0, k - 2, -1, false, k - 2};
    case Family::H1Nonconforming: return {-1, k - 1, -1, false, k - 2};
    case Family::H2Conforming: return {0, k - 4, k - 3, true, k - 4};
    case Family::H2Nonconforming: return {-1, k - 3, k - 2, true, k - 4};
    default: throw ConfigError(family_name(f) + " has no testSpaces form");
  }
}

DofLayout layout_from_test_spaces(const TestSpaces& ts, int components) {
  DofLayout l;
  l.components = components;
  if (ts.pair) {
    l.vertex_order = ts.vertex + 1;
    l.edge_normal_order = std::max(ts.normal, -1);
  } else {
    l.vertex_order = std::min(ts.vertex, 0) < 0 ? -1 : 0;
  }
  l.edge_order = std::max(ts.edge, -1);
  l.inner_order = std::max(ts.inner, -1);
  if (l.vertex_order > 1) throw ConfigError("vertex derivative dofs above first order are not supported");
  return l;
}

namespace {

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

TupleRecipe scalar_recipe(const SpaceSpec& s, const TestSpaces& ts) {
  const int l = s.order;
  TupleRecipe r;
  r.degree = l;
  r.layout = layout_from_test_spaces(ts, s.components);
  const bool vector = s.components > 1;
  if (vector) check(!ts.pair, "fourth order spaces are scalar");
  r.b0_structure = vector ? Structure::Vector : Structure::Scalar;
  r.b1_structure = vector ? Structure::Matrix : Structure::Vector;
  r.b0_order = l;
  const int q = s.q != -100 ? s.q : (s.stabilization_free ? l : l - 1);
  r.b1_order = q;
  if (ts.pair) {
    const int rr = s.r != -100 ? s.r : (s.stabilization_free ? l - 1 : l - 2);
    r.b2_structure = Structure::Sym;
    r.b2_order = rr;
    if (l == 2 && r.layout.vertex_order == 1) {
      // lowest order C1 space: value projection into P3
      r.b0_order = 3;
      if (s.q == -100) r.b1_order = s.stabilization_free ? 3 : 2;
      if (s.r == -100) r.b2_order = s.stabilization_free ? 2 : 1;
      r.laplace_mean = s.laplace_mean;
    }
  }
  check(r.b1_order >= 0, "gradient basis order must be >= 0");
  check(r.b1_order <= std::max(l, r.b0_order), "gradient basis order must not exceed the space order");
  if (ts.pair) check(r.b2_order >= 0 && r.b2_order <= std::max(l, r.b0_order), "invalid hessian basis order");
  return r;
}

}  // namespace

TupleRecipe make_recipe(const SpaceSpec& s) {
  const int l = s.order;
  TupleRecipe r;
  switch (s.family) {
    case Family::H1Conforming:
    case Family::H1Nonconforming:
    case Family::H2Conforming:
    case Family::H2Nonconforming: {
      if (s.family == Family::H1Conforming || s.family == Family::H1Nonconforming)
        check(l >= 1, "h1 spaces need order >= 1");
      else {
        check(l >= 2, "h2 spaces need order >= 2");
        check(s.components == 1, "h2 spaces are scalar");
      }
      const TestSpaces ts = s.test_spaces ? *s.test_spaces : test_spaces_of(s.family, l);
      r = scalar_recipe(s, ts);
      break;
    }
    case Family::DivFree:
      check(l >= 2, "div-free space needs order >= 2");
      r.degree = l;
      r.layout.components = 2;
      r.layout.vertex_order = 0;
      r.layout.edge_order = l - 2;
      r.layout.inner_perp_order = l - 3;
      r.b0_structure = Structure::Vector;
      r.b0_order = l;
      r.b1_structure = Structure::Matrix;
      r.b1_order = s.q != -100 ? s.q : (s.stabilization_free ? l : l - 1);
      r.reduced_from = 0;
      r.reduced_to = l - 1;
      r.orthonormalize = true;
      break;
    case Family::CurlFree:
      check(l >= 0, "curl-free space needs order >= 0");
      r.degree = l;
      r.layout.components = 2;
      r.layout.edge_flux_order = l;
      r.layout.inner_grad_order = l;
      r.b0_structure = Structure::Gradient;
      r.b0_order = l + 1;
      r.b1_structure = Structure::Isotropic;
      r.b1_order = s.q != -100 ? s.q : l;
      r.reduced_from = l;
      r.reduced_to = l + 1;
      r.orthonormalize = true;
      break;
    case Family::DG:
      check(l >= 0, "dg space needs order >= 0");
      r.degree = l;
      r.layout.components = 1;
      r.layout.coefficient_order = l;
      r.b0_structure = Structure::Scalar;
      r.b0_order = l;
      r.b1_structure = Structure::Vector;
      r.b1_order = -1;
      r.orthonormalize = true;
      break;
  }
  if (s.family != Family::H1Conforming && s.family != Family::H1Nonconforming)
    check(s.components == 1, "only h1 families support independent components");
  if (s.family != Family::DivFree && s.family != Family::CurlFree && s.family != Family::DG)
    r.orthonormalize = s.orthonormalize < 0 ? l >= 3 : s.orthonormalize != 0;
  r.scaling = s.scaling;
  const int top = std::max({r.b0_order, r.b1_order, r.b2_order, r.reduced_to, l});
  r.quad_order = 2 * top + 2;
  return r;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Space::Space(std::shared_ptr<const Mesh> mesh, const SpaceSpec& spec, int threads)
    : mesh_(std::move(mesh)), spec_(spec), recipe_(make_recipe(spec)) {
  components_ = recipe_.b0_structure == Structure::Scalar ? 1 : 2;
  const int ne = mesh_->num_elements();
  tuples_.resize(ne);
  blocks_.resize(ne);
  parallel_for(ne, threads, [&](int e) {
    tuples_[e] = build_tuple(*mesh_, e, recipe_);
    blocks_[e] = build_projections(*mesh_, tuples_[e]);
  });
  // serial numbering in element order
  std::map<DofKey, int> index;
  l2g_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& d = tuples_[e].dofs.descriptors();
    l2g_[e].resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      DofKey k{d[i].entity_type, d[i].entity, d[i].slot};
      const auto [it, inserted] = index.emplace(k, static_cast<int>(keys_.size()));
      if (inserted) keys_.push_back(k);
      l2g_[e][i] = it->second;
    }
  }
}

std::vector<int> Space::boundary_dofs(const std::function<bool(int)>& on) const {
  std::vector<char> vertex(mesh_->num_vertices(), 0), edge(mesh_->num_edges(), 0);
  for (int s = 0; s < mesh_->num_edges(); ++s) {
    const Edge& ed = mesh_->edge(s);
    if (!ed.boundary) continue;
    if (on && !on(s)) continue;
    edge[s] = 1;
    vertex[ed.vertices[0]] = vertex[ed.vertices[1]] = 1;
  }
  std::vector<int> out;
  for (int g = 0; g < size(); ++g) {
    const DofKey& k = keys_[g];
    if ((k.type == EntityType::Vertex && vertex[k.entity]) || (k.type == EntityType::Edge && edge[k.entity]))
      out.push_back(g);
  }
  return out;
}

Vector Space::interpolate(const ValueFn& value, const GradientFn& gradient) const {
  Vector out = Vector::Zero(size());
  const int nc = components_;
  for (int e = 0; e < num_elements(); ++e) {
    const ElementDofs& dofs = tuples_[e].dofs;
    const auto& pts = dofs.points();
    const int np = static_cast<int>(pts.size());
    Matrix vals(np * nc, 1), grads;
    for (int p = 0; p < np; ++p) vals.block(p * nc, 0, nc, 1) = value(pts[p]);
    if (dofs.needs_gradient()) {
      if (!gradient) throw ConfigError("interpolation into this space needs a gradient callback");
      grads.resize(np * nc * 2, 1);
      for (int p = 0; p < np; ++p) {
        const Matrix g = gradient(pts[p]);
        for (int c = 0; c < nc; ++c)
          for (int d = 0; d < 2; ++d) grads((p * nc + c) * 2 + d, 0) = g(c, d);
      }
    }
    const Matrix local = dofs.apply(vals, grads);
    for (int i = 0; i < dofs.size(); ++i) out[l2g_[e][i]] = local(i, 0);
  }
  return out;
}

}  // namespace vem
