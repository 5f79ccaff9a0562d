#include "gpt/composite.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace gpt {

std::string to_string(TensorVariant v) {
  switch (v) {
    case TensorVariant::min: return "min";
    case TensorVariant::max: return "max";
    case TensorVariant::custom: return "custom";
  }
  return "?";
}

CompositePtr make_composite(SpacePtr a, SpacePtr b, TensorVariant variant, Polytope joint) {
  return CompositePtr(new CompositeSpace(std::move(a), std::move(b), variant, std::move(joint)));
}

CompositeSpace::CompositeSpace(SpacePtr a, SpacePtr b, TensorVariant variant, Polytope joint)
    : StateSpace(Trusted{}, a->name() + " (x)" + to_string(variant) + " " + b->name(), std::move(joint),
                 kron(a->unit(), b->unit())),
      a_(std::move(a)),
      b_(std::move(b)),
      variant_(variant) {
  const std::size_t da = a_->dim();
  const std::size_t db = b_->dim();
  marginal_a_ = Matrix(da, da * db);
  marginal_b_ = Matrix(db, da * db);
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < db; ++j) {
      marginal_a_(i, i * db + j) = b_->unit()[j];
      marginal_b_(j, i * db + j) = a_->unit()[i];
    }
  }
}

Vec CompositeSpace::marginal_a(const Vec& joint) const {
  if (joint.size() != dim()) throw std::invalid_argument("marginal_a: dimension mismatch");
  if (dot(unit(), joint) != 1) throw std::invalid_argument("marginal_a: joint vector is not normalised");
  return marginal_a_ * joint;
}

Vec CompositeSpace::marginal_b(const Vec& joint) const {
  if (joint.size() != dim()) throw std::invalid_argument("marginal_b: dimension mismatch");
  if (dot(unit(), joint) != 1) throw std::invalid_argument("marginal_b: joint vector is not normalised");
  return marginal_b_ * joint;
}

bool CompositeSpace::symmetric_factors() const {
  return a_ == b_ || (a_->unit() == b_->unit() && a_->vertices() == b_->vertices());
}

Matrix CompositeSpace::swap_matrix() const {
  if (!symmetric_factors()) throw std::invalid_argument("swap: factors differ");
  const std::size_t d = a_->dim();
  Matrix s(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1;
  }
  return s;
}

CompositePtr min_tensor(SpacePtr a, SpacePtr b) {
  std::vector<Vec> products;
  for (const auto& v : a->vertices()) {
    for (const auto& w : b->vertices()) products.push_back(kron(v, w));
  }
  const std::size_t d = a->dim() * b->dim();
  return make_composite(std::move(a), std::move(b), TensorVariant::min, Polytope::from_vertices(d, std::move(products)));
}

HRep max_tensor_constraints(const StateSpace& a, const StateSpace& b) {
  HRep h;
  h.dim = a.dim() * b.dim();
  for (const auto& e : a.extreme_effects()) {
    for (const auto& f : b.extreme_effects()) h.inequalities.push_back({scale(kron(e, f), -1), 0});
  }
  h.equalities.push_back({kron(a.unit(), b.unit()), 1});
  return h;
}

CompositePtr max_tensor(SpacePtr a, SpacePtr b) {
  HRep h = max_tensor_constraints(*a, *b);
  return make_composite(std::move(a), std::move(b), TensorVariant::max, Polytope::from_halfspaces(std::move(h)));
}

CompositePtr custom_tensor(SpacePtr a, SpacePtr b, HRep joint) {
  if (joint.dim != a->dim() * b->dim()) throw std::invalid_argument("custom tensor: joint dimension mismatch");
  Polytope poly = Polytope::from_halfspaces(std::move(joint));
  if (poly.is_empty()) throw std::invalid_argument("custom tensor: joint state space is empty");
  for (const auto& v : a->vertices()) {
    for (const auto& w : b->vertices()) {
      if (!poly.contains(kron(v, w))) {
        throw std::invalid_argument("custom tensor: product state " + to_string(kron(v, w)) + " is excluded");
      }
    }
  }
  const HRep maxh = max_tensor_constraints(*a, *b);
  for (const auto& v : poly.vertices()) {
    for (const auto& hs : maxh.inequalities) {
      if (dot(hs.normal, v) > hs.offset) {
        throw std::invalid_argument("custom tensor: vertex " + to_string(v) + " lies outside the maximal tensor product");
      }
    }
    if (dot(maxh.equalities[0].normal, v) != 1) {
      throw std::invalid_argument("custom tensor: vertex " + to_string(v) + " is not normalised");
    }
  }
  return make_composite(std::move(a), std::move(b), TensorVariant::custom, std::move(poly));
}

CompositePtr make_tensor(SpacePtr a, SpacePtr b, TensorVariant variant) {
  if (variant == TensorVariant::custom) {
    throw std::invalid_argument("make_tensor: custom composites need an explicit H-representation");
  }
  // A live composite keeps its factors alive, so the raw pointers in an
  // unexpired key cannot have been reused.
  using Key = std::tuple<const StateSpace*, const StateSpace*, TensorVariant>;
  static std::mutex mutex;
  static std::map<Key, std::weak_ptr<const CompositeSpace>> cache;
  const Key key{a.get(), b.get(), variant};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) {
      if (auto hit = it->second.lock()) return hit;
    }
  }
  CompositePtr built = variant == TensorVariant::min ? min_tensor(std::move(a), std::move(b))
                                                     : max_tensor(std::move(a), std::move(b));
  std::lock_guard lock(mutex);
  auto& slot = cache[key];
  if (auto hit = slot.lock()) return hit;
  slot = built;
  return built;
}

Vec product_state(const StateSpace& a, const Vec& wa, const StateSpace& b, const Vec& wb) {
  if (wa.size() != a.dim() || wb.size() != b.dim()) throw std::invalid_argument("product_state: dimension mismatch");
  if (!a.contains(wa) || !b.contains(wb)) throw std::invalid_argument("product_state: factor is not a state");
  return kron(wa, wb);
}

}  // namespace gpt
