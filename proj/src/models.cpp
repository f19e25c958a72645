#include "scoreinf/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scoreinf/error.hpp"

namespace scoreinf {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::NonNegGaussian: return "nonneg_gaussian";
    case Family::NormalConditionalsL1: return "normal_conditionals_l1";
    case Family::NormalConditionalsL2: return "normal_conditionals_l2";
    case Family::ExponentialGM: return "exponential";
  }
  return "unknown";
}

std::string_view to_string(WeightFn w) {
  switch (w) {
    case WeightFn::Identity: return "identity";
    case WeightFn::Square: return "square";
    case WeightFn::LogPlusOne: return "log_plus_one";
  }
  return "unknown";
}

std::string_view to_string(Domain d) {
  return d == Domain::Reals ? "reals" : "nonneg_reals";
}

Family family_from_string(std::string_view s) {
  for (Family f : {Family::Gaussian, Family::NonNegGaussian, Family::NormalConditionalsL1,
                   Family::NormalConditionalsL2, Family::ExponentialGM}) {
    if (s == to_string(f)) return f;
  }
  if (s == "nng") return Family::NonNegGaussian;
  if (s == "nc" || s == "nc_l1") return Family::NormalConditionalsL1;
  if (s == "nc_l2") return Family::NormalConditionalsL2;
  if (s == "egm" || s == "exponential_gm") return Family::ExponentialGM;
  throw InputError("unknown model family '" + std::string(s) + "'");
}

WeightFn weight_fn_from_string(std::string_view s) {
  for (WeightFn w : {WeightFn::Identity, WeightFn::Square, WeightFn::LogPlusOne}) {
    if (s == to_string(w)) return w;
  }
  throw InputError("unknown weight function '" + std::string(s) + "'");
}

int interaction_count(Family f) { return f == Family::NormalConditionalsL2 ? 2 : 1; }

int node_stat_count(Family f) {
  return (f == Family::NormalConditionalsL1 || f == Family::NormalConditionalsL2) ? 2 : 1;
}

Domain family_domain(Family f) {
  return (f == Family::NonNegGaussian || f == Family::ExponentialGM) ? Domain::NonNegReals
                                                                      : Domain::Reals;
}

WeightFn default_weight_fn(Family f) {
  return family_domain(f) == Domain::Reals ? WeightFn::Identity : WeightFn::LogPlusOne;
}

double weight_value(WeightFn w, double x) {
  switch (w) {
    case WeightFn::Identity: return 1.0;
    case WeightFn::Square: return x * x;
    case WeightFn::LogPlusOne: return std::log1p(x);
  }
  return 1.0;
}

double weight_derivative(WeightFn w, double x) {
  switch (w) {
    case WeightFn::Identity: return 0.0;
    case WeightFn::Square: return 2.0 * x;
    case WeightFn::LogPlusOne: return 1.0 / (x + 1.0);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// ModelSpec

ModelSpec::ModelSpec(Family family, int p, std::vector<Matrix> edge_params,
                     std::vector<Vector> node_params, WeightFn weight_fn)
    : family_(family),
      p_(p),
      edge_params_(std::move(edge_params)),
      node_params_(std::move(node_params)),
      weight_fn_(weight_fn) {
  if (p_ < 2) throw InvalidSpecError("a model needs at least two nodes");
  if (static_cast<int>(edge_params_.size()) != L())
    throw InvalidSpecError("family " + std::string(to_string(family_)) + " expects " +
                           std::to_string(L()) + " edge parameter matrices");
  if (static_cast<int>(node_params_.size()) != K())
    throw InvalidSpecError("family " + std::string(to_string(family_)) + " expects " +
                           std::to_string(K()) + " node parameter vectors");
  for (const Matrix& m : edge_params_) {
    if (m.rows() != p_ || m.cols() != p_)
      throw InvalidSpecError("edge parameter matrix must be p x p");
    for (Index i = 0; i < p_; ++i) {
      if (m(i, i) != 0.0) throw InvalidSpecError("edge parameter matrix must have zero diagonal");
      for (Index j = i + 1; j < p_; ++j)
        if (m(i, j) != m(j, i)) throw InvalidSpecError("edge parameter matrix must be symmetric");
    }
    if (!m.allFinite()) throw InvalidSpecError("edge parameters must be finite");
  }
  for (const Vector& v : node_params_) {
    if (v.size() != p_) throw InvalidSpecError("node parameter vector must have length p");
    if (!v.allFinite()) throw InvalidSpecError("node parameters must be finite");
  }
  const bool reals = domain() == Domain::Reals;
  if (reals != (weight_fn_ == WeightFn::Identity))
    throw InvalidSpecError("weight function Identity is used exactly for real-valued families");
  if (family_ == Family::ExponentialGM) {
    for (const Matrix& m : edge_params_)
      if ((m.array() < 0.0).any())
        throw InvalidSpecError("exponential graphical model needs non-negative interactions");
    for (const Vector& v : node_params_)
      if ((v.array() < 0.0).any())
        throw InvalidSpecError("exponential graphical model needs non-negative node parameters");
  }
}

ModelSpec ModelSpec::structure(Family family, int p) {
  return structure(family, p, default_weight_fn(family));
}

ModelSpec ModelSpec::structure(Family family, int p, WeightFn weight_fn) {
  std::vector<Matrix> edges(static_cast<size_t>(interaction_count(family)), Matrix::Zero(p, p));
  std::vector<Vector> nodes(static_cast<size_t>(node_stat_count(family)), Vector::Zero(p));
  return ModelSpec(family, p, std::move(edges), std::move(nodes), weight_fn);
}

Matrix ModelSpec::precision() const {
  if (family_ != Family::Gaussian && family_ != Family::NonNegGaussian)
    throw InvalidSpecError("precision() is defined for the Gaussian families only");
  Matrix omega = edge_params_[0];
  omega.diagonal() = node_params_[0];
  return omega;
}

// ---------------------------------------------------------------------------
// EdgeIndexMap

Index row_slot(int K, int L, int j, int c, int l) {
  const int pos = c < j ? c : c - 1;
  return K + static_cast<Index>(pos) * L + l;
}

EdgeIndexMap::EdgeIndexMap(int p, int K, int L, int a, int b)
    : p_(p), K_(K), L_(L), a_(a), b_(b) {
  if (a < 0 || b < 0 || a >= p || b >= p)
    throw InvalidEdgeError("edge (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                           ") is out of range for p=" + std::to_string(p));
  if (a == b) throw InvalidEdgeError("edge endpoints must differ");
  if (a > b) throw InvalidEdgeError("edge must be given with a < b");
  row_len_ = K + static_cast<Index>(p - 1) * L;
  dim_ = 2 * K + static_cast<Index>(2 * (p - 2) + 1) * L;

  slots_.reserve(static_cast<size_t>(dim_));
  for (int k = 0; k < K; ++k) slots_.push_back({SlotRole::Kind::NodeA, -1, k});
  for (int c = 0; c < p; ++c) {
    if (c == a) continue;
    for (int l = 0; l < L; ++l) {
      if (c == b) {
        targets_.push_back(static_cast<Index>(slots_.size()));
        slots_.push_back({SlotRole::Kind::Target, b, l});
      } else {
        slots_.push_back({SlotRole::Kind::CrossA, c, l});
      }
    }
  }
  for (int k = 0; k < K; ++k) slots_.push_back({SlotRole::Kind::NodeB, -1, k});
  for (int c = 0; c < p; ++c) {
    if (c == a || c == b) continue;
    for (int l = 0; l < L; ++l) slots_.push_back({SlotRole::Kind::CrossB, c, l});
  }

  // b-row coordinates: node stats, then (b,c) for c != b; c == a is the target.
  b_pos_.assign(static_cast<size_t>(row_len_), 0);
  for (int k = 0; k < K; ++k) b_pos_[static_cast<size_t>(k)] = row_len_ + k;
  Index next = row_len_ + K;
  for (int c = 0; c < p; ++c) {
    if (c == b) continue;
    for (int l = 0; l < L; ++l) {
      const Index r = row_slot(K, L, b, c, l);
      if (c == a) {
        b_pos_[static_cast<size_t>(r)] = targets_[static_cast<size_t>(l)];
      } else {
        b_pos_[static_cast<size_t>(r)] = next++;
      }
    }
  }

  if (L == 1) {
    for (Index i = 0; i < dim_; ++i) ungrouped_.push_back(i);
  } else {
    for (int k = 0; k < K; ++k) ungrouped_.push_back(k);
    for (Index t : targets_) ungrouped_.push_back(t);
    for (int k = 0; k < K; ++k) ungrouped_.push_back(row_len_ + k);
    std::sort(ungrouped_.begin(), ungrouped_.end());
    for (int c = 0; c < p; ++c) {
      if (c == a || c == b) continue;
      IndexSet block;
      for (int l = 0; l < L; ++l) block.push_back(row_slot(K, L, a, c, l));
      groups_.push_back(block);
    }
    for (int c = 0; c < p; ++c) {
      if (c == a || c == b) continue;
      IndexSet block;
      for (int l = 0; l < L; ++l) block.push_back(b_position(row_slot(K, L, b, c, l)));
      groups_.push_back(block);
    }
  }
}

EdgeIndexMap edge_index_map(const ModelSpec& spec, int a, int b) {
  return EdgeIndexMap(spec.p(), spec.K(), spec.L(), a, b);
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

// Raw derivative psi and second derivative psi'' of node j's statistics.
void raw_node_row(Family family, int p, std::span<const double> x, int j, std::span<double> d1,
                  std::span<double> d2) {
  const int K = node_stat_count(family);
  const int L = interaction_count(family);
  const double xj = x[static_cast<size_t>(j)];
  switch (family) {
    case Family::Gaussian:
    case Family::NonNegGaussian:
      d1[0] = -xj;
      d2[0] = -1.0;
      break;
    case Family::ExponentialGM:
      d1[0] = -1.0;
      d2[0] = 0.0;
      break;
    case Family::NormalConditionalsL1:
    case Family::NormalConditionalsL2:
      d1[0] = 1.0;
      d2[0] = 0.0;
      d1[1] = 2.0 * xj;
      d2[1] = 2.0;
      break;
  }
  for (int c = 0; c < p; ++c) {
    if (c == j) continue;
    const double xc = x[static_cast<size_t>(c)];
    const auto base = static_cast<size_t>(row_slot(K, L, j, c, 0));
    switch (family) {
      case Family::Gaussian:
      case Family::NonNegGaussian:
      case Family::ExponentialGM:
        d1[base] = -xc;
        d2[base] = 0.0;
        break;
      case Family::NormalConditionalsL1:
        d1[base] = 2.0 * xj * xc * xc;
        d2[base] = 2.0 * xc * xc;
        break;
      case Family::NormalConditionalsL2:
        d1[base] = xc;
        d2[base] = 0.0;
        d1[base + 1] = 2.0 * xj * xc * xc;
        d2[base + 1] = 2.0 * xc * xc;
        break;
    }
  }
}

double node_stat_value(Family family, int k, double xj) {
  switch (family) {
    case Family::Gaussian:
    case Family::NonNegGaussian: return -0.5 * xj * xj;
    case Family::ExponentialGM: return -xj;
    case Family::NormalConditionalsL1:
    case Family::NormalConditionalsL2: return k == 0 ? xj : xj * xj;
  }
  return 0.0;
}

double edge_stat_value(Family family, int l, double xj, double xc) {
  switch (family) {
    case Family::Gaussian:
    case Family::NonNegGaussian:
    case Family::ExponentialGM: return -xj * xc;
    case Family::NormalConditionalsL1: return xj * xj * xc * xc;
    case Family::NormalConditionalsL2: return l == 0 ? xj * xc : xj * xj * xc * xc;
  }
  return 0.0;
}

}  // namespace

void check_domain(const ModelSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.p())
    throw DimensionMismatchError("sample length " + std::to_string(x.size()) +
                                 " does not match p=" + std::to_string(spec.p()));
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("sample contains a non-finite value");
    if (spec.domain() == Domain::NonNegReals && v < 0.0)
      throw DomainError("negative value in non-negative model");
  }
}

void node_row(const ModelSpec& spec, std::span<const double> x, int j, std::span<double> d1,
              std::span<double> g) {
  raw_node_row(spec.family(), spec.p(), x, j, d1, g);
  const WeightFn w = spec.weight_fn();
  if (w == WeightFn::Identity) return;
  const double xj = x[static_cast<size_t>(j)];
  const double lv = weight_value(w, xj);
  const double ld = weight_derivative(w, xj);
  const double root = std::sqrt(lv);
  for (size_t r = 0; r < d1.size(); ++r) {
    g[r] = lv * g[r] + ld * d1[r];
    d1[r] *= root;
  }
}

ScoreComponents score_components(const ModelSpec& spec, std::span<const double> x,
                                 const EdgeIndexMap& map) {
  check_domain(spec, x);
  const auto R = static_cast<size_t>(map.row_length());
  std::vector<double> d1(R), g(R);
  ScoreComponents out{Vector::Zero(map.dim()), Vector::Zero(map.dim()), Vector::Zero(map.dim())};

  node_row(spec, x, map.a(), d1, g);
  for (size_t r = 0; r < R; ++r) {
    const Index pos = map.a_position(static_cast<Index>(r));
    out.phi1[pos] = d1[r];
    out.g[pos] += g[r];
  }
  node_row(spec, x, map.b(), d1, g);
  for (size_t r = 0; r < R; ++r) {
    const Index pos = map.b_position(static_cast<Index>(r));
    out.phi2[pos] = d1[r];
    out.g[pos] += g[r];
  }
  return out;
}

Vector sufficient_statistics(const ModelSpec& spec, std::span<const double> x,
                             const EdgeIndexMap& map) {
  Vector out(map.dim());
  const auto& slots = map.slots();
  const auto xa = x[static_cast<size_t>(map.a())];
  const auto xb = x[static_cast<size_t>(map.b())];
  for (size_t i = 0; i < slots.size(); ++i) {
    const SlotRole& s = slots[i];
    double v = 0.0;
    switch (s.kind) {
      case SlotRole::Kind::NodeA: v = node_stat_value(spec.family(), s.stat, xa); break;
      case SlotRole::Kind::NodeB: v = node_stat_value(spec.family(), s.stat, xb); break;
      case SlotRole::Kind::CrossA:
        v = edge_stat_value(spec.family(), s.stat, xa, x[static_cast<size_t>(s.other)]);
        break;
      case SlotRole::Kind::CrossB:
        v = edge_stat_value(spec.family(), s.stat, xb, x[static_cast<size_t>(s.other)]);
        break;
      case SlotRole::Kind::Target: v = edge_stat_value(spec.family(), s.stat, xa, xb); break;
    }
    out[static_cast<Index>(i)] = v;
  }
  return out;
}

Vector true_edge_value(const ModelSpec& spec, int a, int b) {
  if (a < 0 || b < 0 || a >= spec.p() || b >= spec.p() || a == b)
    throw InvalidEdgeError("invalid edge");
  Vector out(spec.L());
  for (int l = 0; l < spec.L(); ++l) out[l] = spec.edge_params(l)(a, b);
  return out;
}

Vector true_edge_block(const ModelSpec& spec, const EdgeIndexMap& map) {
  Vector out(map.dim());
  const auto& slots = map.slots();
  for (size_t i = 0; i < slots.size(); ++i) {
    const SlotRole& s = slots[i];
    double v = 0.0;
    switch (s.kind) {
      case SlotRole::Kind::NodeA: v = spec.node_params(s.stat)[map.a()]; break;
      case SlotRole::Kind::NodeB: v = spec.node_params(s.stat)[map.b()]; break;
      case SlotRole::Kind::CrossA: v = spec.edge_params(s.stat)(map.a(), s.other); break;
      case SlotRole::Kind::CrossB: v = spec.edge_params(s.stat)(map.b(), s.other); break;
      case SlotRole::Kind::Target: v = spec.edge_params(s.stat)(map.a(), map.b()); break;
    }
    out[static_cast<Index>(i)] = v;
  }
  return out;
}

}  // namespace scoreinf
