#include "scoreinf/score_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scoreinf/error.hpp"
#include "scoreinf/kernels.hpp"

namespace scoreinf {

DataMatrix::DataMatrix(Matrix values, Domain domain) : values_(std::move(values)), domain_(domain) {
  if (!values_.allFinite()) throw DomainError("data contain non-finite values");
  if (domain_ == Domain::NonNegReals && values_.size() > 0 && values_.minCoeff() < 0.0)
    throw DomainError("data declared non-negative contain a negative value");
}

DataMatrix DataMatrix::rows(const std::vector<Index>& idx) const {
  Matrix out(static_cast<Index>(idx.size()), values_.cols());
  for (size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = values_.row(idx[i]);
  return DataMatrix(std::move(out), domain_);
}

// ---------------------------------------------------------------------------

NodeScoreCache::NodeScoreCache(const ModelSpec& spec, const DataMatrix& data, AssembleOptions opts)
    : spec_(spec), x_(data.values()), n_(data.n()), opts_(opts),
      once_(static_cast<size_t>(spec.p())), blocks_(static_cast<size_t>(spec.p())) {
  if (data.n() == 0) throw EmptyDataError("no samples");
  if (data.p() != spec.p())
    throw DimensionMismatchError("data have " + std::to_string(data.p()) +
                                 " columns but the model has p=" + std::to_string(spec.p()));
  if (spec.domain() == Domain::NonNegReals && x_.minCoeff() < 0.0)
    throw DomainError("negative value in data for a non-negative model");
  if (opts_.center) {
    if (spec.family() != Family::Gaussian)
      throw InputError("centering is only available for the Gaussian family");
    x_.rowwise() -= x_.colwise().mean();
  }
}

std::shared_ptr<const NodeBlock> NodeScoreCache::node(int j) const {
  if (j < 0 || j >= spec_.p()) throw InvalidEdgeError("node out of range");
  const auto slot = static_cast<size_t>(j);
  std::call_once(once_[slot], [&] {
    const int p = spec_.p();
    const Index R = spec_.K() + static_cast<Index>(p - 1) * spec_.L();
    Matrix d1(n_, R), g(n_, R);
    std::vector<double> xi(static_cast<size_t>(p)), r1(static_cast<size_t>(R)),
        r2(static_cast<size_t>(R));
    for (Index i = 0; i < n_; ++i) {
      for (int c = 0; c < p; ++c) xi[static_cast<size_t>(c)] = x_(i, c);
      node_row(spec_, xi, j, r1, r2);
      for (Index r = 0; r < R; ++r) {
        d1(i, r) = r1[static_cast<size_t>(r)];
        g(i, r) = r2[static_cast<size_t>(r)];
      }
    }
    auto block = std::make_shared<NodeBlock>();
    block->gram = kernels::gram(d1);
    block->g_mean = kernels::column_mean(g);
    if (opts_.keep_per_sample) {
      block->d1 = std::move(d1);
      block->g = std::move(g);
    }
    blocks_[slot] = std::move(block);
  });
  return blocks_[slot];
}

// ---------------------------------------------------------------------------

EdgeScoreSystem::EdgeScoreSystem(EdgeIndexMap map, Matrix gamma_hat, Vector g_hat, Index n,
                                 std::shared_ptr<const NodeBlock> node_a,
                                 std::shared_ptr<const NodeBlock> node_b)
    : map_(std::move(map)), gamma_(std::move(gamma_hat)), g_(std::move(g_hat)), n_(n),
      a_(std::move(node_a)), b_(std::move(node_b)) {}

bool EdgeScoreSystem::has_per_sample() const {
  return a_ && b_ && a_->d1.rows() == n_ && b_->d1.rows() == n_;
}

void EdgeScoreSystem::require_per_sample() const {
  if (!has_per_sample())
    throw InputError("per-sample score arrays were not retained for this system");
}

Vector EdgeScoreSystem::gather_a(const Vector& v) const { return v.head(map_.row_length()); }

Vector EdgeScoreSystem::gather_b(const Vector& v) const {
  const Index R = map_.row_length();
  Vector out(R);
  for (Index r = 0; r < R; ++r) out[r] = v[map_.b_position(r)];
  return out;
}

Vector EdgeScoreSystem::phi1_dot(const Vector& v) const {
  require_per_sample();
  return a_->d1 * gather_a(v);
}

Vector EdgeScoreSystem::phi2_dot(const Vector& v) const {
  require_per_sample();
  return b_->d1 * gather_b(v);
}

Vector EdgeScoreSystem::g_dot(const Vector& v) const {
  require_per_sample();
  return a_->g * gather_a(v) + b_->g * gather_b(v);
}

Vector EdgeScoreSystem::influence(const Vector& v, const Vector& theta) const {
  return phi1_dot(v).cwiseProduct(phi1_dot(theta)) + phi2_dot(v).cwiseProduct(phi2_dot(theta)) +
         g_dot(v);
}

Matrix EdgeScoreSystem::influence(const Matrix& V, const Vector& theta) const {
  require_per_sample();
  const Index R = map_.row_length();
  Matrix Va = V.topRows(R);
  Matrix Vb(R, V.cols());
  for (Index r = 0; r < R; ++r) Vb.row(r) = V.row(map_.b_position(r));
  const Vector t1 = phi1_dot(theta);
  const Vector t2 = phi2_dot(theta);
  Matrix out = (a_->d1 * Va).array().colwise() * t1.array();
  out.array() += (b_->d1 * Vb).array().colwise() * t2.array();
  out += a_->g * Va + b_->g * Vb;
  return out;
}

Matrix EdgeScoreSystem::phi1_rows() const {
  require_per_sample();
  Matrix out = Matrix::Zero(n_, dim());
  out.leftCols(map_.row_length()) = a_->d1;
  return out;
}

Matrix EdgeScoreSystem::phi2_rows() const {
  require_per_sample();
  Matrix out = Matrix::Zero(n_, dim());
  for (Index r = 0; r < map_.row_length(); ++r) out.col(map_.b_position(r)) = b_->d1.col(r);
  return out;
}

Matrix EdgeScoreSystem::g_rows() const {
  require_per_sample();
  Matrix out = Matrix::Zero(n_, dim());
  out.leftCols(map_.row_length()) = a_->g;
  for (Index r = 0; r < map_.row_length(); ++r) out.col(map_.b_position(r)) += b_->g.col(r);
  return out;
}

// ---------------------------------------------------------------------------

EdgeScoreSystem assemble(const NodeScoreCache& cache, int a, int b) {
  EdgeIndexMap map = edge_index_map(cache.spec(), a, b);
  auto na = cache.node(a);
  auto nb = cache.node(b);
  const Index R = map.row_length();
  Matrix gamma = Matrix::Zero(map.dim(), map.dim());
  Vector g = Vector::Zero(map.dim());
  gamma.topLeftCorner(R, R) = na->gram;
  g.head(R) = na->g_mean;
  for (Index r = 0; r < R; ++r) {
    const Index pr = map.b_position(r);
    g[pr] += nb->g_mean[r];
    for (Index s = 0; s < R; ++s) gamma(pr, map.b_position(s)) += nb->gram(r, s);
  }
  return EdgeScoreSystem(std::move(map), std::move(gamma), std::move(g), cache.n(), std::move(na),
                         std::move(nb));
}

EdgeScoreSystem assemble(const ModelSpec& spec, const DataMatrix& data, int a, int b,
                         AssembleOptions opts) {
  edge_index_map(spec, a, b);
  NodeScoreCache cache(spec, data, opts);
  return assemble(cache, a, b);
}

ReferenceSystem assemble_reference(const ModelSpec& spec, const DataMatrix& data, int a, int b) {
  if (data.n() == 0) throw EmptyDataError("no samples");
  const EdgeIndexMap map = edge_index_map(spec, a, b);
  const Index n = data.n();
  const Index s = map.dim();
  ReferenceSystem out{Matrix::Zero(s, s), Vector::Zero(s), Matrix(n, s), Matrix(n, s),
                      Matrix(n, s)};
  std::vector<double> xi(static_cast<size_t>(data.p()));
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < data.p(); ++c) xi[static_cast<size_t>(c)] = data.values()(i, c);
    const ScoreComponents sc = score_components(spec, xi, map);
    out.gamma_hat += sc.phi1 * sc.phi1.transpose() + sc.phi2 * sc.phi2.transpose();
    out.g_hat += sc.g;
    out.phi1.row(i) = sc.phi1.transpose();
    out.phi2.row(i) = sc.phi2.transpose();
    out.g.row(i) = sc.g.transpose();
  }
  out.gamma_hat /= static_cast<double>(n);
  out.g_hat /= static_cast<double>(n);
  return out;
}

double objective(const EdgeScoreSystem& system, const Vector& theta) {
  if (theta.size() != system.dim())
    throw DimensionMismatchError("theta has length " + std::to_string(theta.size()) +
                                 ", expected " + std::to_string(system.dim()));
  return 0.5 * theta.dot(system.gamma_hat() * theta) + theta.dot(system.g_hat());
}

Vector gradient(const EdgeScoreSystem& system, const Vector& theta) {
  if (theta.size() != system.dim())
    throw DimensionMismatchError("theta has length " + std::to_string(theta.size()) +
                                 ", expected " + std::to_string(system.dim()));
  return system.gamma_hat() * theta + system.g_hat();
}

NuisanceSystem nuisance_regression_system(const EdgeScoreSystem& system, Index l) {
  const IndexSet& t = system.map().target_indices();
  if (std::find(t.begin(), t.end(), l) == t.end())
    throw InputError("index " + std::to_string(l) + " is not a target coordinate");
  NuisanceSystem out;
  for (Index i = 0; i < system.dim(); ++i)
    if (i != l) out.kept.push_back(i);
  out.A = submatrix(system.gamma_hat(), out.kept, out.kept);
  out.b = subvector(system.gamma_hat().col(l), out.kept);
  return out;
}

}  // namespace scoreinf
