#include "kgz/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace kgz {

namespace {
constexpr double kPi = 3.14159265358979323846;
// Above this the N x N sine matrix is not worth storing; fall back to the
// table walk, which only needs 2(N+1) doubles.
constexpr int kMatrixCutoff = 1024;
}  // namespace

Domain::Domain(int dim, int modes_per_axis, std::vector<double> side_lengths)
    : dim_(dim), modes_(modes_per_axis), lengths_(std::move(side_lengths)) {
  if (dim_ < 1 || dim_ > 3) throw std::invalid_argument("Domain: dim must be 1, 2 or 3");
  if (modes_ < 1) throw std::invalid_argument("Domain: modes_per_axis must be >= 1");
  if (static_cast<int>(lengths_.size()) != dim_)
    throw std::invalid_argument("Domain: need one side length per axis");
  for (double L : lengths_)
    if (!(L > 0.0)) throw std::invalid_argument("Domain: side lengths must be positive");

  lambda1_ = 0.0;
  volume_ = 1.0;
  quad_weight_ = 1.0;
  for (double L : lengths_) {
    lambda1_ += (kPi / L) * (kPi / L);
    volume_ *= L;
    quad_weight_ *= L / (modes_ + 1);
  }

  Eigen::Index total = 1;
  for (int a = 0; a < dim_; ++a) total *= modes_;
  lam_.resize(total);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rest = idx;
    double lam = 0.0;
    for (int a = dim_ - 1; a >= 0; --a) {
      int k = static_cast<int>(rest % modes_) + 1;
      rest /= modes_;
      double f = k * kPi / lengths_[a];
      lam += f * f;
    }
    lam_[idx] = lam;
  }
  sqrt_lam_ = lam_.sqrt();

  int P = 2 * (modes_ + 1);
  sin_table_.resize(P);
  for (int m = 0; m < P; ++m) sin_table_[m] = std::sin(m * kPi / (modes_ + 1));

  if (modes_ <= kMatrixCutoff) {
    sine_matrix_.resize(modes_, modes_);
    for (int j = 0; j < modes_; ++j)
      for (int k = 0; k < modes_; ++k)
        sine_matrix_(j, k) = sin_table_[((j + 1) * (k + 1)) % P];
  }
}

Domain::Domain(int dim, int modes_per_axis, double side_length)
    : Domain(dim, modes_per_axis, std::vector<double>(dim, side_length)) {}

double Domain::eigenvalue(const std::vector<int>& k) const {
  if (static_cast<int>(k.size()) != dim_)
    throw std::invalid_argument("eigenvalue: multi-index has wrong dimension");
  double lam = 0.0;
  for (int a = 0; a < dim_; ++a) {
    if (k[a] < 1 || k[a] > modes_)
      throw std::out_of_range("eigenvalue: index outside truncation range");
    double f = k[a] * kPi / lengths_[a];
    lam += f * f;
  }
  return lam;
}

Eigen::Index Domain::flat_index(const std::vector<int>& k) const {
  if (static_cast<int>(k.size()) != dim_)
    throw std::invalid_argument("flat_index: multi-index has wrong dimension");
  Eigen::Index idx = 0;
  for (int a = 0; a < dim_; ++a) {
    if (k[a] < 1 || k[a] > modes_)
      throw std::out_of_range("flat_index: index outside truncation range");
    idx = idx * modes_ + (k[a] - 1);
  }
  return idx;
}

std::vector<int> Domain::multi_index(Eigen::Index flat) const {
  if (flat < 0 || flat >= num_modes()) throw std::out_of_range("multi_index: flat index out of range");
  std::vector<int> k(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    k[a] = static_cast<int>(flat % modes_) + 1;
    flat /= modes_;
  }
  return k;
}

void Domain::dst_line(const double* in, double* out) const {
  if (sine_matrix_.size() > 0) {
    Eigen::Map<const Eigen::VectorXd> vin(in, modes_);
    Eigen::Map<Eigen::VectorXd> vout(out, modes_);
    vout.noalias() = sine_matrix_ * vin;
    return;
  }
  const int P = 2 * (modes_ + 1);
  for (int k = 0; k < modes_; ++k) {
    const int step = k + 1;
    int idx = step;
    double acc = 0.0;
    for (int j = 0; j < modes_; ++j) {
      acc += in[j] * sin_table_[idx];
      idx += step;
      if (idx >= P) idx -= P;
    }
    out[k] = acc;
  }
}

void Domain::transform_all_axes(Eigen::ArrayXd& data, bool forward) const {
  const Eigen::Index total = data.size();
  std::vector<double> in(modes_), out(modes_);
  for (int axis = 0; axis < dim_; ++axis) {
    // stride between consecutive entries along this axis (axis 0 slowest)
    Eigen::Index stride = 1;
    for (int a = axis + 1; a < dim_; ++a) stride *= modes_;
    // forward (coeffs -> values): sqrt(2/L) S;  inverse: sqrt(2L)/(N+1) S
    const double factor = forward ? std::sqrt(2.0 / lengths_[axis])
                                  : std::sqrt(2.0 * lengths_[axis]) / (modes_ + 1);
    const Eigen::Index lines = total / modes_;
    for (Eigen::Index line = 0; line < lines; ++line) {
      // decompose line index into (outer, inner) around the transformed axis
      Eigen::Index inner = line % stride;
      Eigen::Index outer = line / stride;
      Eigen::Index base = outer * stride * modes_ + inner;
      for (int j = 0; j < modes_; ++j) in[j] = data[base + j * stride];
      dst_line(in.data(), out.data());
      for (int j = 0; j < modes_; ++j) data[base + j * stride] = factor * out[j];
    }
  }
}

Eigen::ArrayXd Domain::synthesize(const Eigen::ArrayXd& coeffs) const {
  if (coeffs.size() != num_modes()) throw std::invalid_argument("synthesize: size mismatch");
  Eigen::ArrayXd data = coeffs;
  transform_all_axes(data, true);
  return data;
}

Eigen::ArrayXd Domain::analyze(const Eigen::ArrayXd& grid) const {
  if (grid.size() != num_modes()) throw std::invalid_argument("analyze: size mismatch");
  Eigen::ArrayXd data = grid;
  transform_all_axes(data, false);
  return data;
}

std::shared_ptr<const Domain> Domain::refined(int factor) const {
  if (factor < 1) throw std::invalid_argument("refined: factor must be >= 1");
  std::lock_guard<std::mutex> lock(refine_mutex_);
  auto it = refined_.find(factor);
  if (it != refined_.end()) return it->second;
  int fine_modes = factor * (modes_ + 1) - 1;
  auto fine = std::make_shared<const Domain>(dim_, fine_modes, lengths_);
  refined_.emplace(factor, fine);
  return fine;
}

bool Domain::same_box(const Domain& other) const {
  return dim_ == other.dim_ && modes_ == other.modes_ && lengths_ == other.lengths_;
}

std::shared_ptr<const Domain> make_domain(int dim, int modes_per_axis, double side_length) {
  return std::make_shared<const Domain>(dim, modes_per_axis, side_length);
}

}  // namespace kgz
