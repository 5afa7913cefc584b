#include "itersig/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace itersig {

namespace {

void check_vector(std::span<const double> v, int d, const char* who) {
  if (static_cast<int>(v.size()) != d)
    throw std::invalid_argument(std::string(who) + ": vector has dimension " +
                                std::to_string(v.size()) + ", state has " + std::to_string(d));
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": non-finite input entry");
}

}  // namespace

LevelTensor::LevelTensor(int degree, int d) : degree_(degree), d_(d) {
  if (degree < 0 || d < 1) throw std::invalid_argument("LevelTensor: bad (degree, d)");
  values_.assign(level_size(d, degree), 0.0);
}

bool LevelTensor::all_finite() const {
  for (double x : values_)
    if (!std::isfinite(x)) return false;
  return true;
}

LevelTensor outer_append(const LevelTensor& t, std::span<const double> v) {
  check_vector(v, t.dimension(), "outer_append");
  const int d = t.dimension();
  LevelTensor out(t.degree() + 1, d);
  std::size_t k = 0;
  for (std::size_t a = 0; a < t.size(); ++a) {
    const double base = t[a];
    for (int i = 0; i < d; ++i) out[k++] = base * v[static_cast<std::size_t>(i)];
  }
  return out;
}

SignatureState::SignatureState(int d, int depth, bool compensated)
    : d_(d), depth_(depth), compensated_(compensated) {
  if (d < 1) throw std::invalid_argument("SignatureState: dimension must be >= 1");
  if (depth < 1) throw std::invalid_argument("SignatureState: truncation depth must be >= 1");
  levels_.reserve(static_cast<std::size_t>(depth) + 1);
  for (int n = 0; n <= depth; ++n) levels_.emplace_back(n, d);
  levels_[0][0] = 1.0;
  if (compensated_) {
    carry_.resize(static_cast<std::size_t>(depth) + 1);
    for (int n = 0; n <= depth; ++n) carry_[static_cast<std::size_t>(n)].assign(level_size(d, n), 0.0);
  }
}

SignatureState SignatureState::identity(int d, int depth, bool compensated) {
  return SignatureState(d, depth, compensated);
}

SignatureState SignatureState::from_levels(int d, int depth, std::vector<LevelTensor> levels,
                                           double count) {
  SignatureState out(d, depth);
  if (levels.size() != static_cast<std::size_t>(depth) + 1)
    throw std::invalid_argument("from_levels: need exactly depth+1 levels");
  for (int n = 0; n <= depth; ++n) {
    const auto& level = levels[static_cast<std::size_t>(n)];
    if (level.degree() != n || level.dimension() != d || level.size() != level_size(d, n))
      throw std::invalid_argument("from_levels: level " + std::to_string(n) + " has the wrong shape");
    if (!level.all_finite()) throw std::invalid_argument("from_levels: non-finite entry");
  }
  if (levels[0][0] != 1.0) throw std::invalid_argument("from_levels: level 0 must be the scalar 1");
  out.levels_ = std::move(levels);
  out.count_ = count;
  return out;
}

const LevelTensor& SignatureState::level(int n) const {
  if (n < 0 || n > depth_)
    throw std::out_of_range("SignatureState: level " + std::to_string(n) +
                            " outside truncation depth " + std::to_string(depth_));
  return levels_[static_cast<std::size_t>(n)];
}

double SignatureState::entry(const Word& w) const {
  if (w.d != d_) throw std::invalid_argument("SignatureState::entry: word dimension mismatch");
  return level(w.degree())[flatten_index(w)];
}

void SignatureState::accumulate(int level, std::size_t idx, double term) {
  auto& value = levels_[static_cast<std::size_t>(level)][idx];
  if (!compensated_) {
    value += term;
    return;
  }
  auto& carry = carry_[static_cast<std::size_t>(level)][idx];
  const double y = term - carry;
  const double t = value + y;
  carry = (t - value) - y;
  value = t;
}

void SignatureState::push(std::span<const double> x) {
  check_vector(x, d_, "push");
  // Top degree first: level n reads the pre-update level n-1, which is what
  // keeps the index ordering strict (the new sample never pairs with itself).
  for (int n = depth_; n >= 1; --n) {
    const auto& lower = levels_[static_cast<std::size_t>(n - 1)];
    std::size_t k = 0;
    for (std::size_t a = 0; a < lower.size(); ++a) {
      const double base = lower[a];
      for (int i = 0; i < d_; ++i) accumulate(n, k++, base * x[static_cast<std::size_t>(i)]);
    }
  }
  count_ += 1.0;
}

void SignatureState::push_segment(std::span<const double> v, double h) {
  check_vector(v, d_, "push_segment");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("push_segment: duration must be > 0");
  concat_with(tensor_exp(v, h, depth_));
}

void SignatureState::concat_with(const SignatureState& other) {
  if (other.d_ != d_ || other.depth_ != depth_)
    throw std::invalid_argument("chen_concat: mismatched dimension or depth");
  // level n += sum_{b=1..n} level(n-b) (x) other.level(b); the b=0 term is the
  // existing content. Descending n so lower levels are still pre-update.
  for (int n = depth_; n >= 1; --n) {
    for (int b = 1; b <= n; ++b) {
      const auto& mine = levels_[static_cast<std::size_t>(n - b)];
      const auto& theirs = other.levels_[static_cast<std::size_t>(b)];
      std::size_t k = 0;
      for (std::size_t a = 0; a < mine.size(); ++a) {
        const double base = mine[a];
        for (std::size_t c = 0; c < theirs.size(); ++c) accumulate(n, k++, base * theirs[c]);
      }
    }
  }
  count_ += other.count_;
}

bool SignatureState::all_finite() const {
  for (const auto& level : levels_)
    if (!level.all_finite()) return false;
  return true;
}

SignatureState chen_concat(const SignatureState& s, const SignatureState& e) {
  SignatureState out = s;
  out.concat_with(e);
  return out;
}

SignatureState tensor_exp(std::span<const double> v, double h, int depth) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("tensor_exp: duration must be > 0");
  const int d = static_cast<int>(v.size());
  SignatureState out(d, depth);
  check_vector(v, d, "tensor_exp");
  std::vector<double> step(v.begin(), v.end());
  for (double& x : step) x *= h;
  // level n = (v*h)^(x)n / n!, built as outer_append(level n-1, v*h) / n.
  for (int n = 1; n <= depth; ++n) {
    const auto& lower = out.levels_[static_cast<std::size_t>(n - 1)];
    auto& target = out.levels_[static_cast<std::size_t>(n)];
    const double inv = 1.0 / static_cast<double>(n);
    std::size_t k = 0;
    for (std::size_t a = 0; a < lower.size(); ++a) {
      const double base = lower[a];
      for (int i = 0; i < d; ++i) target[k++] = base * step[static_cast<std::size_t>(i)] * inv;
    }
  }
  out.count_ = h;
  return out;
}

SignatureState scale_levels(const SignatureState& s, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("scale_levels: scale must be > 0");
  SignatureState out = s;
  double factor = 1.0;
  for (int n = 1; n <= out.depth_; ++n) {
    factor /= t;
    for (double& x : out.levels_[static_cast<std::size_t>(n)].values()) x *= factor;
    if (out.compensated_)
      for (double& c : out.carry_[static_cast<std::size_t>(n)]) c = 0.0;
  }
  return out;
}

}  // namespace itersig
