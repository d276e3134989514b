#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlwave {

/// One time level of the scalar field on [0, n+1]^3, row-major (m slowest, p fastest).
/// Layers 0 are the driven Dirichlet faces, layers n+1 are Neumann ghosts.
class FieldLevel {
 public:
  FieldLevel() = default;
  explicit FieldLevel(int n, double fill = 0.0);

  int n() const { return n_; }
  int side() const { return n_ + 2; }
  std::size_t size() const { return data_.size(); }

  std::size_t offset(int m, int n, int p) const {
    const auto s = static_cast<std::size_t>(n_ + 2);
    return (static_cast<std::size_t>(m) * s + static_cast<std::size_t>(n)) * s +
           static_cast<std::size_t>(p);
  }

  double& operator()(int m, int n, int p) { return data_[offset(m, n, p)]; }
  double operator()(int m, int n, int p) const { return data_[offset(m, n, p)]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const FieldLevel& other) const { return n_ == other.n_; }

  /// Sets every node of the three origin-adjacent faces to value.
  void set_driven_faces(double value);
  /// Copies layer n into ghost layer n+1 along each axis.
  void sync_ghosts();
  bool ghosts_consistent() const;
  bool all_finite() const;

  /// Largest |value| over interior nodes.
  double interior_sup() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Field restricted to interior sites, indexed (m-1, n-1, p-1).
class InteriorField {
 public:
  InteriorField() = default;
  explicit InteriorField(int n, double fill = 0.0)
      : n_(n), data_(static_cast<std::size_t>(n) * n * n, fill) {}

  int n() const { return n_; }
  std::size_t size() const { return data_.size(); }
  /// 1-based interior coordinates.
  std::size_t offset(int m, int n, int p) const {
    const auto s = static_cast<std::size_t>(n_);
    return (static_cast<std::size_t>(m - 1) * s + static_cast<std::size_t>(n - 1)) * s +
           static_cast<std::size_t>(p - 1);
  }
  double& operator()(int m, int n, int p) { return data_[offset(m, n, p)]; }
  double operator()(int m, int n, int p) const { return data_[offset(m, n, p)]; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Runs body(lo, hi) over [begin, end) split into contiguous chunks, one per worker.
/// workers <= 1 runs inline.
void parallel_for(int workers, int begin, int end, const std::function<void(int, int)>& body);

/// Sum of per-slab partial sums, combined pairwise in a fixed order.
double pairwise_sum(std::span<const double> parts);

}  // namespace nlwave
