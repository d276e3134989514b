#include "nlwave/field.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace nlwave {

FieldLevel::FieldLevel(int n, double fill)
    : n_(n), data_(static_cast<std::size_t>(n + 2) * (n + 2) * (n + 2), fill) {}

void FieldLevel::set_driven_faces(double value) {
  const int s = side();
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      (*this)(0, a, b) = value;
      (*this)(a, 0, b) = value;
      (*this)(a, b, 0) = value;
    }
  }
}

void FieldLevel::sync_ghosts() {
  const int s = side();
  const int g = n_ + 1;
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      (*this)(g, a, b) = (*this)(n_, a, b);
    }
  }
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      (*this)(a, g, b) = (*this)(a, n_, b);
    }
  }
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      (*this)(a, b, g) = (*this)(a, b, n_);
    }
  }
}

bool FieldLevel::ghosts_consistent() const {
  const int g = n_ + 1;
  for (int a = 1; a <= n_; ++a) {
    for (int b = 1; b <= n_; ++b) {
      if ((*this)(g, a, b) != (*this)(n_, a, b)) return false;
      if ((*this)(a, g, b) != (*this)(a, n_, b)) return false;
      if ((*this)(a, b, g) != (*this)(a, b, n_)) return false;
    }
  }
  return true;
}

bool FieldLevel::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double FieldLevel::interior_sup() const {
  double sup = 0.0;
  for (int m = 1; m <= n_; ++m)
    for (int n = 1; n <= n_; ++n)
      for (int p = 1; p <= n_; ++p) sup = std::max(sup, std::abs((*this)(m, n, p)));
  return sup;
}

double InteriorField::max_abs() const {
  double best = 0.0;
  for (double x : data_) best = std::max(best, std::abs(x));
  return best;
}

void parallel_for(int workers, int begin, int end, const std::function<void(int, int)>& body) {
  const int count = end - begin;
  if (count <= 0) return;
  if (workers <= 1 || count == 1) {
    body(begin, end);
    return;
  }
  const int chunks = std::min(workers, count);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(chunks - 1));
    int lo = begin;
    for (int c = 0; c < chunks; ++c) {
      const int hi = lo + count / chunks + (c < count % chunks ? 1 : 0);
      auto task = [&body, &errors, c, lo, hi] {
        try {
          body(lo, hi);
        } catch (...) {
          errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
      };
      if (c + 1 == chunks) {
        task();
      } else {
        pool.emplace_back(task);
      }
      lo = hi;
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double pairwise_sum(std::span<const double> parts) {
  if (parts.empty()) return 0.0;
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  return pairwise_sum(parts.first(half)) + pairwise_sum(parts.subspan(half));
}

}  // namespace nlwave
