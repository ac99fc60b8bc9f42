#include "mbqes/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mbqes {

std::size_t triangle_index(int modes, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= modes) throw std::out_of_range("coupling index out of range");
  // Rows 0..i-1 hold modes, modes-1, ..., modes-i+1 entries.
  const auto row_start = static_cast<std::size_t>(i) * static_cast<std::size_t>(2 * modes - i + 1) / 2;
  return row_start + static_cast<std::size_t>(j - i);
}

ModelSpec ModelSpec::zero(int r, int s, std::vector<int> k) {
  ModelSpec m;
  m.r = r;
  m.s = s;
  m.k = std::move(k);
  m.w.assign(static_cast<std::size_t>(r + s), Rational(0));
  m.wq.assign(triangle_size(r + s), Rational(0));
  m.g = 0;
  return m;
}

const Rational& ModelSpec::quadratic(int i, int j) const { return wq.at(triangle_index(modes(), i, j)); }

Rational& ModelSpec::quadratic(int i, int j) { return wq.at(triangle_index(modes(), i, j)); }

void ModelSpec::validate() const {
  if (r < 1) throw std::invalid_argument("model.r must be >= 1");
  if (s < 1) throw std::invalid_argument("model.s must be >= 1");
  const auto n = static_cast<std::size_t>(r + s);
  if (k.size() != n) {
    throw std::invalid_argument("model.k must have r+s = " + std::to_string(n) + " entries");
  }
  for (int ki : k) {
    if (ki < 1) throw std::invalid_argument("model.k entries must be >= 1");
  }
  if (w.size() != n) {
    throw std::invalid_argument("model.w must have r+s = " + std::to_string(n) + " entries");
  }
  if (wq.size() != triangle_size(r + s)) {
    throw std::invalid_argument("model.wq must hold the " + std::to_string(triangle_size(r + s)) +
                                " couplings w_ij with i <= j");
  }
}

ModelSpec ModelSpec::permuted(const std::vector<int>& order) const {
  const int n = modes();
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("mode order has wrong length");
  for (int c = 0; c < n; ++c) {
    if (in_creation_group(c) != in_creation_group(order[static_cast<std::size_t>(c)])) {
      throw std::invalid_argument("mode order mixes the two groups");
    }
  }
  ModelSpec out = *this;
  for (int c = 0; c < n; ++c) {
    const int src = order[static_cast<std::size_t>(c)];
    out.k[static_cast<std::size_t>(c)] = k[static_cast<std::size_t>(src)];
    out.w[static_cast<std::size_t>(c)] = w[static_cast<std::size_t>(src)];
    for (int d = c; d < n; ++d) {
      out.quadratic(c, d) = quadratic(src, order[static_cast<std::size_t>(d)]);
    }
  }
  return out;
}

}  // namespace mbqes
