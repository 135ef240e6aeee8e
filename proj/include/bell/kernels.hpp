#pragma once

// Data-parallel inner loops.
//
// Each kernel has an OpenMP version and a plain serial reference in
// bell::kernels::serial. The parallel versions are deterministic regardless of
// thread count: trial-indexed work writes to its own slot, integer reductions
// are exact, and floating-point reductions sum fixed-size blocks in index order.
// Tests compare the two paths; bench/ times them against each other.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bell::kernels {

/// Block length for deterministic floating-point reductions.
inline constexpr std::size_t kReductionBlock = 4096;

/// out[i] = draw(i) for every i.
template <class T, class Draw>
void fill_indexed(std::span<T> out, Draw&& draw) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = draw(static_cast<std::uint64_t>(i));
}

/// Sum of term(i) over [0, n) for an integer-valued term.
template <class Term>
std::int64_t sum_integer(std::uint64_t n, Term&& term) {
  std::int64_t total = 0;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (std::int64_t i = 0; i < count; ++i) total += term(static_cast<std::uint64_t>(i));
  return total;
}

/// Sum of term(i) over [0, n) in doubles, blocked so the result does not depend
/// on the number of threads.
template <class Term>
double sum_blocked(std::uint64_t n, Term&& term) {
  const std::uint64_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * kReductionBlock;
    const std::uint64_t hi = lo + kReductionBlock < n ? lo + kReductionBlock : n;
    double s = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

/// out[i * cols + j] = cell(i, j).
template <class T, class Cell>
void fill_grid(std::span<T> out, std::size_t rows, std::size_t cols, Cell&& cell) {
  const auto r = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      out[static_cast<std::size_t>(i) * cols + j] = cell(static_cast<std::size_t>(i), j);
}

namespace serial {

template <class T, class Draw>
void fill_indexed(std::span<T> out, Draw&& draw) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = draw(static_cast<std::uint64_t>(i));
}

template <class Term>
std::int64_t sum_integer(std::uint64_t n, Term&& term) {
  std::int64_t total = 0;
  for (std::uint64_t i = 0; i < n; ++i) total += term(i);
  return total;
}

/// Straight left-to-right accumulation.
template <class Term>
double sum_plain(std::uint64_t n, Term&& term) {
  double total = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) total += term(i);
  return total;
}

template <class T, class Cell>
void fill_grid(std::span<T> out, std::size_t rows, std::size_t cols, Cell&& cell) {
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] = cell(i, j);
}

}  // namespace serial

/// Selects between the parallel kernels and the serial reference at run time.
enum class ExecutionPolicy { parallel, serial };

}  // namespace bell::kernels
