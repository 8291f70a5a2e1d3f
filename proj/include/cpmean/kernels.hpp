#pragma once

// OpenMP kernels with serial reference versions. Parallel variants evaluate
// independent terms concurrently and reduce in index order, so they are
// bitwise identical to the serial loop on a fixed platform.

#include <omp.h>

#include <exception>
#include <mutex>
#include <optional>
#include <vector>

#include "cpmean/hermlinalg.hpp"

namespace cpmean {

enum class Exec { serial, parallel };

namespace detail {

// Runs body(k) for k in [0, count) on the OpenMP team; the first exception
// thrown by any iteration is rethrown on the calling thread.
template <class Body>
void omp_for_each(Index count, Body&& body) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 1)
  for (Index k = 0; k < count; ++k) {
    try {
      body(k);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Σ_k term(k), accumulated in index order.
template <class Term>
Matrix ordered_sum_serial(Index count, Index rows, Index cols, Term&& term) {
  Matrix acc = Matrix::Zero(rows, cols);
  for (Index k = 0; k < count; ++k) acc += term(k);
  return acc;
}

template <class Term>
Matrix ordered_sum_parallel(Index count, Index rows, Index cols, Term&& term) {
  std::vector<Matrix> terms(static_cast<std::size_t>(count));
  detail::omp_for_each(count, [&](Index k) { terms[static_cast<std::size_t>(k)] = term(k); });
  Matrix acc = Matrix::Zero(rows, cols);
  for (const Matrix& t : terms) acc += t;
  return acc;
}

template <class Term>
Matrix ordered_sum(Exec exec, Index count, Index rows, Index cols, Term&& term) {
  return exec == Exec::parallel ? ordered_sum_parallel(count, rows, cols, term)
                                : ordered_sum_serial(count, rows, cols, term);
}

/// out[k] = f(k); results are stored by index, so the order of execution
/// never shows in the output.
template <class T, class F>
std::vector<T> map_indexed(Exec exec, Index count, F&& f) {
  std::vector<std::optional<T>> slots(static_cast<std::size_t>(count));
  if (exec == Exec::parallel) {
    detail::omp_for_each(count, [&](Index k) { slots[static_cast<std::size_t>(k)].emplace(f(k)); });
  } else {
    for (Index k = 0; k < count; ++k) slots[static_cast<std::size_t>(k)].emplace(f(k));
  }
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace cpmean
