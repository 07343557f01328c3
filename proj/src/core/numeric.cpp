#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "cubewaring/core.hpp"
#include "cubewaring/error.hpp"

namespace cubewaring::core {

double pow_rational(double base, Rational exponent) {
  if (exponent.den == 1) {
    return std::pow(base, static_cast<double>(exponent.num));
  }
  if (exponent.den == 2) {
    return std::pow(base, static_cast<double>(exponent.num / 2)) *
           std::pow(std::sqrt(base), static_cast<double>(exponent.num % 2));
  }
  return std::pow(base, exponent.to_double());
}

bool checked_pow(u128 base, unsigned exp, u128& out) {
  u128 result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > ~u128{0} / base) return false;
    result *= base;
  }
  out = result;
  return true;
}

u64 iroot(u64 x, unsigned k) {
  if (k == 0) throw ValidationError("iroot: k must be >= 1");
  if (k == 1 || x < 2) return x;
  auto r = static_cast<u64>(std::pow(static_cast<long double>(x), 1.0L / k));
  auto fits = [&](u64 c) {
    u128 v = 0;
    return checked_pow(c, k, v) && v <= x;
  };
  while (r > 0 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return r;
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<ChunkRange> split_chunks(std::size_t count, std::size_t chunks) {
  chunks = std::max<std::size_t>(1, std::min(chunks, std::max<std::size_t>(count, 1)));
  std::vector<ChunkRange> out(chunks);
  const std::size_t base = count / chunks;
  const std::size_t extra = count % chunks;
  std::size_t at = 0;
  for (std::size_t i = 0; i < chunks; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    out[i] = {at, at + len};
    at += len;
  }
  return out;
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_chunks(std::size_t count, std::size_t chunks, unsigned threads,
                     const std::function<void(std::size_t, ChunkRange)>& body) {
  const auto ranges = split_chunks(count, chunks);
  const unsigned workers =
      std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(ranges.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < ranges.size(); ++i) body(i, ranges[i]);
    return;
  }
  // Static round-robin assignment keeps the chunk -> worker map fixed.
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < ranges.size(); i += workers) body(i, ranges[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace cubewaring::core
