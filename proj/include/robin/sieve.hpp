#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace robin {

inline constexpr std::uint64_t kDefaultBlockSize = std::uint64_t{1} << 20;
inline constexpr std::uint32_t kSmallPrimeLimit = 1'000'000;
// Largest n the 64-bit sigma sieve handles without overflow headroom checks.
inline constexpr std::uint64_t kSigmaSieveMax = 1'000'000'000'000ULL;

// Primes up to kSmallPrimeLimit, built once on first use.
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    const std::uint32_t n = kSmallPrimeLimit;
    std::vector<bool> composite(n + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= n; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= n; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// Invokes f(p) for every prime p in [lo, hi], ascending. Segmented, so hi can
// comfortably reach 1e8; requires hi <= kSmallPrimeLimit^2.
template <class F>
inline void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) {
  if (hi < lo) return;
  if (hi > std::uint64_t{kSmallPrimeLimit} * kSmallPrimeLimit)
    throw std::domain_error("for_each_prime: limit exceeds sieve domain");
  constexpr std::uint64_t kSegment = std::uint64_t{1} << 21;
  const auto& primes = small_primes();
  std::vector<bool> composite;
  for (std::uint64_t base = lo; base <= hi; base += kSegment) {
    const std::uint64_t end = std::min(hi, base + kSegment - 1);
    const std::size_t count = static_cast<std::size_t>(end - base + 1);
    composite.assign(count, false);
    for (std::uint32_t p : primes) {
      const std::uint64_t p2 = std::uint64_t{p} * p;
      if (p2 > end) break;
      std::uint64_t start = std::max(p2, (base + p - 1) / p * p);
      for (std::uint64_t m = start; m <= end; m += p)
        composite[static_cast<std::size_t>(m - base)] = true;
    }
    for (std::uint64_t v = std::max<std::uint64_t>(base, 2); v <= end; ++v)
      if (!composite[static_cast<std::size_t>(v - base)]) f(v);
  }
}

// Exact sigma(n) for every n in [lo, hi] via a smallest-prime-factor sweep:
// strip each prime power p^e from the residue and multiply in sigma(p^e);
// whatever remains above 1 is a single prime > sqrt(hi).
inline std::vector<std::uint64_t> sigma_block_values(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || hi < lo) throw std::domain_error("sigma_block_values: need 1 <= lo <= hi");
  if (hi > kSigmaSieveMax)
    throw std::domain_error("sigma_block_values: range exceeds 64-bit sieve domain");
  const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::uint64_t> rem(count);
  std::vector<std::uint64_t> sig(count, 1);
  for (std::size_t i = 0; i < count; ++i) rem[i] = lo + i;
  for (std::uint32_t p : small_primes()) {
    const std::uint64_t p2 = std::uint64_t{p} * p;
    if (p2 > hi) break;
    std::uint64_t start = (lo + p - 1) / p * p;
    for (std::uint64_t m = start; m <= hi; m += p) {
      const std::size_t i = static_cast<std::size_t>(m - lo);
      std::uint64_t pe = 1;
      while (rem[i] % p == 0) {
        rem[i] /= p;
        pe *= p;
      }
      sig[i] *= (pe * p - 1) / (p - 1);
    }
  }
  for (std::size_t i = 0; i < count; ++i)
    if (rem[i] > 1) sig[i] *= rem[i] + 1;
  return sig;
}

// (n, sigma(n)) pairs over one block.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> sieve_sigma_block(
    std::uint64_t lo, std::uint64_t hi, std::uint64_t max_block = kDefaultBlockSize) {
  if (lo < 1 || hi < lo) throw std::domain_error("sieve_sigma_block: need 1 <= lo <= hi");
  if (hi - lo + 1 > max_block)
    throw std::invalid_argument("sieve_sigma_block: block size exceeded");
  auto values = sigma_block_values(lo, hi);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.emplace_back(lo + i, values[i]);
  return out;
}

}  // namespace robin
