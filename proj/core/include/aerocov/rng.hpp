#pragma once

#include <cstdint>
#include <random>

namespace aerocov {

// splitmix64 finalizer; used to spread structured seeds over the full
// 64-bit range before feeding the engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for (master seed, task index, subtask index).
// Every Monte-Carlo iteration / analytic realization owns one stream, so
// results do not depend on how work is split across threads.
inline std::mt19937_64 derive_stream(std::uint64_t master, std::uint64_t a = 0,
                                     std::uint64_t b = 0) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ splitmix64(a ^ 0x517cc1b727220a95ULL));
  s = splitmix64(s ^ splitmix64(b ^ 0x6c62272e07bb0142ULL));
  return std::mt19937_64(s);
}

} // namespace aerocov
