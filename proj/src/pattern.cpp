#include "csrtone/pattern.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "csrtone/spectrum.hpp"

namespace csrtone {

namespace {

using Mask = std::uint64_t;

Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

Mask rotate_left(Mask m, int r, int n) {
  r %= n;
  if (r == 0) return m;
  return ((m << r) | (m >> (n - r))) & full_mask(n);
}

Mask reverse_bits(Mask m, int n) {
  Mask out = 0;
  for (int i = 0; i < n; ++i) {
    out = (out << 1) | ((m >> i) & 1U);
  }
  return out;
}

Mask bracelet_min(Mask m, int n) {
  Mask best = m;
  const Mask r = reverse_bits(m, n);
  for (int k = 0; k < n; ++k) {
    best = std::min({best, rotate_left(m, k, n), rotate_left(r, k, n)});
  }
  return best;
}

void add_orbit(Mask m, int n, std::vector<Mask>& out) {
  const Mask r = reverse_bits(m, n);
  for (int k = 0; k < n; ++k) {
    out.push_back(rotate_left(m, k, n));
    out.push_back(rotate_left(r, k, n));
  }
}

// Cyclic autocorrelation; two patterns share |DFT|^2 iff these agree.
std::vector<int> autocorrelation(Mask m, int n) {
  std::vector<int> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    a[static_cast<std::size_t>(k)] = std::popcount(m & rotate_left(m, k, n));
  }
  return a;
}

Mask mask_from_gaps(const std::vector<int>& gaps, int n) {
  Mask m = 0;
  int pos = 0;
  for (int g : gaps) {
    m |= Mask{1} << (n - 1 - pos);
    pos += g;
  }
  return m;
}

// True when no rotation of d is lexicographically smaller, i.e. d is the
// representative of its non-cyclic permutation class.
bool least_rotation(const std::vector<int>& d) {
  const std::size_t s = d.size();
  for (std::size_t r = 1; r < s; ++r) {
    for (std::size_t i = 0; i < s; ++i) {
      const int a = d[(i + r) % s];
      const int b = d[i];
      if (a < b) return false;
      if (a > b) break;
    }
  }
  return true;
}

// Partitions of n into exactly `parts` parts, each in non-increasing order.
void partitions(int n, int parts, int max_part, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (n == 0) out.push_back(cur);
    return;
  }
  if (n < parts) return;
  const int hi = std::min(max_part, n - (parts - 1));
  for (int v = hi; v >= 1; --v) {
    if (v * parts < n) break;
    cur.push_back(v);
    partitions(n - v, parts - 1, v, cur, out);
    cur.pop_back();
  }
}

// Necklace counts near n = 64 overflow 64 bits before the final division.
__extension__ using u128 = unsigned __int128;

u128 binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  u128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return r;
}

std::uint64_t totient(int n) {
  std::uint64_t r = 0;
  for (int i = 1; i <= n; ++i) {
    if (std::gcd(i, n) == 1) ++r;
  }
  return r;
}

// Binary necklaces of length n with s set bits (Burnside over rotations).
u128 necklace_count(int n, int s) {
  const int g = std::gcd(n, s);
  u128 sum = 0;
  for (int d = 1; d <= g; ++d) {
    if (g % d == 0) sum += totient(d) * binomial(n / d, s / d);
  }
  return sum / static_cast<unsigned>(n);
}

}  // namespace

Pattern::Pattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("pattern must have at least one bit");
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("pattern bits must be 0 or 1");
  }
}

Pattern Pattern::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  for (char c : text) {
    if (c == ' ' || c == '\t') continue;
    if (c != '0' && c != '1') {
      throw std::invalid_argument("invalid pattern character '" + std::string(1, c) + "'");
    }
    bits.push_back(c == '1' ? 1 : 0);
  }
  return Pattern(std::move(bits));
}

Pattern Pattern::from_mask(std::uint64_t mask, int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("mask patterns support 1..64 bits");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((mask >> (n - 1 - k)) & 1U);
  }
  return Pattern(std::move(bits));
}

bool Pattern::at(std::ptrdiff_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(bits_.size());
  return bits_[static_cast<std::size_t>(((k % n) + n) % n)] != 0;
}

int Pattern::set_bits() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::uint64_t Pattern::mask() const {
  if (bits_.size() > 64) throw std::invalid_argument("pattern too long for a 64-bit mask");
  std::uint64_t m = 0;
  for (auto b : bits_) m = (m << 1) | b;
  return m;
}

std::string Pattern::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

Pattern Pattern::rotated(std::ptrdiff_t shift) const {
  std::vector<std::uint8_t> out(bits_.size());
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    out[k] = at(static_cast<std::ptrdiff_t>(k) + shift) ? 1 : 0;
  }
  return Pattern(std::move(out));
}

Pattern Pattern::mirrored() const {
  return Pattern(std::vector<std::uint8_t>(bits_.rbegin(), bits_.rend()));
}

int DistanceSet::total() const { return std::accumulate(gaps.begin(), gaps.end(), 0); }

DistanceSet distance_set(const Pattern& p) {
  const int n = p.size();
  std::vector<int> ones;
  for (int k = 0; k < n; ++k) {
    if (p[static_cast<std::size_t>(k)]) ones.push_back(k);
  }
  if (ones.empty()) throw std::invalid_argument("no set bits");
  DistanceSet d;
  for (std::size_t i = 0; i < ones.size(); ++i) {
    const int next = i + 1 < ones.size() ? ones[i + 1] : ones.front() + n;
    d.gaps.push_back(next - ones[i]);
  }
  return d;
}

Pattern from_distances(const DistanceSet& d) {
  if (d.gaps.empty()) throw std::invalid_argument("empty distance set");
  if (std::any_of(d.gaps.begin(), d.gaps.end(), [](int g) { return g < 1; })) {
    throw std::invalid_argument("distances must be positive");
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(d.total()), 0);
  std::size_t pos = 0;
  for (int g : d.gaps) {
    bits[pos] = 1;
    pos += static_cast<std::size_t>(g);
  }
  return Pattern(std::move(bits));
}

Pattern canonicalize(const Pattern& p) {
  Pattern best = p;
  const Pattern r = p.mirrored();
  for (int k = 0; k < p.size(); ++k) {
    best = std::min({best, p.rotated(k), r.rotated(k)});
  }
  return best;
}

Pattern dual(const Pattern& p) {
  std::vector<std::uint8_t> out(p.bits().begin(), p.bits().end());
  for (auto& b : out) b ^= 1U;
  return Pattern(std::move(out));
}

std::vector<double> power_signature(const Pattern& p) {
  const ToneSpectrum s = tone_spectrum(p, 1.0);
  std::vector<double> sig(s.amplitudes.size());
  for (std::size_t k = 0; k < sig.size(); ++k) sig[k] = std::norm(s.amplitudes[k]);
  const double peak = *std::max_element(sig.begin(), sig.end());
  if (peak > 0.0) {
    for (auto& v : sig) v /= peak;
  }
  return sig;
}

bool spectrally_equivalent(const Pattern& a, const Pattern& b, double rel_tol) {
  if (a.size() != b.size()) throw std::invalid_argument("patterns have different lengths");
  const auto sa = power_signature(a);
  const auto sb = power_signature(b);
  for (std::size_t k = 0; k < sa.size(); ++k) {
    if (std::abs(sa[k] - sb[k]) > rel_tol) return false;
  }
  return true;
}

std::vector<EquivalenceClass> enumerate_unique(int n, const EnumerateOptions& options) {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (n > kMaxEnumerateBits) {
    throw std::invalid_argument("N exceeds the enumeration cap of " +
                                std::to_string(kMaxEnumerateBits));
  }
  const Mask full = full_mask(n);

  // Bracelet keys of emitted patterns; a bracelet key covers both the cyclic
  // permutations of d and of its mirror.
  std::unordered_set<Mask> emitted;
  std::vector<Mask> reps;
  for (int s = 1; 2 * s <= n; ++s) {
    std::vector<std::vector<int>> multisets;
    std::vector<int> cur;
    partitions(n, s, n, cur, multisets);
    for (auto& d : multisets) {
      std::sort(d.begin(), d.end());
      do {
        if (!least_rotation(d)) continue;
        const Mask m = mask_from_gaps(d, n);
        const Mask key = bracelet_min(m, n);
        if (emitted.contains(key)) continue;
        if (2 * s == n && emitted.contains(bracelet_min(~m & full, n))) continue;
        emitted.insert(key);
        reps.push_back(key);
      } while (std::next_permutation(d.begin(), d.end()));
    }
  }
  reps.push_back(full);

  std::map<std::vector<int>, std::vector<Mask>> groups;
  for (Mask r : reps) groups[autocorrelation(r, n)].push_back(r);

  std::vector<EquivalenceClass> classes;
  classes.reserve(groups.size());
  for (auto& [key, group] : groups) {
    const int s = key.front();
    const bool self_dual_count = 2 * s == n;
    Mask canonical = ~Mask{0};
    std::vector<Mask> members;
    for (Mask r : group) {
      canonical = std::min(canonical, r);
      if (self_dual_count) canonical = std::min(canonical, bracelet_min(~r & full, n));
      if (options.collect_members) {
        add_orbit(r, n, members);
        if (self_dual_count) add_orbit(~r & full, n, members);
      }
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    EquivalenceClass c;
    c.canonical = Pattern::from_mask(canonical, n);
    c.members.reserve(members.size());
    for (Mask m : members) c.members.push_back(Pattern::from_mask(m, n));
    c.signature = power_signature(c.canonical);
    if (2 * s < n) c.dual_canonical = Pattern::from_mask(bracelet_min(~canonical & full, n), n);
    classes.push_back(std::move(c));
  }
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
    return std::pair(a.set_bits(), a.canonical) < std::pair(b.set_bits(), b.canonical);
  });
  return classes;
}

std::vector<EquivalenceClass> expand_duals(const std::vector<EquivalenceClass>& classes) {
  std::vector<EquivalenceClass> out = classes;
  for (const auto& c : classes) {
    if (!c.dual_canonical) continue;
    EquivalenceClass d;
    d.canonical = *c.dual_canonical;
    d.members.reserve(c.members.size());
    for (const auto& m : c.members) d.members.push_back(dual(m));
    std::sort(d.members.begin(), d.members.end());
    d.signature = power_signature(d.canonical);
    d.dual_canonical = c.canonical;
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::pair(a.set_bits(), a.canonical) < std::pair(b.set_bits(), b.canonical);
  });
  return out;
}

CountBounds count_bounds(int n) {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (n > kMaxBoundsBits) {
    throw std::invalid_argument("N exceeds the bounds cap of " + std::to_string(kMaxBoundsBits));
  }
  // Partitions into distinct parts: 0/1 knapsack over parts 1..n.
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= n; ++part) {
    for (int total = n; total >= part; --total) {
      ways[static_cast<std::size_t>(total)] += ways[static_cast<std::size_t>(total - part)];
    }
  }
  CountBounds b;
  b.lower = ways[static_cast<std::size_t>(n)];
  u128 extra = 0;
  for (int s = 1; 2 * s <= n; ++s) extra += necklace_count(n, s);
  b.upper = b.lower + static_cast<std::uint64_t>(extra);
  return b;
}

}  // namespace csrtone
