#ifndef CSRTONE_PATTERN_HPP
#define CSRTONE_PATTERN_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csrtone {

/// N-bit cyclic bit sequence loaded into the circular shift register.
///
/// Cell k = 0 is the first character of the text form and the first cell to
/// reach the output. Indexing through at() is cyclic. The all-zero pattern is
/// representable but silent().
class Pattern {
public:
  Pattern() = default;
  explicit Pattern(std::vector<std::uint8_t> bits);

  /// Parses '0'/'1' characters; spaces are ignored ("1001 1001").
  static Pattern parse(std::string_view text);

  /// Cell k maps to bit (n - 1 - k) of the mask, so numeric order of masks
  /// equals lexicographic order of the text form.
  static Pattern from_mask(std::uint64_t mask, int n);

  int size() const { return static_cast<int>(bits_.size()); }
  bool operator[](std::size_t k) const { return bits_[k] != 0; }
  bool at(std::ptrdiff_t k) const;
  int set_bits() const;
  bool silent() const { return set_bits() == 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::uint64_t mask() const;
  std::string str() const;

  /// Left rotation: result[k] = this[k + shift].
  Pattern rotated(std::ptrdiff_t shift) const;
  Pattern mirrored() const;

  auto operator<=>(const Pattern&) const = default;

private:
  std::vector<std::uint8_t> bits_;
};

/// Cyclic gaps between consecutive set bits; a gap of 1 means adjacent bits.
struct DistanceSet {
  std::vector<int> gaps;

  int set_bits() const { return static_cast<int>(gaps.size()); }
  int total() const;
  auto operator<=>(const DistanceSet&) const = default;
};

/// Gaps starting from the lowest-index set bit. Throws on a silent pattern.
DistanceSet distance_set(const Pattern& p);

/// Inverse of distance_set: first set bit at cell 0.
Pattern from_distances(const DistanceSet& d);

/// Lexicographically smallest form over all rotations and reversals.
Pattern canonicalize(const Pattern& p);

Pattern dual(const Pattern& p);

/// |c_k|^2 normalised to its maximum, k = 0..N-1. Silent patterns give all zeros.
std::vector<double> power_signature(const Pattern& p);

inline constexpr double kDefaultSignatureTolerance = 1e-9;

bool spectrally_equivalent(const Pattern& a, const Pattern& b,
                           double rel_tol = kDefaultSignatureTolerance);

struct EquivalenceClass {
  Pattern canonical;
  /// Every pattern sharing the class signature; empty unless collected.
  std::vector<Pattern> members;
  std::vector<double> signature;
  /// Canonical form of the dual class when it is a different class (S < N/2).
  std::optional<Pattern> dual_canonical;

  int set_bits() const { return canonical.set_bits(); }
};

struct EnumerateOptions {
  bool collect_members = true;
};

inline constexpr int kMaxEnumerateBits = 24;

/// Unique-pattern catalog for an N-bit register.
///
/// Iterates set-bit counts s = 1..N/2, expands every distance multiset of s
/// parts summing to N into its non-cyclic permutations and keeps those whose
/// rotation, mirror or (for s = N/2) dual class has not been emitted yet. The
/// all-ones pattern is appended. Classes that still share a magnitude
/// spectrum (homometric sets) are merged at the end, so the result is
/// pairwise spectrally distinct. Duals of classes with s < N/2 are unique
/// patterns too; they are listed through dual_canonical and expand_duals().
///
/// Cost grows as 2^N; N is capped at kMaxEnumerateBits.
std::vector<EquivalenceClass> enumerate_unique(int n, const EnumerateOptions& options = {});

/// Adds the dual class of every entry that has one, sorted like enumerate_unique.
std::vector<EquivalenceClass> expand_duals(const std::vector<EquivalenceClass>& classes);

struct CountBounds {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
};

inline constexpr int kMaxBoundsBits = 64;

/// lower: subsets of {1..N} with distinct elements summing to N.
/// upper: lower plus the number of distinct non-cyclic permutations of every
/// distance multiset with at most N/2 parts summing to N.
CountBounds count_bounds(int n);

}  // namespace csrtone

#endif
