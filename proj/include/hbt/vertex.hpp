#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hbt {

/// A vertex of the q-homogeneous tree in canonical coordinates.
///
/// The boundary point omega is realised by a reference geodesic (r_k), k in Z,
/// with <r_k> = k. A vertex is written (anchor, word): start at r_anchor and
/// descend along `word`. Digit 0 taken from a geodesic vertex would continue
/// the geodesic, so a nonempty word never starts with 0. With that rule two
/// vertices compare equal iff they are the same tree vertex.
class Vertex {
 public:
  using Digit = std::uint8_t;
  using Word = std::vector<Digit>;

  Vertex() = default;

  /// Reference geodesic vertex r_k.
  static Vertex geodesic(std::int64_t k) { return Vertex(k, {}); }

  /// Throws std::invalid_argument if the word is not canonical.
  Vertex(std::int64_t anchor, Word word);

  std::int64_t anchor() const { return anchor_; }
  const Word& word() const { return word_; }
  std::size_t depth_below_anchor() const { return word_.size(); }

  /// Horocyclic index <x>.
  std::int64_t level() const { return anchor_ + static_cast<std::int64_t>(word_.size()); }

  bool on_geodesic() const { return word_.empty(); }

  /// p(x).
  Vertex predecessor() const;

  /// p^k(x); k >= 0.
  Vertex ancestor(std::int64_t k) const;

  /// Ancestor lying on horocycle `lvl` (lvl <= level()).
  Vertex ancestor_at_level(std::int64_t lvl) const { return ancestor(level() - lvl); }

  /// The successor of x reached by digit d. For a geodesic vertex digit 0
  /// is the next geodesic vertex.
  Vertex child(Digit d) const;

  /// Digit leading from p(x) to x under the canonical successor ordering.
  Digit digit_from_parent() const { return word_.empty() ? Digit{0} : word_.back(); }

  /// Largest digit used in the word (0 for geodesic vertices).
  int max_digit() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b);

  /// Text form `anchor:word`, e.g. `0:`, `-2:10`. Digits beyond 9 use a-z.
  std::string to_string() const;

  /// Parses `anchor:word`. Rejects non-canonical words and digits >= q.
  static Vertex parse(std::string_view text, int q);

 private:
  std::int64_t anchor_ = 0;
  Word word_;
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept;
};

}  // namespace hbt
