#include "hbt/vertex.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace hbt {

namespace {

char digit_char(int d) { return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + d - 10); }

int char_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

}  // namespace

Vertex::Vertex(std::int64_t anchor, Word word) : anchor_(anchor), word_(std::move(word)) {
  if (!word_.empty() && word_.front() == 0)
    throw std::invalid_argument("non-canonical vertex: word may not start with digit 0");
}

Vertex Vertex::predecessor() const {
  Vertex p = *this;
  if (p.word_.empty())
    --p.anchor_;
  else
    p.word_.pop_back();
  return p;
}

Vertex Vertex::ancestor(std::int64_t k) const {
  if (k < 0) throw std::invalid_argument("ancestor: negative step count");
  const auto len = static_cast<std::int64_t>(word_.size());
  if (k <= len) {
    Vertex a;
    a.anchor_ = anchor_;
    a.word_.assign(word_.begin(), word_.end() - k);
    return a;
  }
  return geodesic(anchor_ - (k - len));
}

Vertex Vertex::child(Digit d) const {
  if (word_.empty() && d == 0) return geodesic(anchor_ + 1);
  Vertex c = *this;
  c.word_.push_back(d);
  return c;
}

int Vertex::max_digit() const {
  return word_.empty() ? 0 : *std::max_element(word_.begin(), word_.end());
}

std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
  if (auto c = a.level() <=> b.level(); c != 0) return c;
  if (auto c = a.anchor_ <=> b.anchor_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.word_.begin(), a.word_.end(), b.word_.begin(),
                                                b.word_.end());
}

std::string Vertex::to_string() const {
  std::string s = std::to_string(anchor_);
  s.push_back(':');
  for (Digit d : word_) s.push_back(digit_char(d));
  return s;
}

Vertex Vertex::parse(std::string_view text, int q) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("vertex '" + std::string(text) + "': expected anchor:word");
  const auto head = text.substr(0, colon);
  std::int64_t anchor = 0;
  auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), anchor);
  if (ec != std::errc{} || ptr != head.data() + head.size() || head.empty())
    throw std::invalid_argument("vertex '" + std::string(text) + "': bad anchor at column 1");
  Word word;
  for (std::size_t i = colon + 1; i < text.size(); ++i) {
    const int d = char_digit(text[i]);
    if (d < 0 || d >= q)
      throw std::invalid_argument("vertex '" + std::string(text) + "': digit out of range at column " +
                                  std::to_string(i + 1));
    word.push_back(static_cast<Digit>(d));
  }
  if (!word.empty() && word.front() == 0)
    throw std::invalid_argument("vertex '" + std::string(text) +
                                "': non-canonical word (leading digit 0)");
  return Vertex(anchor, std::move(word));
}

std::size_t VertexHash::operator()(const Vertex& v) const noexcept {
  std::size_t h = std::hash<std::int64_t>{}(v.anchor());
  for (auto d : v.word()) h = h * 1099511628211ULL ^ (d + 1);
  return h;
}

}  // namespace hbt
