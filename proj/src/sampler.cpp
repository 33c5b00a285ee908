#include "hbt/sampler.hpp"

#include <cmath>

namespace hbt {

Vertex Sampler::vertex(int anchor_range, int max_word) {
  const int anchor = uniform_int(-anchor_range, anchor_range);
  const int len = uniform_int(0, max_word);
  Vertex::Word w;
  for (int i = 0; i < len; ++i) w.push_back(static_cast<Vertex::Digit>(uniform_int(i == 0 ? 1 : 0, q_ - 1)));
  return Vertex(anchor, std::move(w));
}

Vertex Sampler::descendant(const Vertex& v, int depth) {
  Vertex x = v;
  for (int i = 0; i < depth; ++i) x = x.child(static_cast<Vertex::Digit>(uniform_int(0, q_ - 1)));
  return x;
}

std::vector<double> Sampler::zero_sum_values() {
  std::vector<double> g(static_cast<std::size_t>(q_));
  for (;;) {
    double mean = 0.0;
    for (auto& x : g) {
      x = uniform(-1.0, 1.0);
      mean += x;
    }
    mean /= q_;
    double mag = 0.0;
    for (auto& x : g) {
      x -= mean;
      mag += std::abs(x);
    }
    if (mag > 1e-3) return g;
  }
}

FiniteFunction Sampler::finite_function(int points, int anchor_range, int max_word, double scale) {
  FiniteFunction f;
  while (static_cast<int>(f.size()) < points) {
    double v = uniform(-scale, scale);
    if (v == 0.0) continue;
    f.set(vertex(anchor_range, max_word), v);
  }
  return f;
}

HarmonicCombo Sampler::combo(int terms, int anchor_range, int max_word) {
  HarmonicCombo c;
  while (static_cast<int>(c.terms.size()) < terms)
    c.terms[BasisIndex{vertex(anchor_range, max_word), uniform_int(1, q_ - 1)}] = uniform(-1.0, 1.0);
  return c;
}

}  // namespace hbt
