#include "khinlab/torus.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace khinlab {

namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);

}  // namespace

IntervalSet1D IntervalSet1D::from_pieces(std::vector<Interval> pieces) {
  for (const auto& p : pieces) {
    if (p.lo < 0 || p.hi > 1) throw std::invalid_argument("interval piece outside [0,1]");
  }
  std::erase_if(pieces, [](const Interval& p) { return p.lo >= p.hi; });
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalSet1D out;
  for (auto& p : pieces) {
    if (!out.pieces_.empty() && p.lo <= out.pieces_.back().hi) {
      if (p.hi > out.pieces_.back().hi) out.pieces_.back().hi = std::move(p.hi);
    } else {
      out.pieces_.push_back(std::move(p));
    }
  }
  return out;
}

IntervalSet1D IntervalSet1D::arc(const Rational& center, const Rational& halfwidth) {
  if (halfwidth < 0) throw std::invalid_argument("arc: negative halfwidth");
  if (halfwidth >= kHalf) return full();
  const Rational c = frac(center);
  Rational lo = c - halfwidth;
  Rational hi = c + halfwidth;
  std::vector<Interval> pieces;
  if (lo < 0) {
    pieces.push_back({lo + 1, kOne});
    lo = 0;
  }
  if (hi > 1) {
    pieces.push_back({kZero, hi - 1});
    hi = 1;
  }
  pieces.push_back({std::move(lo), std::move(hi)});
  return from_pieces(std::move(pieces));
}

IntervalSet1D IntervalSet1D::full() {
  IntervalSet1D out;
  out.pieces_.push_back({kZero, kOne});
  return out;
}

bool IntervalSet1D::contains(const Rational& x) const {
  const Rational v = frac(x);
  // Pieces are half-open, but an interior point of the union is one strictly
  // inside a piece, or on an internal seam at 0 == 1 of a wrapped arc.
  for (const auto& p : pieces_) {
    if (p.lo < v && v < p.hi) return true;
  }
  if (v == 0 && !pieces_.empty() && pieces_.front().lo == 0 && pieces_.back().hi == 1) return true;
  return false;
}

IntervalSet1D progression_set(std::uint64_t q, const Rational& offset, const Rational& halfwidth) {
  if (q == 0) throw std::invalid_argument("progression_set: q must be positive");
  if (halfwidth < 0) throw std::invalid_argument("progression_set: negative halfwidth");
  const Rational qr(from_uint64(q));
  if (halfwidth * 2 * qr > 1) {
    throw std::invalid_argument("progression_set: halfwidth exceeds 1/(2q), boxes would merge");
  }
  if (halfwidth == 0) return {};
  std::vector<Interval> pieces;
  pieces.reserve(q + 1);
  const Rational start = frac(offset) / qr;
  for (std::uint64_t k = 0; k < q; ++k) {
    const Rational center = start + Rational(from_uint64(k)) / qr;  // < 1
    Rational lo = center - halfwidth;
    Rational hi = center + halfwidth;
    if (lo < 0) {
      pieces.push_back({lo + 1, kOne});
      lo = 0;
    }
    if (hi > 1) {
      pieces.push_back({kZero, hi - 1});
      hi = 1;
    }
    pieces.push_back({std::move(lo), std::move(hi)});
  }
  return IntervalSet1D::from_pieces(std::move(pieces));
}

IntervalSet1D intersect(const IntervalSet1D& a, const IntervalSet1D& b) {
  std::vector<Interval> out;
  const auto& pa = a.pieces();
  const auto& pb = b.pieces();
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    const Rational& lo = pa[i].lo > pb[j].lo ? pa[i].lo : pb[j].lo;
    const Rational& hi = pa[i].hi < pb[j].hi ? pa[i].hi : pb[j].hi;
    if (lo < hi) out.push_back({lo, hi});
    if (pa[i].hi < pb[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalSet1D::from_pieces(std::move(out));
}

IntervalSet1D unite(const IntervalSet1D& a, const IntervalSet1D& b) {
  std::vector<Interval> all(a.pieces());
  all.insert(all.end(), b.pieces().begin(), b.pieces().end());
  return IntervalSet1D::from_pieces(std::move(all));
}

Rational measure(const IntervalSet1D& a) {
  Rational total(0);
  for (const auto& p : a.pieces()) total += p.hi - p.lo;
  return total;
}

Rational arc_overlap(const Rational& center_a, const Rational& halfwidth_a,
                     const Rational& center_b, const Rational& halfwidth_b) {
  const Rational ca = frac(center_a);
  const Rational cb = frac(center_b);
  Rational total(0);
  for (int shift = -1; shift <= 1; ++shift) {
    const Rational lo_b = cb + shift - halfwidth_b;
    const Rational hi_b = cb + shift + halfwidth_b;
    const Rational lo_a = ca - halfwidth_a;
    const Rational hi_a = ca + halfwidth_a;
    const Rational& lo = lo_a > lo_b ? lo_a : lo_b;
    const Rational& hi = hi_a < hi_b ? hi_a : hi_b;
    if (lo < hi) total += hi - lo;
  }
  return total;
}

std::string serialize(const IntervalSet1D& a) {
  std::string out;
  for (const auto& p : a.pieces()) {
    if (!out.empty()) out += ';';
    out += to_string(p.lo) + "," + to_string(p.hi);
  }
  return out;
}

IntervalSet1D deserialize_interval_set(const std::string& text) {
  std::vector<Interval> pieces;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto [lo, hi] = parse_rational_pair(item);
    pieces.push_back({std::move(lo), std::move(hi)});
  }
  return IntervalSet1D::from_pieces(std::move(pieces));
}

TorusBox::TorusBox(RationalPair c, RationalPair h) : center(std::move(c)), halfwidth(std::move(h)) {
  if (halfwidth.first < 0 || halfwidth.second < 0 || halfwidth.first > kHalf ||
      halfwidth.second > kHalf) {
    throw std::invalid_argument("torus box halfwidths must lie in [0, 1/2]");
  }
}

TorusBox TorusBox::whole() { return TorusBox({kHalf, kHalf}, {kHalf, kHalf}); }

IntervalSet1D TorusBox::first_factor() const { return IntervalSet1D::arc(center.first, halfwidth.first); }
IntervalSet1D TorusBox::second_factor() const {
  return IntervalSet1D::arc(center.second, halfwidth.second);
}

Rational TorusBox::area() const { return 4 * halfwidth.first * halfwidth.second; }

}  // namespace khinlab
