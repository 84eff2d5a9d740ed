#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cybermoraba/error.hpp"

namespace cybermoraba {

inline constexpr int kPointCount = 24;
inline constexpr int kRingSize = 8;

enum class Ring : std::uint8_t { Outer = 0, Middle = 1, Inner = 2 };

constexpr std::string_view to_string(Ring ring) {
  switch (ring) {
    case Ring::Outer: return "outer";
    case Ring::Middle: return "middle";
    case Ring::Inner: return "inner";
  }
  return "?";
}

/// Square coordinate on the 7x7 drawing grid. Column 0 is the left edge,
/// row 0 is the top edge.
struct GridCoord {
  int col = 0;
  int row = 0;
  friend constexpr bool operator==(GridCoord, GridCoord) = default;
};

/// One of the 24 intersections. Ids run ring by ring (outer, middle, inner);
/// within a ring index 0 is the top-left corner and indices proceed
/// clockwise, so even indices are corners and odd indices are midpoints.
class Point {
 public:
  constexpr Point() = default;

  static constexpr Point from_id(int id) {
    if (id < 0 || id >= kPointCount) {
      throw GameError(ErrorCode::invalid_point,
                      "point id out of range: " + std::to_string(id));
    }
    return Point(static_cast<std::uint8_t>(id));
  }

  static constexpr Point from_ring(Ring ring, int index) {
    if (index < 0 || index >= kRingSize) {
      throw GameError(ErrorCode::invalid_point,
                      "ring index out of range: " + std::to_string(index));
    }
    return Point(static_cast<std::uint8_t>(static_cast<int>(ring) * kRingSize + index));
  }

  /// Parses algebraic names such as "a7" or "d2".
  static Point from_name(std::string_view name);

  constexpr int id() const { return value_; }
  constexpr Ring ring() const { return static_cast<Ring>(value_ / kRingSize); }
  constexpr int index() const { return value_ % kRingSize; }
  constexpr bool is_corner() const { return index() % 2 == 0; }

  constexpr GridCoord coord() const {
    constexpr std::array<int, kRingSize> dx{-1, 0, 1, 1, 1, 0, -1, -1};
    constexpr std::array<int, kRingSize> dy{-1, -1, -1, 0, 1, 1, 1, 0};
    const int radius = 3 - static_cast<int>(ring());
    return {3 + dx[index()] * radius, 3 + dy[index()] * radius};
  }

  std::string name() const {
    const GridCoord c = coord();
    return {static_cast<char>('a' + c.col), static_cast<char>('0' + (7 - c.row))};
  }

  friend constexpr auto operator<=>(Point, Point) = default;

 private:
  constexpr explicit Point(std::uint8_t v) : value_(v) {}
  std::uint8_t value_ = 0;
};

inline Point Point::from_name(std::string_view name) {
  if (name.size() == 2 && name[0] >= 'a' && name[0] <= 'g' && name[1] >= '1' &&
      name[1] <= '7') {
    const GridCoord want{name[0] - 'a', 7 - (name[1] - '0')};
    for (int id = 0; id < kPointCount; ++id) {
      if (Point(static_cast<std::uint8_t>(id)).coord() == want) {
        return Point(static_cast<std::uint8_t>(id));
      }
    }
  }
  throw GameError(ErrorCode::invalid_point, "not a board point: '" + std::string(name) + "'");
}

inline std::ostream& operator<<(std::ostream& os, Point p) { return os << p.name(); }

/// Set of points as a 24-bit mask.
using PointMask = std::uint32_t;

constexpr PointMask bit(Point p) { return PointMask{1} << p.id(); }

using MillLine = std::array<Point, 3>;

/// The Morabaraba board graph. Instances are immutable; obtain them through
/// standard_topology() and share the reference freely.
class BoardTopology {
 public:
  explicit BoardTopology(bool diagonals) : diagonals_(diagonals) {
    auto connect = [this](Point a, Point b) {
      adjacency_[a.id()] |= bit(b);
      adjacency_[b.id()] |= bit(a);
    };
    constexpr std::array rings{Ring::Outer, Ring::Middle, Ring::Inner};
    for (Ring ring : rings) {
      for (int i = 0; i < kRingSize; ++i) {
        connect(Point::from_ring(ring, i), Point::from_ring(ring, (i + 1) % kRingSize));
      }
      for (int corner = 0; corner < kRingSize; corner += 2) {
        mills_.push_back({Point::from_ring(ring, corner), Point::from_ring(ring, corner + 1),
                          Point::from_ring(ring, (corner + 2) % kRingSize)});
      }
    }
    for (int i = 0; i < kRingSize; ++i) {
      const bool corner = i % 2 == 0;
      if (corner && !diagonals) continue;
      const Point outer = Point::from_ring(Ring::Outer, i);
      const Point middle = Point::from_ring(Ring::Middle, i);
      const Point inner = Point::from_ring(Ring::Inner, i);
      connect(outer, middle);
      connect(middle, inner);
      mills_.push_back({outer, middle, inner});
    }
    for (std::size_t line = 0; line < mills_.size(); ++line) {
      for (Point p : mills_[line]) mills_by_point_[p.id()].push_back(line);
    }
  }

  int point_count() const { return kPointCount; }
  bool diagonals() const { return diagonals_; }

  PointMask neighbor_mask(Point p) const { return adjacency_[p.id()]; }
  bool is_adjacent(Point a, Point b) const { return (adjacency_[a.id()] & bit(b)) != 0; }

  std::vector<Point> adjacent(Point p) const {
    std::vector<Point> out;
    for (PointMask m = adjacency_[p.id()]; m != 0; m &= m - 1) {
      out.push_back(Point::from_id(std::countr_zero(m)));
    }
    return out;
  }

  const std::vector<MillLine>& mill_lines() const { return mills_; }

  std::vector<MillLine> mills_through(Point p) const {
    std::vector<MillLine> out;
    for (std::size_t line : mills_by_point_[p.id()]) out.push_back(mills_[line]);
    return out;
  }

  /// Indices into mill_lines() for the lines containing p.
  const std::vector<std::size_t>& mill_indices(Point p) const { return mills_by_point_[p.id()]; }

  static constexpr PointMask mask_of(const MillLine& line) {
    return bit(line[0]) | bit(line[1]) | bit(line[2]);
  }

 private:
  bool diagonals_;
  std::array<PointMask, kPointCount> adjacency_{};
  std::vector<MillLine> mills_;
  std::array<std::vector<std::size_t>, kPointCount> mills_by_point_;
};

inline const BoardTopology& standard_topology(bool diagonals = false) {
  static const BoardTopology plain(false);
  static const BoardTopology with_diagonals(true);
  return diagonals ? with_diagonals : plain;
}

/// Line-oriented dump used for test fixtures and debugging:
///   topology 1 diagonals=<0|1>
///   point <id> <name> <ring> <index>
///   adjacent <name> <name>       (each unordered pair once, lower id first)
///   mill <name> <name> <name>
inline void dump_topology(const BoardTopology& topology, std::ostream& os) {
  os << "topology 1 diagonals=" << (topology.diagonals() ? 1 : 0) << '\n';
  for (int id = 0; id < kPointCount; ++id) {
    const Point p = Point::from_id(id);
    os << "point " << id << ' ' << p << ' ' << to_string(p.ring()) << ' ' << p.index() << '\n';
  }
  for (int id = 0; id < kPointCount; ++id) {
    const Point p = Point::from_id(id);
    for (Point q : topology.adjacent(p)) {
      if (q.id() > id) os << "adjacent " << p << ' ' << q << '\n';
    }
  }
  for (const MillLine& line : topology.mill_lines()) {
    os << "mill " << line[0] << ' ' << line[1] << ' ' << line[2] << '\n';
  }
}

}  // namespace cybermoraba
