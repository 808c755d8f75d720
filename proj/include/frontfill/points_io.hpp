#pragma once

#include <string>

#include "frontfill/fill.hpp"

namespace frontfill {

// Point-set CSV: header "x[,y[,z]],thread,cell,order", coordinates with
// 17 significant digits ('.' decimal, LF newlines) so doubles round-trip
// bit-exactly. Paths ending in .gz are compressed/decompressed
// transparently. Rows are written in the set's own order; callers wanting
// a canonical file sort by the order column first (see sort_by_order).
template <int D>
void write_points(const PointSet<D>& set, const std::string& path);

// Dimension recorded in the header of a points file.
int points_file_dim(const std::string& path);

// Inverse of write_points. Coordinates and provenance round-trip exactly;
// the seed list is reconstructed from the rows marked thread = -1 (i.e.
// for sets produced by the parallel fill). Malformed rows report their
// line number.
template <int D>
PointSet<D> read_points(const std::string& path);

template <int D>
void sort_by_order(PointSet<D>& set) {
  std::sort(set.points.begin(), set.points.end(),
            [](const PointRecord<D>& a, const PointRecord<D>& b) { return a.order < b.order; });
}

}  // namespace frontfill
