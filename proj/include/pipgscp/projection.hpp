#pragma once

/**
 * @file projection.hpp
 * @brief Closed-form Euclidean projections onto the simple convex sets that
 *        make up the PIPG constraint set.
 */

#include <variant>
#include <vector>

#include "pipgscp/types.hpp"

namespace pipgscp::pipg {

/// {y : ||y - center|| <= radius}
struct Ball
{
  VecX center;
  double radius = 1.0;
};

/// {y : lower <= y <= upper}; bounds may be infinite.
struct Box
{
  VecX lower;
  VecX upper;
};

/// {value}
struct Singleton
{
  VecX value;
};

/// {y : normal' y <= offset}
struct Halfspace
{
  VecX normal;
  double offset = 0.0;
};

/// {y : normal1' y <= offset1, normal2' y <= offset2}
struct TwoHalfspaces
{
  VecX normal1;
  double offset1 = 0.0;
  VecX normal2;
  double offset2 = 0.0;
};

/// The origin of R^dim.
struct Zero
{
  Index dim = 0;
};

using SetShape = std::variant<Ball, Box, Singleton, Halfspace, TwoHalfspaces, Zero>;

/**
 * @brief A convex set together with the coordinates of z it governs.
 *
 * The coordinates need not be contiguous: the linearized keepout couples the
 * position block of a node with that node's virtual buffer at the tail of z.
 */
struct ProjectableSet
{
  SetShape shape;
  std::vector<Index> indices;

  /// Set over the contiguous range [start, start + dim(shape)).
  static ProjectableSet over_range(SetShape shape, Index start);
  /// Set over an explicit coordinate list.
  static ProjectableSet over_indices(SetShape shape, std::vector<Index> indices);
};

Index dimension(const SetShape& shape);

/// Throws std::invalid_argument when radius <= 0, lower > upper, zero normals
/// or size mismatches between the fields of a shape.
void validate(const SetShape& shape);

/// Euclidean projection of y onto shape. Throws std::invalid_argument on a
/// dimension mismatch.
VecX project(const SetShape& shape, const VecX& y);

/// Allocation-free variant used in the solver hot loop; `out` must already
/// have the right size and may not alias `y`.
void project_into(const SetShape& shape,
                  const Eigen::Ref<const VecX>& y,
                  Eigen::Ref<VecX> out);

/// Signed distance-like membership test: largest constraint violation
/// (0 when y is in the set).
double violation(const SetShape& shape, const VecX& y);

}  // namespace pipgscp::pipg
